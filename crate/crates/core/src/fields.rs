//! Two-phase function pairs (u₁, u₂) on cones, built from eigen-data,
//! sampled on tensor grids with analytically split gradients.
//!
//! A phase is a separable profile u = k·r^α·f(t) on a cap or arc, extended
//! by zero, possibly wrapped by a scaling, a radial factor (1 + εr), or a
//! truncation min(u, c). The piecewise link grid aligns its pieces with the
//! phase supports, so node values of disjoint phases multiply to exactly
//! zero and every quadrature sees a smooth integrand.

use crate::error::{Error, Result};
use crate::geometry::{LinkDomain, LinkKind, LinkSpace, Pole};
use crate::grid::{GridConfig, LinkGrid, RadialGrid};
use crate::spectral::{self, PolarEigenTable};
use std::f64::consts::PI;

/// Where a phase lives on the link coordinate.
#[derive(Clone, Debug)]
pub enum PhaseSupport {
    Cap { theta0: f64, pole: Pole },
    Arc { start: f64, length: f64 },
}

impl PhaseSupport {
    /// Map the link coordinate to the local profile coordinate t and report
    /// the orientation dt/dξ. `None` when outside the closed support.
    fn local(&self, link: &LinkSpace, xi: f64) -> Option<(f64, f64)> {
        match self {
            PhaseSupport::Cap { theta0, pole } => {
                let (t, sign) = match pole {
                    Pole::North => (xi, 1.0),
                    Pole::South => (PI - xi, -1.0),
                };
                (-1e-12..=theta0 + 1e-12)
                    .contains(&t)
                    .then(|| (t.clamp(0.0, *theta0), sign))
            }
            PhaseSupport::Arc { start, length } => {
                let c = link.coordinate_span();
                let t = (xi - start).rem_euclid(c);
                (t <= length + 1e-12).then(|| (t.min(*length), 1.0))
            }
        }
    }
}

/// Angular profile f(t) with derivative, on the local coordinate of a support.
#[derive(Clone, Debug)]
pub enum AngularProfile {
    /// f(t) = cos t — the hemisphere eigenfunction (θ₀ = π/2).
    Cos,
    /// f(t) = sin(πt/L) — the arc eigenfunction.
    SinArc { length: f64 },
    /// f(t) = sin²(πt/L): a non-eigenfunction bump for strict-inequality tests.
    SinSqArc { length: f64 },
    /// Sampled polar cap eigenfunction.
    Polar(PolarEigenTable),
}

impl AngularProfile {
    fn eval(&self, t: f64) -> (f64, f64) {
        match self {
            AngularProfile::Cos => (t.cos(), -t.sin()),
            AngularProfile::SinArc { length } => {
                let w = PI / length;
                ((w * t).sin(), w * (w * t).cos())
            }
            AngularProfile::SinSqArc { length } => {
                let w = PI / length;
                let s = (w * t).sin();
                (s * s, 2.0 * w * s * (w * t).cos())
            }
            AngularProfile::Polar(table) => table.eval(t),
        }
    }
}

/// Point sample of a field: value and signed coordinate derivatives.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointEval {
    pub value: f64,
    pub du_dr: f64,
    /// Derivative in the link coordinate; |∇_Σ u| = |du_dxi| on all
    /// supported links.
    pub du_dxi: f64,
}

/// Closed-form field model, evaluable at any (r, ξ).
#[derive(Clone, Debug)]
pub enum PhaseModel {
    Zero,
    Power {
        k: f64,
        alpha: f64,
        support: PhaseSupport,
        profile: AngularProfile,
    },
    Scaled {
        c: f64,
        base: Box<PhaseModel>,
    },
    RadialFactor {
        eps: f64,
        base: Box<PhaseModel>,
    },
    Truncated {
        level: f64,
        base: Box<PhaseModel>,
    },
}

impl PhaseModel {
    pub fn support(&self) -> Option<&PhaseSupport> {
        match self {
            PhaseModel::Zero => None,
            PhaseModel::Power { support, .. } => Some(support),
            PhaseModel::Scaled { base, .. }
            | PhaseModel::RadialFactor { base, .. }
            | PhaseModel::Truncated { base, .. } => base.support(),
        }
    }

    /// Evaluate at (r, ξ). Membership in the closed support is decided from
    /// the coordinate; boundary points evaluate to the inside limit (the
    /// value there is zero for all built profiles).
    pub fn eval(&self, link: &LinkSpace, r: f64, xi: f64) -> PointEval {
        match self {
            PhaseModel::Zero => PointEval::default(),
            PhaseModel::Power {
                k,
                alpha,
                support,
                profile,
            } => match support.local(link, xi) {
                None => PointEval::default(),
                Some((t, orient)) => {
                    let (f, df) = profile.eval(t);
                    let ra = r.powf(*alpha);
                    PointEval {
                        value: k * ra * f,
                        du_dr: k * alpha * if r > 0.0 { ra / r } else { 0.0 } * f,
                        du_dxi: k * ra * df * orient,
                    }
                }
            },
            PhaseModel::Scaled { c, base } => {
                let e = base.eval(link, r, xi);
                PointEval {
                    value: c * e.value,
                    du_dr: c * e.du_dr,
                    du_dxi: c * e.du_dxi,
                }
            }
            PhaseModel::RadialFactor { eps, base } => {
                let e = base.eval(link, r, xi);
                let g = 1.0 + eps * r;
                PointEval {
                    value: e.value * g,
                    du_dr: e.du_dr * g + eps * e.value,
                    du_dxi: e.du_dxi * g,
                }
            }
            PhaseModel::Truncated { level, base } => {
                let e = base.eval(link, r, xi);
                if e.value >= *level {
                    PointEval {
                        value: *level,
                        du_dr: 0.0,
                        du_dxi: 0.0,
                    }
                } else {
                    e
                }
            }
        }
    }
}

/// A sampled scalar field u(r, ξ) ≥ 0 on the tensor grid over C(Σ), with
/// radial and tangential gradient squares (the tangential samples are
/// |∇_Σ u|², before division by r²). Immutable after construction.
#[derive(Clone, Debug)]
pub struct ConeField {
    link: LinkSpace,
    radial: RadialGrid,
    link_grid: LinkGrid,
    values: Vec<f64>,
    radial_grad_sq: Vec<f64>,
    tangential_grad_sq: Vec<f64>,
    vertex_value: f64,
    piece_supported: Vec<bool>,
    model: PhaseModel,
}

impl ConeField {
    fn build(link: &LinkSpace, radial: RadialGrid, link_grid: LinkGrid, model: PhaseModel) -> Self {
        let piece_supported: Vec<bool> = link_grid
            .pieces()
            .iter()
            .map(|p| {
                let mid = 0.5 * (p.a + p.b);
                match model.support() {
                    None => false,
                    Some(s) => s.local(link, mid).is_some(),
                }
            })
            .collect();
        let m = radial.len();
        let n = link_grid.len();
        let mut values = vec![0.0; m * n];
        let mut radial_grad_sq = vec![0.0; m * n];
        let mut tangential_grad_sq = vec![0.0; m * n];
        for (k, &r) in radial.nodes().iter().enumerate() {
            for (j, &xi) in link_grid.nodes().iter().enumerate() {
                if !piece_supported[link_grid.piece_of(j)] {
                    continue;
                }
                let e = model.eval(link, r, xi);
                values[k * n + j] = e.value;
                radial_grad_sq[k * n + j] = e.du_dr * e.du_dr;
                tangential_grad_sq[k * n + j] = e.du_dxi * e.du_dxi;
            }
        }
        ConeField {
            link: link.clone(),
            radial,
            link_grid,
            values,
            radial_grad_sq,
            tangential_grad_sq,
            vertex_value: 0.0,
            piece_supported,
            model,
        }
    }

    pub fn link(&self) -> &LinkSpace {
        &self.link
    }

    pub fn radial_grid(&self) -> &RadialGrid {
        &self.radial
    }

    pub fn link_grid(&self) -> &LinkGrid {
        &self.link_grid
    }

    pub fn model(&self) -> &PhaseModel {
        &self.model
    }

    pub fn vertex_value(&self) -> f64 {
        self.vertex_value
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.model, PhaseModel::Zero)
    }

    #[inline]
    fn idx(&self, k: usize, j: usize) -> usize {
        k * self.link_grid.len() + j
    }

    pub fn value(&self, k: usize, j: usize) -> f64 {
        self.values[self.idx(k, j)]
    }

    pub fn values_at_radius(&self, k: usize) -> &[f64] {
        let n = self.link_grid.len();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn piece_supported(&self, piece: usize) -> bool {
        self.piece_supported[piece]
    }

    /// ∫_Σ |∇u|²(r_k, ·) dm_Σ from the stored gradient samples.
    pub fn surface_gradient_integral(&self, k: usize) -> f64 {
        let r = self.radial.nodes()[k];
        let n = self.link_grid.len();
        let w = self.link_grid.weights();
        let mut acc = 0.0;
        for j in 0..n {
            let idx = k * n + j;
            acc += w[j] * (self.radial_grad_sq[idx] + self.tangential_grad_sq[idx] / (r * r));
        }
        acc
    }

    /// Split |∇u|² at a grid point: (radial², tangential², total²), where
    /// total² = radial² + tangential²/r². The point must coincide with a
    /// grid node.
    pub fn gradient_split(&self, r: f64, xi: f64) -> Result<(f64, f64, f64)> {
        let k = self
            .radial
            .locate(r, 1e-9)
            .ok_or(Error::PointOffGrid(r, xi))?;
        let j = self
            .link_grid
            .locate(xi, 1e-9)
            .ok_or(Error::PointOffGrid(r, xi))?;
        let idx = self.idx(k, j);
        let rad = self.radial_grad_sq[idx];
        let tang = self.tangential_grad_sq[idx];
        Ok((rad, tang, rad + tang / (r * r)))
    }

    /// Model evaluation at an arbitrary radius over all link nodes.
    pub fn sample_model_at_radius(&self, r: f64) -> Vec<PointEval> {
        self.link_grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(j, &xi)| {
                if self.piece_supported[self.link_grid.piece_of(j)] {
                    self.model.eval(&self.link, r, xi)
                } else {
                    PointEval::default()
                }
            })
            .collect()
    }

    /// A copy whose gradient arrays are centered finite differences of the
    /// stored values (one-sided at piece and grid edges). Used by the
    /// grid-convergence studies; the default arrays are analytic.
    pub fn with_fd_gradients(&self) -> ConeField {
        let mut out = self.clone();
        let m = self.radial.len();
        let n = self.link_grid.len();
        let r = self.radial.nodes();
        // radial direction
        for k in 0..m {
            for j in 0..n {
                let d = if k == 0 {
                    one_sided(
                        r[0],
                        r[1],
                        r[2],
                        self.value(0, j),
                        self.value(1, j),
                        self.value(2, j),
                    )
                } else if k == m - 1 {
                    one_sided(
                        r[m - 1],
                        r[m - 2],
                        r[m - 3],
                        self.value(m - 1, j),
                        self.value(m - 2, j),
                        self.value(m - 3, j),
                    )
                } else {
                    three_point(
                        r[k - 1],
                        r[k],
                        r[k + 1],
                        self.value(k - 1, j),
                        self.value(k, j),
                        self.value(k + 1, j),
                    )
                };
                out.radial_grad_sq[self.idx(k, j)] = d * d;
            }
        }
        // link direction, piecewise
        let xs = self.link_grid.nodes();
        for piece in self.link_grid.pieces() {
            let (lo, cnt) = (piece.first_node, piece.node_count);
            if cnt < 3 {
                continue;
            }
            for k in 0..m {
                for j in lo..lo + cnt {
                    let d = if j == lo {
                        one_sided(
                            xs[j],
                            xs[j + 1],
                            xs[j + 2],
                            self.value(k, j),
                            self.value(k, j + 1),
                            self.value(k, j + 2),
                        )
                    } else if j == lo + cnt - 1 {
                        one_sided(
                            xs[j],
                            xs[j - 1],
                            xs[j - 2],
                            self.value(k, j),
                            self.value(k, j - 1),
                            self.value(k, j - 2),
                        )
                    } else {
                        three_point(
                            xs[j - 1],
                            xs[j],
                            xs[j + 1],
                            self.value(k, j - 1),
                            self.value(k, j),
                            self.value(k, j + 1),
                        )
                    };
                    out.tangential_grad_sq[self.idx(k, j)] = d * d;
                }
            }
        }
        out
    }

    /// Worst deviation between stored gradient magnitudes and centered
    /// finite differences of the values, over interior nodes.
    pub fn gradient_consistency_error(&self) -> f64 {
        let fd = self.with_fd_gradients();
        let mut worst = 0.0f64;
        for idx in 0..self.values.len() {
            let a = self.radial_grad_sq[idx].sqrt();
            let b = fd.radial_grad_sq[idx].sqrt();
            worst = worst.max((a - b).abs());
            let a = self.tangential_grad_sq[idx].sqrt();
            let b = fd.tangential_grad_sq[idx].sqrt();
            worst = worst.max((a - b).abs());
        }
        worst
    }

    /// CSV bundle (one file per array, header row naming the grid) plus a
    /// JSON manifest describing the grids.
    pub fn csv_bundle(&self, name: &str) -> Vec<(String, String)> {
        let arrays = [
            ("values", &self.values),
            ("radial_grad_sq", &self.radial_grad_sq),
            ("tangential_grad_sq", &self.tangential_grad_sq),
        ];
        let mut out = Vec::new();
        for (array_name, data) in arrays {
            let mut s = String::from("r");
            for xi in self.link_grid.nodes() {
                s.push_str(&format!(",xi={}", crate::fmt::sig17(*xi)));
            }
            s.push('\n');
            for (k, r) in self.radial.nodes().iter().enumerate() {
                s.push_str(&crate::fmt::sig17(*r));
                let n = self.link_grid.len();
                for j in 0..n {
                    s.push(',');
                    s.push_str(&crate::fmt::sig17(data[k * n + j]));
                }
                s.push('\n');
            }
            out.push((format!("{name}_{array_name}.csv"), s));
        }
        let manifest = serde_json::json!({
            "name": name,
            "arrays": ["values", "radial_grad_sq", "tangential_grad_sq"],
            "radial_nodes": self.radial.len(),
            "link_nodes": self.link_grid.len(),
            "r_min": self.radial.r_min(),
            "r_max": self.radial.r_max(),
            "vertex_value": self.vertex_value,
        });
        out.push((
            format!("{name}_manifest.json"),
            serde_json::to_string_pretty(&manifest).unwrap(),
        ));
        out
    }
}

fn three_point(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    let (a, b) = (x1 - x0, x2 - x1);
    -b / (a * (a + b)) * y0 + (b - a) / (a * b) * y1 + a / (b * (a + b)) * y2
}

fn one_sided(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    // second-order derivative at x0 from (x0, x1, x2)
    let (a, b) = (x1 - x0, x2 - x0);
    y0 * (-(a + b) / (a * b)) + y1 * (b / (a * (b - a))) + y2 * (-a / (b * (b - a)))
}

/// A two-phase pair with disjoint positivity sets. `domains` are the
/// per-radius positivity slices Γ_i(r), which are radius-independent for
/// the separable pairs built here.
#[derive(Clone, Debug)]
pub struct TwoPhaseCase {
    pub u1: ConeField,
    pub u2: ConeField,
    domains: [Option<LinkDomain>; 2],
    pub label: String,
}

impl TwoPhaseCase {
    pub fn field(&self, i: usize) -> &ConeField {
        match i {
            0 => &self.u1,
            1 => &self.u2,
            _ => panic!("phase index out of range"),
        }
    }

    /// The positivity slice Γ_i(r); radius-independent for separable pairs.
    pub fn domain(&self, i: usize) -> Option<&LinkDomain> {
        self.domains[i].as_ref()
    }

    pub fn link(&self) -> &LinkSpace {
        self.u1.link()
    }

    /// Multiply the phases by constants (c₁, c₂).
    pub fn scaled(&self, c1: f64, c2: f64) -> TwoPhaseCase {
        self.map_models(
            |m, i| {
                let c = if i == 0 { c1 } else { c2 };
                match m {
                    PhaseModel::Zero => PhaseModel::Zero,
                    other => PhaseModel::Scaled {
                        c,
                        base: Box::new(other),
                    },
                }
            },
            format!("{}·scaled", self.label),
        )
    }

    /// Multiply both phases by (1 + εr): strictly subharmonic for ε > 0.
    pub fn with_radial_factor(&self, eps: f64) -> TwoPhaseCase {
        self.map_models(
            |m, _| match m {
                PhaseModel::Zero => PhaseModel::Zero,
                other => PhaseModel::RadialFactor {
                    eps,
                    base: Box::new(other),
                },
            },
            format!("{}·(1+{eps}r)", self.label),
        )
    }

    /// Both phases with finite-difference gradient arrays, for the
    /// grid-convergence studies.
    pub fn with_fd_gradients(&self) -> TwoPhaseCase {
        TwoPhaseCase {
            u1: self.u1.with_fd_gradients(),
            u2: self.u2.with_fd_gradients(),
            domains: self.domains.clone(),
            label: format!("{}·fd", self.label),
        }
    }

    /// Replace phase `i` by min(u_i, level): superharmonic at the level set,
    /// so the subharmonicity check must fail there.
    pub fn with_truncated_phase(&self, i: usize, level: f64) -> TwoPhaseCase {
        self.map_models(
            |m, idx| {
                if idx != i {
                    return m;
                }
                match m {
                    PhaseModel::Zero => PhaseModel::Zero,
                    other => PhaseModel::Truncated {
                        level,
                        base: Box::new(other),
                    },
                }
            },
            format!("{}·trunc", self.label),
        )
    }

    fn map_models(
        &self,
        f: impl Fn(PhaseModel, usize) -> PhaseModel,
        label: String,
    ) -> TwoPhaseCase {
        let m1 = f(self.u1.model.clone(), 0);
        let m2 = f(self.u2.model.clone(), 1);
        TwoPhaseCase {
            u1: ConeField::build(
                self.u1.link(),
                self.u1.radial.clone(),
                self.u1.link_grid.clone(),
                m1,
            ),
            u2: ConeField::build(
                self.u2.link(),
                self.u2.radial.clone(),
                self.u2.link_grid.clone(),
                m2,
            ),
            domains: self.domains.clone(),
            label,
        }
    }
}

/// Direction of the halfspace pair's positive phase: the pole of the cap
/// coordinate on spheres, a free angle on the full circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PoleSpec {
    North,
    South,
    /// Pole at a given circle coordinate; requires N = 2 on the circle link.
    Angle(f64),
}

/// The linear pair u₁ = k₁ r (cosθ)⁺, u₂ = k₂ r (cosθ)⁻ on the cone over
/// the round N-sphere (= ℝ^N), supported on complementary hemispheres.
pub fn build_halfspace_pair(
    n: u32,
    k1: f64,
    k2: f64,
    pole: PoleSpec,
    cfg: &GridConfig,
) -> Result<TwoPhaseCase> {
    if k1 <= 0.0 {
        return Err(Error::NonPositiveAmplitude(k1));
    }
    if k2 <= 0.0 {
        return Err(Error::NonPositiveAmplitude(k2));
    }
    cfg.validate()?;
    match pole {
        PoleSpec::Angle(s0) => {
            if n != 2 {
                return Err(Error::Invalid(
                    "a continuous pole angle needs the circle link (N = 2)".into(),
                ));
            }
            let link = LinkSpace::circle(2.0 * PI)?;
            let start1 = (s0 - PI / 2.0).rem_euclid(2.0 * PI);
            build_arc_pair(
                &link,
                start1,
                PI,
                PI,
                k1,
                k2,
                cfg,
                format!("halfspace:circle:s0={s0}"),
            )
        }
        PoleSpec::North | PoleSpec::South => {
            let link = LinkSpace::round_sphere(n)?;
            let radial = RadialGrid::from_config(cfg);
            let link_grid = LinkGrid::build(&link, cfg.link_nodes, &[PI / 2.0]);
            let (p1, p2) = match pole {
                PoleSpec::North => (Pole::North, Pole::South),
                _ => (Pole::South, Pole::North),
            };
            let phase = |k: f64, p: Pole| PhaseModel::Power {
                k,
                alpha: 1.0,
                support: PhaseSupport::Cap {
                    theta0: PI / 2.0,
                    pole: p,
                },
                profile: AngularProfile::Cos,
            };
            let u1 = ConeField::build(&link, radial.clone(), link_grid.clone(), phase(k1, p1));
            let u2 = ConeField::build(&link, radial, link_grid, phase(k2, p2));
            let d1 = LinkDomain::cap(&link, PI / 2.0, p1)?;
            let d2 = LinkDomain::cap(&link, PI / 2.0, p2)?;
            Ok(TwoPhaseCase {
                u1,
                u2,
                domains: [Some(d1), Some(d2)],
                label: format!("halfspace:N={n}:{pole:?}"),
            })
        }
    }
}

/// Geometry of a homogeneous pair: complementary polar caps (θ₀, π − θ₀),
/// or arcs (L₁, L₂) with L₁ + L₂ ≤ c starting at `start`.
#[derive(Clone, Copy, Debug)]
pub enum PairSpec {
    CapPair { theta0: f64 },
    ArcPair { start: f64, l1: f64, l2: f64 },
}

/// Homogeneous harmonic pair u_i = k_i r^{α_i} f_i extended by zero, with
/// eigen-data from the spectral module. Passing k_i = 0 degenerates that
/// phase to the zero field.
pub fn build_homogeneous_pair(
    link: &LinkSpace,
    spec: PairSpec,
    k1: f64,
    k2: f64,
    cfg: &GridConfig,
) -> Result<TwoPhaseCase> {
    if k1 < 0.0 {
        return Err(Error::NonPositiveAmplitude(k1));
    }
    if k2 < 0.0 {
        return Err(Error::NonPositiveAmplitude(k2));
    }
    cfg.validate()?;
    match spec {
        PairSpec::CapPair { theta0 } => {
            if !link.is_polar() {
                return Err(Error::ShapeMismatch("cap", link.kind().name()));
            }
            if !(theta0 > 0.0 && theta0 < PI) {
                return Err(Error::OutOfRange {
                    what: "cap polar radius",
                    range: "(0, π)",
                    value: theta0,
                });
            }
            let n = link.ambient_dim();
            let radial = RadialGrid::from_config(cfg);
            let link_grid = LinkGrid::build(link, cfg.link_nodes, &[theta0]);
            let make_phase = |k: f64, cap: f64, pole: Pole| -> Result<PhaseModel> {
                if k == 0.0 {
                    return Ok(PhaseModel::Zero);
                }
                let (alpha, profile) = if n == 2 {
                    // the polar cap on the 1-sphere is an arc of length 2θ₀
                    // centred at the pole; in the polar coordinate its
                    // eigenfunction is f(t) = cos(πt/(2θ₀)), λ = (π/(2θ₀))²
                    let lam = (PI / (2.0 * cap)).powi(2);
                    (
                        spectral::characteristic_constant(lam, 2),
                        AngularProfile::Polar(cos_like_table(cap)),
                    )
                } else {
                    let eig = spectral::cap_eigenvalue(n, cap)?;
                    let table = PolarEigenTable::build(n, eig.lambda, cap);
                    (eig.alpha, AngularProfile::Polar(table))
                };
                Ok(PhaseModel::Power {
                    k,
                    alpha,
                    support: PhaseSupport::Cap { theta0: cap, pole },
                    profile,
                })
            };
            let m1 = make_phase(k1, theta0, Pole::North)?;
            let m2 = make_phase(k2, PI - theta0, Pole::South)?;
            let u1 = ConeField::build(link, radial.clone(), link_grid.clone(), m1);
            let u2 = ConeField::build(link, radial, link_grid, m2);
            let d1 = (k1 > 0.0)
                .then(|| LinkDomain::cap(link, theta0, Pole::North))
                .transpose()?;
            let d2 = (k2 > 0.0)
                .then(|| LinkDomain::cap(link, PI - theta0, Pole::South))
                .transpose()?;
            Ok(TwoPhaseCase {
                u1,
                u2,
                domains: [d1, d2],
                label: format!("homogeneous:{}:theta0={theta0}", link.kind().name()),
            })
        }
        PairSpec::ArcPair { start, l1, l2 } => build_arc_pair(
            link,
            start,
            l1,
            l2,
            k1,
            k2,
            cfg,
            format!("homogeneous:circle:l1={l1},l2={l2}"),
        ),
    }
}

/// Polar-symmetric eigenfunction of the N = 2 cap {θ < θ₀}: cos(πθ/(2θ₀)).
fn cos_like_table(theta0: f64) -> PolarEigenTable {
    // small analytic table; reuse the Hermite evaluator for a uniform API
    PolarEigenTable::from_closure(theta0, 1024, |t| {
        let w = PI / (2.0 * theta0);
        ((w * t).cos(), -w * (w * t).sin())
    })
}

#[allow(clippy::too_many_arguments)]
fn build_arc_pair(
    link: &LinkSpace,
    start: f64,
    l1: f64,
    l2: f64,
    k1: f64,
    k2: f64,
    cfg: &GridConfig,
    label: String,
) -> Result<TwoPhaseCase> {
    let c = match link.kind() {
        LinkKind::Circle => link.circumference().unwrap(),
        _ => return Err(Error::ShapeMismatch("arc", link.kind().name())),
    };
    if l1 + l2 > c + 1e-12 {
        return Err(Error::OverlappingDomains);
    }
    let start = start.rem_euclid(c);
    let radial = RadialGrid::from_config(cfg);
    // split the circle at the arc endpoints (modular)
    let mut cuts: Vec<f64> = vec![start, (start + l1) % c, (start + l1 + l2) % c];
    cuts.retain(|&x| x > 1e-12 && x < c - 1e-12);
    cuts.sort_by(f64::total_cmp);
    let link_grid = LinkGrid::build(link, cfg.link_nodes, &cuts);
    let make = |k: f64, s: f64, l: f64| -> PhaseModel {
        if k == 0.0 || l == 0.0 {
            PhaseModel::Zero
        } else {
            PhaseModel::Power {
                k,
                alpha: PI / l,
                support: PhaseSupport::Arc {
                    start: s,
                    length: l,
                },
                profile: AngularProfile::SinArc { length: l },
            }
        }
    };
    let u1 = ConeField::build(link, radial.clone(), link_grid.clone(), make(k1, start, l1));
    let u2 = ConeField::build(link, radial, link_grid, make(k2, (start + l1) % c, l2));
    let d1 = (k1 > 0.0)
        .then(|| LinkDomain::arc(link, start, l1))
        .transpose()?;
    let d2 = (k2 > 0.0)
        .then(|| LinkDomain::arc(link, (start + l1) % c, l2))
        .transpose()?;
    Ok(TwoPhaseCase {
        u1,
        u2,
        domains: [d1, d2],
        label,
    })
}

/// Test pair whose first phase carries the non-eigenfunction bump profile
/// sin²(πt/L₁) at the eigen-exponent α = π/L₁. Its Rayleigh quotient is
/// strictly above λ(Γ₁), so the derivative-eigenvalue bound must be slack.
#[cfg(test)]
pub(crate) fn build_bump_arc_pair(
    link: &LinkSpace,
    k1: f64,
    k2: f64,
    l1: f64,
    l2: f64,
    cfg: &GridConfig,
) -> Result<TwoPhaseCase> {
    let mut case = build_arc_pair(link, 0.0, l1, l2, k1, k2, cfg, "bump:circle".into())?;
    let bumped = PhaseModel::Power {
        k: k1,
        alpha: PI / l1,
        support: PhaseSupport::Arc {
            start: 0.0,
            length: l1,
        },
        profile: AngularProfile::SinSqArc { length: l1 },
    };
    case.u1 = ConeField::build(
        link,
        case.u1.radial.clone(),
        case.u1.link_grid.clone(),
        bumped,
    );
    Ok(case)
}

// ---------------------------------------------------------------------------
// Hypothesis checks and positivity slices
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct HypothesisOptions {
    /// Weak-form tolerance as a multiple of the test-function energy.
    pub tol_sub: f64,
    /// Stride between tent centers; 1 tests every grid node.
    pub stride: usize,
    /// Evaluate integrands from the closed-form model (default) or by
    /// bilinear interpolation of the stored arrays (used by refinement
    /// studies).
    pub from_arrays: bool,
}

impl Default for HypothesisOptions {
    fn default() -> Self {
        HypothesisOptions {
            tol_sub: 1e-6,
            stride: 4,
            from_arrays: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SubharmonicityCheck {
    pub pass: bool,
    /// Most negative tested value of −∫⟨∇u, ∇φ⟩, normalized by E(φ).
    pub worst_ratio: f64,
    pub worst_location: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct HypothesesReport {
    pub vertex_ok: bool,
    pub product_ok: bool,
    pub max_product: f64,
    pub subharmonicity: [SubharmonicityCheck; 2],
}

impl HypothesesReport {
    pub fn all_pass(&self) -> bool {
        self.vertex_ok && self.product_ok && self.subharmonicity.iter().all(|c| c.pass)
    }
}

/// Verify the structural hypotheses of a two-phase pair at grid scale:
/// zero vertex values, node-wise zero products, and weak subharmonicity of
/// each phase against a family of nonnegative tent test functions.
pub fn check_two_phase_hypotheses(
    case: &TwoPhaseCase,
    opts: &HypothesisOptions,
) -> HypothesesReport {
    let vertex_ok = case.u1.vertex_value() == 0.0 && case.u2.vertex_value() == 0.0;
    let mut max_product = 0.0f64;
    for idx in 0..case.u1.values.len() {
        max_product = max_product.max((case.u1.values[idx] * case.u2.values[idx]).abs());
    }
    let product_ok = max_product == 0.0;

    let subharmonicity = [
        weak_subharmonicity(&case.u1, opts),
        weak_subharmonicity(&case.u2, opts),
    ];
    HypothesesReport {
        vertex_ok,
        product_ok,
        max_product,
        subharmonicity,
    }
}

/// Angular tents: interior ones centered at grid nodes, plus one tent per
/// internal piece boundary so that free-boundary flux is always probed.
fn angular_tents(grid: &LinkGrid, stride: usize, circle_span: Option<f64>) -> Vec<(f64, f64, f64)> {
    let xs = grid.nodes();
    let mut tents = Vec::new();
    for piece in grid.pieces() {
        let lo = piece.first_node;
        let hi = lo + piece.node_count;
        let mut j = lo + 1;
        while j + 1 < hi {
            tents.push((xs[j - 1], xs[j], xs[j + 1]));
            j += stride.max(1);
        }
    }
    // interface tents peak exactly at the breakpoints; arms step inward past
    // any node sitting on the breakpoint itself (closed circle grids place
    // one there on each side)
    let inward_left = |piece: &crate::grid::LinkPiece, edge: f64| -> f64 {
        let mut j = piece.first_node + piece.node_count - 1;
        while j > piece.first_node && xs[j] >= edge - 1e-14 {
            j -= 1;
        }
        xs[j]
    };
    let inward_right = |piece: &crate::grid::LinkPiece, edge: f64| -> f64 {
        let mut j = piece.first_node;
        while j + 1 < piece.first_node + piece.node_count && xs[j] <= edge + 1e-14 {
            j += 1;
        }
        xs[j]
    };
    let pieces = grid.pieces();
    for w in pieces.windows(2) {
        let edge = w[0].b;
        let a = inward_left(&w[0], edge);
        let b = inward_right(&w[1], edge);
        if edge - a > 1e-14 && b - edge > 1e-14 {
            tents.push((a, edge, b));
        }
    }
    // circle wrap tent across 0 ≡ c
    if let Some(c) = circle_span {
        let first = pieces.first().unwrap();
        let last = pieces.last().unwrap();
        let a = inward_left(last, c) - c;
        let b = inward_right(first, 0.0);
        if -a > 1e-14 && b > 1e-14 {
            tents.push((a, 0.0, b));
        }
    }
    tents
}

fn weak_subharmonicity(field: &ConeField, opts: &HypothesisOptions) -> SubharmonicityCheck {
    if field.is_zero() {
        return SubharmonicityCheck {
            pass: true,
            worst_ratio: 0.0,
            worst_location: (0.0, 0.0),
        };
    }
    let link = field.link();
    let rs = field.radial_grid().nodes();
    let circle_span = (link.kind() == LinkKind::Circle).then(|| link.coordinate_span());
    let tents = angular_tents(field.link_grid(), opts.stride, circle_span);

    let radial_centers: Vec<usize> = (1..rs.len() - 1).step_by(opts.stride.max(1)).collect();
    let results = crate::par::map_slice(&radial_centers, crate::par::Exec::default(), |&k| {
        let mut worst = f64::INFINITY;
        let mut loc = (0.0, 0.0);
        for &(ta, tb, tc) in &tents {
            let (val, energy) = tent_pairing(field, rs[k - 1], rs[k], rs[k + 1], ta, tb, tc, opts);
            if energy <= 0.0 {
                continue;
            }
            let ratio = val / energy;
            if ratio < worst {
                worst = ratio;
                loc = (rs[k], tb);
            }
        }
        (worst, loc)
    });
    let (mut worst, mut loc) = (f64::INFINITY, (0.0, 0.0));
    for (w, l) in results {
        if w < worst {
            worst = w;
            loc = l;
        }
    }
    SubharmonicityCheck {
        pass: worst >= -opts.tol_sub,
        worst_ratio: worst,
        worst_location: loc,
    }
}

/// (−∫⟨∇u, ∇φ⟩ dm, ∫|∇φ|² dm) for the tensor tent peaking at (r_mid, tb).
#[allow(clippy::too_many_arguments)]
fn tent_pairing(
    field: &ConeField,
    r_lo: f64,
    r_mid: f64,
    r_hi: f64,
    ta: f64,
    tb: f64,
    tc: f64,
    opts: &HypothesisOptions,
) -> (f64, f64) {
    let link = field.link();
    let n_dim = link.ambient_dim() as i32;
    let span = link.coordinate_span();
    let (gx, gw) = crate::quad::gauss_legendre(4);

    let mut pairing = 0.0;
    let mut energy = 0.0;
    // split angular arms at piece breakpoints so each 2-D cell is smooth
    let angular_cells = split_at_breakpoints(field.link_grid(), ta, tb, tc);
    for &(xa, xb, t_sign) in &angular_cells {
        // tent arm over this sub-cell: rising on [ta, tb], falling on [tb, tc]
        let dt = if t_sign > 0.0 {
            1.0 / (tb - ta)
        } else {
            -1.0 / (tc - tb)
        };
        let t_at = |x: f64| {
            if t_sign > 0.0 {
                (x - ta) / (tb - ta)
            } else {
                (tc - x) / (tc - tb)
            }
        };
        for &(ra, rb, r_sign) in &[(r_lo, r_mid, 1.0), (r_mid, r_hi, -1.0)] {
            let dtr = if r_sign > 0.0 {
                1.0 / (r_mid - r_lo)
            } else {
                -1.0 / (r_hi - r_mid)
            };
            let tr_at = |r: f64| {
                if r_sign > 0.0 {
                    (r - r_lo) / (r_mid - r_lo)
                } else {
                    (r_hi - r) / (r_hi - r_mid)
                }
            };
            for (ru, rw) in gx.iter().zip(&gw) {
                let r = 0.5 * (ra + rb) + 0.5 * (rb - ra) * ru;
                let wr = 0.5 * (rb - ra) * rw;
                for (xu, xw) in gx.iter().zip(&gw) {
                    let x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * xu;
                    let wx = 0.5 * (xb - xa) * xw;
                    let xi = x.rem_euclid(span);
                    let weight = wr * wx * r.powi(n_dim - 1) * link.coordinate_weight(xi);
                    let phi_r = tr_at(r);
                    let phi_t = t_at(x);
                    let dphi_dr = dtr * phi_t;
                    let dphi_dxi = dt * phi_r;
                    let e = eval_for_quadrature(field, r, xi, opts);
                    pairing += weight * (e.du_dr * dphi_dr + e.du_dxi * dphi_dxi / (r * r));
                    energy += weight * (dphi_dr * dphi_dr + dphi_dxi * dphi_dxi / (r * r));
                }
            }
        }
    }
    (-pairing, energy)
}

fn split_at_breakpoints(grid: &LinkGrid, ta: f64, tb: f64, tc: f64) -> Vec<(f64, f64, f64)> {
    let mut cells = Vec::new();
    for &(a, b, sign) in &[(ta, tb, 1.0), (tb, tc, -1.0)] {
        let mut cuts = vec![a];
        for piece in grid.pieces() {
            for &edge in &[piece.a, piece.b] {
                if edge > a + 1e-14 && edge < b - 1e-14 {
                    cuts.push(edge);
                }
            }
        }
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
        for w in cuts.windows(2) {
            cells.push((w[0], w[1], sign));
        }
    }
    cells
}

fn eval_for_quadrature(field: &ConeField, r: f64, xi: f64, opts: &HypothesisOptions) -> PointEval {
    if !opts.from_arrays {
        return field.model.eval(field.link(), r, xi);
    }
    // bilinear interpolation of the stored values, gradients by cell slopes
    let rg = field.radial_grid();
    let k = rg.segment_below(r).min(rg.len() - 2);
    let xs = field.link_grid().nodes();
    let mut j = match xs.binary_search_by(|v| v.total_cmp(&xi)) {
        Ok(i) => i,
        Err(0) => 0,
        Err(i) => i - 1,
    };
    j = j.min(xs.len() - 2);
    let (r0, r1) = (rg.nodes()[k], rg.nodes()[k + 1]);
    let (x0, x1) = (xs[j], xs[j + 1]);
    if x1 - x0 < 1e-14 {
        return PointEval::default();
    }
    let tr = (r - r0) / (r1 - r0);
    let tx = (xi - x0) / (x1 - x0);
    let v00 = field.value(k, j);
    let v01 = field.value(k, j + 1);
    let v10 = field.value(k + 1, j);
    let v11 = field.value(k + 1, j + 1);
    let value = (1.0 - tr) * ((1.0 - tx) * v00 + tx * v01) + tr * ((1.0 - tx) * v10 + tx * v11);
    let du_dr = ((1.0 - tx) * (v10 - v00) + tx * (v11 - v01)) / (r1 - r0);
    let du_dxi = ((1.0 - tr) * (v01 - v00) + tr * (v11 - v10)) / (x1 - x0);
    PointEval {
        value,
        du_dr,
        du_dxi,
    }
}

/// Max |∫⟨∇u, ∇φ⟩ dm| / E(φ) over tents supported strictly inside the
/// positivity set, the discrete weak-harmonicity residual. Harmonic phases
/// drive it to zero under grid refinement; measured from the stored arrays
/// when `opts.from_arrays` is set, which is how the refinement study is run.
pub fn harmonicity_residual(field: &ConeField, opts: &HypothesisOptions) -> f64 {
    if field.is_zero() {
        return 0.0;
    }
    let rs = field.radial_grid().nodes();
    let grid = field.link_grid();
    let xs = grid.nodes();
    // interior angular tents only: all three knots inside one supported piece
    let mut tents = Vec::new();
    for (pi, piece) in grid.pieces().iter().enumerate() {
        if !field.piece_supported(pi) {
            continue;
        }
        let lo = piece.first_node;
        let hi = lo + piece.node_count;
        let mut j = lo + 1;
        while j + 1 < hi {
            tents.push((xs[j - 1], xs[j], xs[j + 1]));
            j += opts.stride.max(1);
        }
    }
    let radial_centers: Vec<usize> = (1..rs.len() - 1).step_by(opts.stride.max(1)).collect();
    let worst = crate::par::map_slice(&radial_centers, crate::par::Exec::default(), |&k| {
        let mut w = 0.0f64;
        for &(ta, tb, tc) in &tents {
            let (val, energy) = tent_pairing(field, rs[k - 1], rs[k], rs[k + 1], ta, tb, tc, opts);
            if energy > 0.0 {
                w = w.max(val.abs() / energy);
            }
        }
        w
    });
    worst.into_iter().fold(0.0, f64::max)
}

/// Positivity slices (Γ₁(r), Γ₂(r)) extracted from the sign pattern of the
/// field values at radius r. Support ends falling between a positive node
/// and a zero node snap to the piece boundary in between, which recovers
/// the analytic builders' supports exactly; `None` marks a degenerate
/// (empty) phase.
pub fn positivity_slices(
    case: &TwoPhaseCase,
    r: f64,
) -> Result<(Option<LinkDomain>, Option<LinkDomain>)> {
    let rg = case.u1.radial_grid();
    if !(rg.r_min() <= r && r <= rg.r_max()) {
        return Err(Error::RadiusOutOfGrid(r, rg.r_min(), rg.r_max()));
    }
    Ok((extract_slice(&case.u1, r)?, extract_slice(&case.u2, r)?))
}

fn extract_slice(field: &ConeField, r: f64) -> Result<Option<LinkDomain>> {
    let link = field.link();
    let grid = field.link_grid();
    let xs = grid.nodes();
    let vals = field.sample_model_at_radius(r);
    let pos: Vec<bool> = vals.iter().map(|e| e.value > 0.0).collect();
    if !pos.iter().any(|&p| p) {
        return Ok(None);
    }
    // boundary between adjacent nodes of opposite sign: snap to a piece edge
    // if one separates them, otherwise interpolate the value linearly toward
    // the zero side
    let crossing = |j_left: usize, j_right: usize| -> f64 {
        let (a, b) = (xs[j_left], xs[j_right]);
        for piece in grid.pieces() {
            for &edge in &[piece.a, piece.b] {
                if edge >= a - 1e-14 && edge <= b + 1e-14 {
                    return edge.clamp(a, b);
                }
            }
        }
        let (va, vb) = (vals[j_left].value.max(0.0), vals[j_right].value.max(0.0));
        if va > 0.0 {
            a + (b - a) * va / (va - vb).max(1e-300)
        } else {
            b - (b - a) * vb / (vb - va).max(1e-300)
        }
    };

    let mut runs: Vec<(f64, f64)> = Vec::new();
    let n = xs.len();
    let mut j = 0;
    while j < n {
        if pos[j] {
            let start_edge = if j == 0 {
                0.0
            } else {
                crossing(j - 1, j).min(xs[j])
            };
            let mut k = j;
            while k + 1 < n && pos[k + 1] {
                k += 1;
            }
            let end_edge = if k == n - 1 {
                link.coordinate_span()
            } else {
                crossing(k, k + 1).max(xs[k])
            };
            runs.push((start_edge, end_edge));
            j = k + 1;
        } else {
            j += 1;
        }
    }

    let span = link.coordinate_span();
    let domain = if link.is_polar() {
        if runs.len() == 1 {
            let (a, b) = runs[0];
            if a <= 1e-12 {
                LinkDomain::cap(link, b, Pole::North)?
            } else if b >= span - 1e-12 {
                LinkDomain::cap(link, span - a, Pole::South)?
            } else {
                LinkDomain::intervals(link, runs)?
            }
        } else {
            LinkDomain::intervals(link, runs)?
        }
    } else {
        // circle: merge a wrap-around pair of runs into one arc
        if runs.len() == 2 && runs[0].0 <= 1e-12 && runs[1].1 >= span - 1e-12 {
            let start = runs[1].0;
            let length = runs[0].1 + (span - runs[1].0);
            LinkDomain::arc(link, start, length)?
        } else if runs.len() == 1 {
            LinkDomain::arc(link, runs[0].0, runs[0].1 - runs[0].0)?
        } else {
            LinkDomain::intervals(link, runs)?
        }
    };
    Ok(Some(domain))
}

impl PolarEigenTable {
    /// Table built from a closed-form profile, for analytic N = 2 caps.
    pub fn from_closure(theta0: f64, samples: usize, f: impl Fn(f64) -> (f64, f64)) -> Self {
        let step = theta0 / (samples - 1) as f64;
        let mut fv = Vec::with_capacity(samples);
        let mut dv = Vec::with_capacity(samples);
        for j in 0..samples {
            let (a, b) = f(j as f64 * step);
            fv.push(a);
            dv.push(b);
        }
        PolarEigenTable::from_parts(theta0, step, fv, dv)
    }
}
