//! The ACF integrals A_i(r), the functional J(r) = r⁻⁴·A₁·A₂, their
//! log-derivatives, the per-radius inequality chain, and detection of the
//! rigidity configuration (constant J ⇒ linear two-phase pair).
//!
//! A_i is accumulated over the geometric radial grid with a per-segment
//! power-law rule (exact on homogeneous fields, where the integrand is a
//! pure power of ρ) and completed analytically over (0, r_min) by fitting
//! the leading power to the two innermost annuli. J'/J is assembled from
//! the decomposition dA₁/A₁ + dA₂/A₂ − 4/r with slopes measured in log-log
//! coordinates, which keeps the chain identities exact on power-law data.

use crate::error::{Error, Result};
use crate::fields::{positivity_slices, ConeField, TwoPhaseCase};
use crate::geometry::{DomainShape, LinkKind, Pole};
use crate::par::Exec;
use crate::quad::{power_law_completion, power_law_segment};
use crate::spectral;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;

/// A_i(r) = ∫₀^r ∫_Σ ρ|∇u_i|² dm_Σ dρ at the requested radii, which must
/// lie inside the field's radial grid.
pub fn acf_integral(field: &ConeField, radii: &[f64]) -> Result<Vec<f64>> {
    acf_integral_exec(field, radii, Exec::default())
}

pub fn acf_integral_exec(field: &ConeField, radii: &[f64], exec: Exec) -> Result<Vec<f64>> {
    let rg = field.radial_grid();
    let rs = rg.nodes();
    for &r in radii {
        if r < rs[0] * (1.0 - 1e-12) || r > rg.r_max() * (1.0 + 1e-12) {
            return Err(Error::RadiusOutOfGrid(r, rs[0], rg.r_max()));
        }
    }
    // per-node surface integrals may run in parallel; the prefix sum below
    // is sequential in grid order so results do not depend on scheduling
    let g: Vec<f64> = crate::par::map_indices(rs.len(), exec, |k| {
        rs[k] * field.surface_gradient_integral(k)
    });
    let completion = power_law_completion(rs[0], g[0], rs[1], g[1])
        .ok_or_else(|| Error::Invalid("ACF integral divergent at the origin".into()))?;
    let mut prefix = vec![0.0; rs.len()];
    prefix[0] = completion;
    for k in 1..rs.len() {
        prefix[k] = prefix[k - 1] + power_law_segment(rs[k - 1], g[k - 1], rs[k], g[k]);
    }
    Ok(radii
        .iter()
        .map(|&r| {
            let k = rg.segment_below(r).min(rs.len() - 2);
            prefix[k] + partial_segment(rs[k], g[k], rs[k + 1], g[k + 1], r.min(rg.r_max()))
        })
        .collect())
}

/// ∫_{r0}^{r} of the power law fitted through (r0, g0), (r1, g1).
fn partial_segment(r0: f64, g0: f64, r1: f64, g1: f64, r: f64) -> f64 {
    if r <= r0 {
        return 0.0;
    }
    if g0 <= 0.0 || g1 <= 0.0 {
        // linear interpolation fallback
        let slope = (g1 - g0) / (r1 - r0);
        let gr = g0 + slope * (r - r0);
        return 0.5 * (g0 + gr) * (r - r0);
    }
    let gamma = (g1 / g0).ln() / (r1 / r0).ln();
    if (gamma + 1.0).abs() < 1e-8 {
        return g0 * r0 * (r / r0).ln();
    }
    g0 * r0 * ((r / r0).powf(gamma + 1.0) - 1.0) / (gamma + 1.0)
}

/// Numeric A'(r) by central differencing across the neighbouring grid nodes
/// versus the direct surface quadrature r·∫_Σ|∇u|²(r,·) dm_Σ. The radius
/// must coincide with an interior grid node.
pub fn derivative_crosscheck(field: &ConeField, r: f64) -> Result<(f64, f64)> {
    let rg = field.radial_grid();
    let k = rg.locate(r, 1e-9).ok_or(Error::PointOffGrid(r, 0.0))?;
    if k == 0 || k + 1 == rg.len() {
        return Err(Error::OutOfRange {
            what: "crosscheck radius",
            range: "interior grid nodes",
            value: r,
        });
    }
    let rs = rg.nodes();
    let a = acf_integral(field, &[rs[k - 1], rs[k + 1]])?;
    let numeric = (a[1] - a[0]) / (rs[k + 1] - rs[k - 1]);
    let surface = rs[k] * field.surface_gradient_integral(k);
    Ok((numeric, surface))
}

/// Arrays over a radial evaluation grid: the ACF integrals, J, derivative
/// estimates, and the per-radius characteristic constants of the
/// symmetrized positivity slices.
#[derive(Clone, Debug, Serialize)]
pub struct AcfProfile {
    pub radii: Vec<f64>,
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub j: Vec<f64>,
    pub da1: Vec<f64>,
    pub da2: Vec<f64>,
    pub dlog_j: Vec<f64>,
    pub alpha1: Vec<f64>,
    pub alpha2: Vec<f64>,
    /// dlogJ − (2(α₁+α₂) − 4)/r per radius.
    pub bound_slack: Vec<f64>,
    pub case_label: String,
    pub ambient_dim: u32,
    /// True when a phase is identically zero (J ≡ 0; log-derivative columns
    /// are zeroed and flagged).
    pub degenerate: bool,
    /// Indices where a log-derivative is undefined because A_i = 0.
    pub flagged: Vec<usize>,
}

impl AcfProfile {
    /// β_i = α_i²/λ_i = α_i/(N-2+α_i), the auxiliary weight of the chain.
    pub fn beta(&self, phase: usize) -> Vec<f64> {
        let alpha = if phase == 0 {
            &self.alpha1
        } else {
            &self.alpha2
        };
        let m = self.ambient_dim as f64 - 2.0;
        alpha
            .iter()
            .map(|&a| if a > 0.0 { a / (m + a) } else { 0.0 })
            .collect()
    }

    /// A_i ≥ 0 and nondecreasing on the evaluation grid.
    pub fn integrals_monotone(&self) -> bool {
        let ok = |a: &[f64]| {
            a.iter().all(|&x| x >= 0.0) && a.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12))
        };
        ok(&self.a1) && ok(&self.a2)
    }

    /// CSV with the standard column set, 17 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,A1,A2,J,dA1,dA2,dlogJ,alpha1,alpha2,bound_slack\n");
        for i in 0..self.radii.len() {
            let row = [
                self.radii[i],
                self.a1[i],
                self.a2[i],
                self.j[i],
                self.da1[i],
                self.da2[i],
                self.dlog_j[i],
                self.alpha1[i],
                self.alpha2[i],
                self.bound_slack[i],
            ];
            let cells: Vec<String> = row.iter().map(|x| crate::fmt::sig17(*x)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn compute_profile(case: &TwoPhaseCase, radii: &[f64]) -> Result<AcfProfile> {
    compute_profile_exec(case, radii, Exec::default())
}

pub fn compute_profile_exec(case: &TwoPhaseCase, radii: &[f64], exec: Exec) -> Result<AcfProfile> {
    if radii.len() < 3 {
        return Err(Error::Invalid("profile needs at least 3 radii".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid(
            "profile radii must be strictly increasing".into(),
        ));
    }
    let a1 = acf_integral_exec(&case.u1, radii, exec)?;
    let a2 = acf_integral_exec(&case.u2, radii, exec)?;
    let degenerate = case.u1.is_zero() || case.u2.is_zero();

    // r⁴ through the log map only when the window spans many decades
    let wide = radii.last().unwrap() / radii[0] > 1e6;
    let pow4 = |r: f64| {
        if wide {
            (4.0 * r.ln()).exp()
        } else {
            r * r * r * r
        }
    };
    let j: Vec<f64> = (0..radii.len())
        .map(|i| a1[i] * a2[i] / pow4(radii[i]))
        .collect();

    let mut flagged = Vec::new();
    let slope1 = log_slopes(radii, &a1, &mut flagged);
    let slope2 = log_slopes(radii, &a2, &mut flagged);
    flagged.sort_unstable();
    flagged.dedup();
    let da1: Vec<f64> = (0..radii.len())
        .map(|i| a1[i] * slope1[i] / radii[i])
        .collect();
    let da2: Vec<f64> = (0..radii.len())
        .map(|i| a2[i] * slope2[i] / radii[i])
        .collect();
    let dlog_j: Vec<f64> = (0..radii.len())
        .map(|i| (slope1[i] + slope2[i] - 4.0) / radii[i])
        .collect();

    // characteristic constants of the symmetrized positivity slices,
    // memoized on the slice fraction
    let n = case.link().ambient_dim();
    let mut memo: HashMap<u64, f64> = HashMap::new();
    let mut alpha1 = Vec::with_capacity(radii.len());
    let mut alpha2 = Vec::with_capacity(radii.len());
    for &r in radii {
        let (g1, g2) = positivity_slices(case, r)?;
        for (slot, g) in [(&mut alpha1, g1), (&mut alpha2, g2)] {
            let a = match g {
                None => 0.0,
                Some(dom) => {
                    let key = dom.volume_fraction().to_bits();
                    match memo.get(&key) {
                        Some(&a) => a,
                        None => {
                            let a = spectral::symmetrized_eigenvalue(&dom)?.alpha;
                            memo.insert(key, a);
                            a
                        }
                    }
                }
            };
            slot.push(a);
        }
    }

    let bound_slack: Vec<f64> = (0..radii.len())
        .map(|i| dlog_j[i] - (2.0 * (alpha1[i] + alpha2[i]) - 4.0) / radii[i])
        .collect();

    Ok(AcfProfile {
        radii: radii.to_vec(),
        a1,
        a2,
        j,
        da1,
        da2,
        dlog_j,
        alpha1,
        alpha2,
        bound_slack,
        case_label: case.label.clone(),
        ambient_dim: n,
        degenerate,
        flagged,
    })
}

/// d(ln A)/d(ln r) by nonuniform central differences in log-log
/// coordinates; exact on power laws regardless of node spacing. Nodes with
/// A = 0 are flagged and get slope 0.
fn log_slopes(radii: &[f64], a: &[f64], flagged: &mut Vec<usize>) -> Vec<f64> {
    let m = radii.len();
    let mut out = vec![0.0; m];
    let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ly: Vec<Option<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if x > 0.0 {
                Some(x.ln())
            } else {
                flagged.push(i);
                None
            }
        })
        .collect();
    for i in 0..m {
        let (i0, i1, i2) = if i == 0 {
            (0, 1, 2)
        } else if i == m - 1 {
            (m - 3, m - 2, m - 1)
        } else {
            (i - 1, i, i + 1)
        };
        let (y0, y1, y2) = match (ly[i0], ly[i1], ly[i2]) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => continue,
        };
        let (x0, x1, x2) = (lx[i0], lx[i1], lx[i2]);
        let x = lx[i];
        // derivative of the quadratic through three points, at x
        let d0 = y0 * (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
        let d1 = y1 * (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
        let d2 = y2 * (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
        out[i] = d0 + d1 + d2;
    }
    out
}

// ---------------------------------------------------------------------------
// Contracts
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityCheck {
    pub pass: bool,
    /// First violating pair (index, relative drop), when failing.
    pub first_violation: Option<(usize, f64)>,
}

/// J(r_{k+1}) ≥ J(r_k)·(1 − tol_rel) for all consecutive nodes.
pub fn monotonicity_check(profile: &AcfProfile, tol_rel: f64) -> MonotonicityCheck {
    for k in 0..profile.j.len() - 1 {
        if profile.j[k + 1] < profile.j[k] * (1.0 - tol_rel) {
            let drop = 1.0 - profile.j[k + 1] / profile.j[k];
            return MonotonicityCheck {
                pass: false,
                first_violation: Some((k, drop)),
            };
        }
    }
    MonotonicityCheck {
        pass: true,
        first_violation: None,
    }
}

/// Per-radius slack of the log-derivative chain bound,
/// dlogJ(r) − (2(α₁+α₂) − 4)/r; the contract is slack ≥ −tol.
pub fn lower_bound_check(profile: &AcfProfile, tol: f64) -> (bool, f64) {
    if profile.degenerate {
        return (true, 0.0);
    }
    let worst = profile
        .bound_slack
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    (worst >= -tol, worst)
}

/// Residuals of the derivative estimate against the eigenvalue bound
/// A'(r) ≥ ∫_{Γ(r)} r|∂_r u|² + λ(Γ(r)) r⁻¹ u² dm_Σ, per phase
/// (`None` for a degenerate phase). The radius must be a profile node.
pub fn derivative_lower_bound_residual(
    case: &TwoPhaseCase,
    profile: &AcfProfile,
    at: usize,
) -> Result<[Option<f64>; 2]> {
    let r = profile.radii[at];
    let mut out = [None, None];
    for i in 0..2 {
        let Some(dom) = case.domain(i) else { continue };
        let lambda = spectral::domain_eigenvalue(dom)?.lambda;
        let field = case.field(i);
        let samples = field.sample_model_at_radius(r);
        let w = field.link_grid().weights();
        let mut rhs = 0.0;
        for (j, e) in samples.iter().enumerate() {
            rhs += w[j] * (r * e.du_dr * e.du_dr + lambda / r * e.value * e.value);
        }
        let lhs = if i == 0 {
            profile.da1[at]
        } else {
            profile.da2[at]
        };
        out[i] = Some(lhs - rhs);
    }
    Ok(out)
}

/// Residuals of the integral against the flux-and-measure bound
/// A(r) ≤ r ∫_{Γ(r)} u|∂_r u| + (N-2)/(2r)·u² dm_Σ, per phase; the
/// residual is rhs − lhs and the contract is ≥ −tol.
pub fn value_upper_bound_residual(
    case: &TwoPhaseCase,
    profile: &AcfProfile,
    at: usize,
) -> Result<[Option<f64>; 2]> {
    let r = profile.radii[at];
    let n = profile.ambient_dim as f64;
    let mut out = [None, None];
    for i in 0..2 {
        if case.domain(i).is_none() {
            continue;
        }
        let field = case.field(i);
        let samples = field.sample_model_at_radius(r);
        let w = field.link_grid().weights();
        let mut rhs = 0.0;
        for (j, e) in samples.iter().enumerate() {
            rhs += w[j] * (r * e.value * e.du_dr.abs() + 0.5 * (n - 2.0) * e.value * e.value);
        }
        let lhs = if i == 0 {
            profile.a1[at]
        } else {
            profile.a2[at]
        };
        out[i] = Some(rhs - lhs);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rigidity
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct RigidityOptions {
    /// Relative constancy tolerance for interval detection.
    pub constancy_tol: f64,
    /// Threshold on the fitted |σ̂| for the vertex-condition verdict.
    pub sigma_tol: f64,
    /// Minimum number of profile nodes in a reported interval.
    pub min_nodes: usize,
    /// Relative RMS misfit above which the linear model is rejected.
    pub fit_tol: f64,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        RigidityOptions {
            constancy_tol: 1e-4,
            sigma_tol: 1e-6,
            min_nodes: 5,
            fit_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RigidityVerdict {
    /// Constant J with linear phases on complementary half-spheres and
    /// vanishing inverse-power coefficients.
    HalfSphereDecomposition,
    NoConstantInterval,
    ModelMismatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    /// Disjoint, sorted maximal intervals where J is constant within tolerance.
    pub constant_intervals: Vec<(f64, f64)>,
    /// Polar angle of the recovered direction ν in the link coordinate
    /// (0 or π on spheres, the pole angle on the full circle).
    pub nu_estimate: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    /// max_i |σ̂_i| of the fitted inverse-power coefficients.
    pub sigma_zero_check: Option<f64>,
    pub verdict: RigidityVerdict,
}

/// Scan a profile for constant-J intervals and, on the largest one, fit the
/// phases against the linear model ((ν k + σ r^{-N})·x)^± to recover the
/// direction, the amplitudes, and the inverse-power coefficients (which the
/// vertex condition forces to zero).
pub fn rigidity_scan(
    profile: &AcfProfile,
    case: &TwoPhaseCase,
    opts: &RigidityOptions,
) -> Result<RigidityReport> {
    let link = case.link();
    let round_circle =
        link.kind() == LinkKind::Circle && (link.circumference().unwrap() - 2.0 * PI).abs() < 1e-12;
    if link.kind() != LinkKind::RoundSphere && !round_circle {
        return Err(Error::RigidityUnsupportedLink(link.kind().name()));
    }

    let no_interval = |intervals: Vec<(f64, f64)>| RigidityReport {
        constant_intervals: intervals,
        nu_estimate: None,
        k1: None,
        k2: None,
        sigma_zero_check: None,
        verdict: RigidityVerdict::NoConstantInterval,
    };
    if profile.degenerate {
        return Ok(no_interval(Vec::new()));
    }

    // maximal constant runs; J is monotone so a run is constant iff its
    // endpoints agree to tolerance
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let j = &profile.j;
    let mut a = 0;
    while a < j.len() {
        let mut b = a;
        while b + 1 < j.len() {
            let mean = 0.5 * (j[a] + j[b + 1]);
            if (j[b + 1] - j[a]).abs() <= opts.constancy_tol * mean && j[a] > 0.0 {
                b += 1;
            } else {
                break;
            }
        }
        if b > a && b - a + 1 >= opts.min_nodes {
            runs.push((a, b));
            a = b + 1;
        } else {
            a += 1;
        }
    }
    let intervals: Vec<(f64, f64)> = runs
        .iter()
        .map(|&(a, b)| (profile.radii[a], profile.radii[b]))
        .collect();
    if runs.is_empty() {
        return Ok(no_interval(intervals));
    }

    let &(ia, ib) = runs
        .iter()
        .max_by_key(|&&(a, b)| b - a)
        .expect("nonempty runs");
    let span: Vec<usize> = (ia..=ib).collect();
    let n = link.ambient_dim();

    // per-radius linear-model coefficients per phase
    let fit = fit_linear_pair(case, profile, &span, n)?;
    let Some(fit) = fit else {
        return Ok(RigidityReport {
            constant_intervals: intervals,
            nu_estimate: None,
            k1: None,
            k2: None,
            sigma_zero_check: None,
            verdict: RigidityVerdict::ModelMismatch,
        });
    };
    let verdict = if fit.misfit <= opts.fit_tol && fit.sigma_max <= opts.sigma_tol {
        RigidityVerdict::HalfSphereDecomposition
    } else {
        RigidityVerdict::ModelMismatch
    };
    Ok(RigidityReport {
        constant_intervals: intervals,
        nu_estimate: Some(fit.nu_angle),
        k1: Some(fit.k1),
        k2: Some(fit.k2),
        sigma_zero_check: Some(fit.sigma_max),
        verdict,
    })
}

struct LinearFit {
    nu_angle: f64,
    k1: f64,
    k2: f64,
    sigma_max: f64,
    misfit: f64,
}

fn fit_linear_pair(
    case: &TwoPhaseCase,
    profile: &AcfProfile,
    span: &[usize],
    n: u32,
) -> Result<Option<LinearFit>> {
    let link = case.link();
    let grid = case.u1.link_grid();
    let nodes = grid.nodes();
    let weights = grid.weights();
    let circle = link.kind() == LinkKind::Circle;
    let dims = if circle { 2 } else { 1 };

    // coefficients[phase][radius][dim]
    let mut coeffs = [Vec::new(), Vec::new()];
    let mut misfit_num = 0.0;
    let mut misfit_den = 0.0;
    for (i, coeff_list) in coeffs.iter_mut().enumerate() {
        let field = case.field(i);
        for &t in span {
            let r = profile.radii[t];
            let samples = field.sample_model_at_radius(r);
            // weighted least squares over the observed support
            let mut m = [[0.0f64; 2]; 2];
            let mut rhs = [0.0f64; 2];
            for (jn, e) in samples.iter().enumerate() {
                if e.value <= 0.0 {
                    continue;
                }
                let basis: [f64; 2] = if circle {
                    [r * nodes[jn].cos(), r * nodes[jn].sin()]
                } else {
                    [r * nodes[jn].cos(), 0.0]
                };
                for p in 0..dims {
                    for q in 0..dims {
                        m[p][q] += weights[jn] * basis[p] * basis[q];
                    }
                    rhs[p] += weights[jn] * basis[p] * e.value;
                }
            }
            let c = if circle {
                solve2(m, rhs)
            } else if m[0][0] > 0.0 {
                Some([rhs[0] / m[0][0], 0.0])
            } else {
                None
            };
            let Some(c) = c else { return Ok(None) };
            // accumulate model misfit over the support
            for (jn, e) in samples.iter().enumerate() {
                if e.value <= 0.0 {
                    continue;
                }
                let basis = if circle {
                    c[0] * r * nodes[jn].cos() + c[1] * r * nodes[jn].sin()
                } else {
                    c[0] * r * nodes[jn].cos()
                };
                misfit_num += weights[jn] * (e.value - basis).powi(2);
                misfit_den += weights[jn] * e.value * e.value;
            }
            coeff_list.push(c);
        }
    }
    let misfit = (misfit_num / misfit_den.max(1e-300)).sqrt();

    // fit c(r) = κ + σ r^{-N} componentwise over the interval
    let rpow: Vec<f64> = span
        .iter()
        .map(|&t| profile.radii[t].powi(-(n as i32)))
        .collect();
    let mut kappa = [[0.0f64; 2]; 2];
    let mut sigma = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for d in 0..dims {
            let ys: Vec<f64> = coeffs[i].iter().map(|c| c[d]).collect();
            let (k, s) = linear_regress(&rpow, &ys);
            kappa[i][d] = k;
            sigma[i][d] = s;
        }
    }
    let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let k1 = norm(kappa[0]);
    let k2 = norm(kappa[1]);
    if k1 == 0.0 || k2 == 0.0 {
        return Ok(None);
    }
    // the two phases must point in opposite directions
    let dot = kappa[0][0] * kappa[1][0] + kappa[0][1] * kappa[1][1];
    if dot >= 0.0 {
        return Ok(None);
    }
    let nu_angle = if circle {
        kappa[0][1].atan2(kappa[0][0]).rem_euclid(2.0 * PI)
    } else if kappa[0][0] > 0.0 {
        0.0
    } else {
        PI
    };
    let sigma_max = norm(sigma[0]).max(norm(sigma[1]));
    Ok(Some(LinearFit {
        nu_angle,
        k1,
        k2,
        sigma_max,
        misfit,
    }))
}

fn solve2(m: [[f64; 2]; 2], rhs: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < 1e-300 {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

/// Least squares y = κ + σ·x.
fn linear_regress(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return (sy / n, 0.0);
    }
    let sigma = (n * sxy - sx * sy) / det;
    let kappa = (sy - sigma * sx) / n;
    (kappa, sigma)
}

/// Least-squares slope of log J against log r, the observed growth exponent.
pub fn log_log_slope(radii: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (_, slope) = linear_regress(&xs, &ys);
    slope
}

/// Positivity slices expressed as shapes, for report output.
pub fn slice_descriptor(dom: &DomainShape) -> String {
    match dom {
        DomainShape::Cap { theta0, pole } => format!(
            "cap(theta0={theta0:.6}, pole={})",
            if *pole == Pole::North {
                "north"
            } else {
                "south"
            }
        ),
        DomainShape::Arc { start, length } => format!("arc(start={start:.6}, length={length:.6})"),
        DomainShape::Intervals(v) => format!("intervals({v:?})"),
    }
}
