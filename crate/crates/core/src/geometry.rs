//! Links Σ and the metric measure cone C(Σ) over them: distances, measures,
//! and symmetrized comparison caps.
//!
//! Three link families are supported: round spheres ∂B₁ ⊂ ℝ^N in polar
//! coordinates, circles of circumference c ≤ 2π in arclength, and 1-D warped
//! suspensions `[0,π] ×_{sin^{N-2}} Y` carrying only their polar coordinate.
//! These cover every configuration the verification suite distinguishes.

use crate::error::{Error, Result};
use crate::quad::sin_power_integral;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Surface measure of the unit sphere ∂B₁ ⊂ ℝ^n, i.e. 2π^{n/2}/Γ(n/2).
pub fn sphere_surface_measure(n: u32) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half_integer(n)
}

/// Γ(n/2) for integer n ≥ 1, computed exactly by the recursion Γ(x+1) = xΓ(x).
fn gamma_half_integer(n: u32) -> f64 {
    let mut x = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut k = if n.is_multiple_of(2) { 2 } else { 1 };
    while k + 2 <= n {
        x *= k as f64 / 2.0;
        k += 2;
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    RoundSphere,
    Circle,
    Suspension1d,
}

impl LinkKind {
    pub fn name(self) -> &'static str {
        match self {
            LinkKind::RoundSphere => "round_sphere",
            LinkKind::Circle => "circle",
            LinkKind::Suspension1d => "suspension_1d",
        }
    }
}

/// The cross-section Σ with its measure.
///
/// `ambient_dim` is the cone dimension N (so Σ is (N-1)-dimensional), and
/// `total_measure` is m_Σ(Σ). For suspensions `y_measure` is the total
/// measure of the fibre Y; the polar weight is sin^{N-2}θ in all polar kinds.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkSpace {
    kind: LinkKind,
    ambient_dim: u32,
    circumference: Option<f64>,
    y_measure: Option<f64>,
    suspension_profile: Vec<f64>,
    total_measure: f64,
}

/// Resolution at which the suspension weight sin^{N-2}θ is tabulated.
const SUSPENSION_PROFILE_SAMPLES: usize = 1025;

impl LinkSpace {
    /// The round sphere ∂B₁ ⊂ ℝ^N in polar coordinates θ ∈ [0, π].
    pub fn round_sphere(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        Ok(LinkSpace {
            kind: LinkKind::RoundSphere,
            ambient_dim: n,
            circumference: None,
            y_measure: None,
            suspension_profile: Vec::new(),
            total_measure: sphere_surface_measure(n),
        })
    }

    /// A circle of circumference c, coordinate s ∈ [0, c). Requires
    /// 0 < c ≤ 2π so that diam Σ = c/2 ≤ π.
    pub fn circle(c: f64) -> Result<Self> {
        if c <= 0.0 || c.is_nan() {
            return Err(Error::CircumferenceNonPositive(c));
        }
        if c > 2.0 * PI + 1e-12 {
            return Err(Error::CircumferenceTooLarge(c));
        }
        Ok(LinkSpace {
            kind: LinkKind::Circle,
            ambient_dim: 2,
            circumference: Some(c),
            y_measure: None,
            suspension_profile: Vec::new(),
            total_measure: c,
        })
    }

    /// The warped suspension `[0,π] ×_{sin^{N-2}} Y` over a fibre of total
    /// measure `y_measure`, carrying only its polar coordinate.
    pub fn suspension(n: u32, y_measure: f64) -> Result<Self> {
        Self::suspension_with_resolution(n, y_measure, SUSPENSION_PROFILE_SAMPLES)
    }

    /// Same, with the weight tabulated at a chosen resolution.
    pub fn suspension_with_resolution(n: u32, y_measure: f64, samples: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        if y_measure <= 0.0 || y_measure.is_nan() {
            return Err(Error::OutOfRange {
                what: "fibre measure",
                range: "(0, ∞)",
                value: y_measure,
            });
        }
        if samples < 3 {
            return Err(Error::Invalid(
                "suspension profile needs at least 3 samples".into(),
            ));
        }
        let profile: Vec<f64> = (0..samples)
            .map(|i| {
                let theta = PI * i as f64 / (samples - 1) as f64;
                theta.sin().powi(n as i32 - 2)
            })
            .collect();
        let total = y_measure * sin_power_integral(n - 2, PI);
        Ok(LinkSpace {
            kind: LinkKind::Suspension1d,
            ambient_dim: n,
            circumference: None,
            y_measure: Some(y_measure),
            suspension_profile: profile,
            total_measure: total,
        })
    }

    pub fn kind(&self) -> LinkKind {
        self.kind
    }

    /// Cone dimension N.
    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }

    pub fn circumference(&self) -> Option<f64> {
        self.circumference
    }

    pub fn suspension_profile(&self) -> &[f64] {
        &self.suspension_profile
    }

    /// m_Σ(Σ).
    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    /// Whether the link uses a polar coordinate θ ∈ [0, π] (spheres and
    /// suspensions) rather than arclength.
    pub fn is_polar(&self) -> bool {
        matches!(self.kind, LinkKind::RoundSphere | LinkKind::Suspension1d)
    }

    /// Density of m_Σ with respect to the link coordinate: the circle carries
    /// ds, polar kinds carry σ·sin^{N-2}θ dθ with σ the fibre measure.
    pub fn coordinate_weight(&self, xi: f64) -> f64 {
        match self.kind {
            LinkKind::Circle => 1.0,
            LinkKind::RoundSphere => {
                sphere_surface_measure(self.ambient_dim - 1)
                    * xi.sin().powi(self.ambient_dim as i32 - 2)
            }
            LinkKind::Suspension1d => {
                self.y_measure.unwrap() * xi.sin().powi(self.ambient_dim as i32 - 2)
            }
        }
    }

    /// Upper end of the coordinate range: π for polar kinds, c for circles.
    pub fn coordinate_span(&self) -> f64 {
        match self.kind {
            LinkKind::Circle => self.circumference.unwrap(),
            _ => PI,
        }
    }

    /// Intrinsic distance on Σ between coordinates, clamped to [0, π].
    ///
    /// Polar kinds measure |Δθ| along a meridian; circles take the shorter
    /// arc min(|Δs|, c - |Δs|).
    pub fn link_distance(&self, xi1: f64, xi2: f64) -> f64 {
        let d = match self.kind {
            LinkKind::Circle => {
                let c = self.circumference.unwrap();
                let delta = (xi1 - xi2).abs() % c;
                delta.min(c - delta)
            }
            _ => (xi1 - xi2).abs(),
        };
        d.clamp(0.0, PI)
    }

    /// Cone distance d_C((r₁,ξ₁), (r₂,ξ₂)) = √(r₁² + r₂² − 2r₁r₂ cos d_Σ).
    pub fn cone_distance(&self, x: &ConePoint, y: &ConePoint) -> f64 {
        let d_link = self.link_distance(x.xi, y.xi);
        let sq = x.r * x.r + y.r * y.r - 2.0 * x.r * y.r * d_link.cos();
        sq.max(0.0).sqrt()
    }

    /// Measure of the ball B_r(p) around the vertex: m_Σ(Σ)·r^N/N.
    pub fn ball_measure(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        self.total_measure * r.powi(self.ambient_dim as i32) / self.ambient_dim as f64
    }

    /// Volume fraction of the polar cap {θ < θ₀}.
    pub fn cap_fraction(&self, theta0: f64) -> f64 {
        sin_power_integral(self.ambient_dim - 2, theta0)
            / sin_power_integral(self.ambient_dim - 2, PI)
    }

    /// Gauss nodes over the full coordinate range with weights carrying the
    /// measure density, so ∫_Σ g dm_Σ ≈ Σ w_j g(ξ_j).
    pub fn polar_quadrature(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let (nodes, ws) = crate::quad::gauss_legendre_on(n, 0.0, self.coordinate_span());
        let weights = nodes
            .iter()
            .zip(&ws)
            .map(|(x, w)| w * self.coordinate_weight(*x))
            .collect();
        (nodes, weights)
    }
}

/// A point (r, ξ) of the cone; r = 0 is the vertex regardless of ξ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConePoint {
    pub r: f64,
    pub xi: f64,
}

impl ConePoint {
    pub fn new(r: f64, xi: f64) -> Self {
        ConePoint { r, xi }
    }

    pub fn vertex() -> Self {
        ConePoint { r: 0.0, xi: 0.0 }
    }

    pub fn is_vertex(&self) -> bool {
        self.r == 0.0
    }
}

/// Which pole a spherical cap is centred on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pole {
    North,
    South,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainShape {
    /// Geodesic cap of polar radius θ₀ about a pole (polar links).
    Cap { theta0: f64, pole: Pole },
    /// Arc of given start and length on a circle (mod c).
    Arc { start: f64, length: f64 },
    /// Union of disjoint coordinate intervals.
    Intervals(Vec<(f64, f64)>),
}

impl DomainShape {
    pub fn name(&self) -> &'static str {
        match self {
            DomainShape::Cap { .. } => "cap",
            DomainShape::Arc { .. } => "arc",
            DomainShape::Intervals(_) => "intervals",
        }
    }
}

/// An open subset Γ of a link carrying its volume fraction m_Σ(Γ)/m_Σ(Σ).
#[derive(Clone, Debug, PartialEq)]
pub struct LinkDomain {
    link: LinkSpace,
    shape: DomainShape,
    volume_fraction: f64,
}

impl LinkDomain {
    /// Cap {θ < θ₀} (north) or {θ > π − θ₀} (south) on a polar link.
    pub fn cap(link: &LinkSpace, theta0: f64, pole: Pole) -> Result<Self> {
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
        let fraction = link.cap_fraction(theta0);
        Ok(LinkDomain {
            link: link.clone(),
            shape: DomainShape::Cap { theta0, pole },
            volume_fraction: fraction,
        })
    }

    /// Arc of length L starting at `start` on a circle link.
    pub fn arc(link: &LinkSpace, start: f64, length: f64) -> Result<Self> {
        let c = match link.kind() {
            LinkKind::Circle => link.circumference().unwrap(),
            _ => return Err(Error::ShapeMismatch("arc", link.kind().name())),
        };
        if !(length > 0.0 && length < c) {
            return Err(Error::OutOfRange {
                what: "arc length",
                range: "(0, c)",
                value: length,
            });
        }
        Ok(LinkDomain {
            link: link.clone(),
            shape: DomainShape::Arc {
                start: start.rem_euclid(c),
                length,
            },
            volume_fraction: length / c,
        })
    }

    /// Union of disjoint coordinate intervals (a, b).
    pub fn intervals(link: &LinkSpace, mut ivals: Vec<(f64, f64)>) -> Result<Self> {
        ivals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let span = link.coordinate_span();
        let mut measure = 0.0;
        for (i, &(a, b)) in ivals.iter().enumerate() {
            if !(b > a && a >= 0.0 && b <= span) {
                return Err(Error::Invalid(format!(
                    "interval ({a}, {b}) is not inside [0, {span}]"
                )));
            }
            if i > 0 && a < ivals[i - 1].1 {
                return Err(Error::OverlappingDomains);
            }
            measure += interval_measure(link, a, b);
        }
        let fraction = measure / link.total_measure();
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::InvalidFraction(fraction));
        }
        Ok(LinkDomain {
            link: link.clone(),
            shape: DomainShape::Intervals(ivals),
            volume_fraction: fraction,
        })
    }

    pub fn link(&self) -> &LinkSpace {
        &self.link
    }

    pub fn shape(&self) -> &DomainShape {
        &self.shape
    }

    pub fn volume_fraction(&self) -> f64 {
        self.volume_fraction
    }

    /// The shape as coordinate intervals, used for disjointness arithmetic.
    pub fn as_intervals(&self) -> Vec<(f64, f64)> {
        match &self.shape {
            DomainShape::Cap { theta0, pole } => match pole {
                Pole::North => vec![(0.0, *theta0)],
                Pole::South => vec![(PI - theta0, PI)],
            },
            DomainShape::Arc { start, length } => {
                let c = self.link.circumference().unwrap();
                if start + length <= c {
                    vec![(*start, start + length)]
                } else {
                    // wraps past s = 0
                    vec![(0.0, (start + length) - c), (*start, c)]
                }
            }
            DomainShape::Intervals(v) => v.clone(),
        }
    }

    /// Whether two domains on the same link are disjoint (up to boundary contact).
    pub fn disjoint_from(&self, other: &LinkDomain) -> bool {
        let tol = 1e-12;
        for &(a1, b1) in &self.as_intervals() {
            for &(a2, b2) in &other.as_intervals() {
                if b1.min(b2) - a1.max(a2) > tol {
                    return false;
                }
            }
        }
        true
    }

    /// The geodesic cap Γ̄ on the round sphere ∂B₁ ⊂ ℝ^N of the same volume
    /// fraction, the comparison domain of the symmetrization inequality.
    /// The cap radius solves the monotone fraction equation by bisection.
    pub fn symmetrized_cap(&self) -> Result<LinkDomain> {
        let f = self.volume_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::InvalidFraction(f));
        }
        let n = self.link.ambient_dim();
        let sphere = LinkSpace::round_sphere(n)?;
        let theta0 = cap_radius_for_fraction(n, f);
        LinkDomain::cap(&sphere, theta0, Pole::North)
    }

    /// Check the stored fraction against the shape to relative tolerance.
    pub fn fraction_consistent(&self, tol: f64) -> bool {
        let recomputed: f64 = self
            .as_intervals()
            .iter()
            .map(|&(a, b)| interval_measure(&self.link, a, b))
            .sum::<f64>()
            / self.link.total_measure();
        (recomputed - self.volume_fraction).abs() <= tol * self.volume_fraction.max(1e-300)
    }
}

fn interval_measure(link: &LinkSpace, a: f64, b: f64) -> f64 {
    match link.kind() {
        LinkKind::Circle => b - a,
        _ => {
            let sigma = link.coordinate_weight(PI / 2.0); // weight at sin = 1
            let k = link.ambient_dim() - 2;
            sigma * (sin_power_integral(k, b) - sin_power_integral(k, a))
        }
    }
}

impl Serialize for LinkSpace {
    /// The report schema: {"kind", "N", "c"} with `c` present for circles.
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", self.kind.name())?;
        map.serialize_entry("N", &self.ambient_dim)?;
        if let Some(c) = self.circumference {
            map.serialize_entry("c", &c)?;
        }
        map.end()
    }
}

impl Serialize for LinkDomain {
    /// {"kind", "N", "c", "theta0"} for caps, {"kind", "c", "arc": [start, length]}
    /// for arcs, interval lists otherwise.
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", self.shape.name())?;
        map.serialize_entry("N", &self.link.ambient_dim())?;
        if let Some(c) = self.link.circumference() {
            map.serialize_entry("c", &c)?;
        }
        match &self.shape {
            DomainShape::Cap { theta0, pole } => {
                map.serialize_entry("theta0", theta0)?;
                map.serialize_entry(
                    "pole",
                    if *pole == Pole::North {
                        "north"
                    } else {
                        "south"
                    },
                )?;
            }
            DomainShape::Arc { start, length } => {
                map.serialize_entry("arc", &[*start, *length])?;
            }
            DomainShape::Intervals(v) => {
                map.serialize_entry("intervals", v)?;
            }
        }
        map.serialize_entry("volume_fraction", &self.volume_fraction)?;
        map.end()
    }
}

/// Solve cap_fraction(θ) = f on the round N-sphere by bisection.
pub fn cap_radius_for_fraction(n: u32, f: f64) -> f64 {
    debug_assert!(f > 0.0 && f < 1.0);
    let k = n - 2;
    let total = sin_power_integral(k, PI);
    let target = f * total;
    let (mut lo, mut hi) = (0.0f64, PI);
    // bisect to machine width; the fraction map is strictly monotone
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sin_power_integral(k, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sphere_total_measures() {
        assert_relative_eq!(
            LinkSpace::round_sphere(3).unwrap().total_measure(),
            4.0 * PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            LinkSpace::round_sphere(2).unwrap().total_measure(),
            2.0 * PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            LinkSpace::round_sphere(4).unwrap().total_measure(),
            2.0 * PI * PI,
            max_relative = 1e-14
        );
    }

    #[test]
    fn circle_bounds_enforced() {
        assert!(LinkSpace::circle(3.0 * PI).is_err());
        assert!(LinkSpace::circle(0.0).is_err());
        assert!(LinkSpace::circle(-1.0).is_err());
        assert!(LinkSpace::round_sphere(1).is_err());
        assert!(LinkSpace::circle(2.0 * PI).is_ok());
    }

    #[test]
    fn cone_distance_examples() {
        let link = LinkSpace::round_sphere(3).unwrap();
        // same ray
        let d = link.cone_distance(&ConePoint::new(2.0, 0.7), &ConePoint::new(0.5, 0.7));
        assert_relative_eq!(d, 1.5, epsilon = 1e-14);
        // antipodal rays
        let d = link.cone_distance(&ConePoint::new(1.0, 0.0), &ConePoint::new(1.0, PI));
        assert_relative_eq!(d, 2.0, epsilon = 1e-14);
        // right angle: law of cosines gives √2
        let d = link.cone_distance(&ConePoint::new(1.0, 0.0), &ConePoint::new(1.0, PI / 2.0));
        assert_relative_eq!(d, 2.0f64.sqrt(), epsilon = 1e-14);
        // vertex identification
        let d = link.cone_distance(&ConePoint::new(0.0, 0.3), &ConePoint::new(0.0, 2.9));
        assert_eq!(d, 0.0);
    }

    #[test]
    fn circle_distance_wraps() {
        let link = LinkSpace::circle(2.0 * PI).unwrap();
        let d = link.link_distance(0.1, 2.0 * PI - 0.1);
        assert_relative_eq!(d, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn ball_measures() {
        let s3 = LinkSpace::round_sphere(3).unwrap();
        assert_relative_eq!(s3.ball_measure(1.0), 4.0 * PI / 3.0, max_relative = 1e-14);
        assert_eq!(s3.ball_measure(0.0), 0.0);
        let c = LinkSpace::circle(2.0 * PI).unwrap();
        assert_relative_eq!(c.ball_measure(2.0), 4.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn symmetrized_cap_solves_fraction_equation() {
        // fraction 1/2 gives the hemisphere in any dimension
        for n in 2..=6 {
            let link = LinkSpace::round_sphere(n).unwrap();
            let dom = LinkDomain::cap(&link, PI / 2.0, Pole::North).unwrap();
            let sym = dom.symmetrized_cap().unwrap();
            match sym.shape() {
                DomainShape::Cap { theta0, .. } => {
                    assert_relative_eq!(*theta0, PI / 2.0, epsilon = 1e-12)
                }
                _ => panic!("expected cap"),
            }
        }
        // fraction 1/4 on S²: (1 - cos θ)/2 = 1/4 gives θ = π/3
        let link = LinkSpace::round_sphere(3).unwrap();
        let dom = LinkDomain::cap(&link, PI / 3.0, Pole::North).unwrap();
        assert_relative_eq!(dom.volume_fraction(), 0.25, epsilon = 1e-14);
        let sym = dom.symmetrized_cap().unwrap();
        match sym.shape() {
            DomainShape::Cap { theta0, .. } => {
                assert_relative_eq!(*theta0, PI / 3.0, epsilon = 1e-12)
            }
            _ => panic!("expected cap"),
        }
    }

    #[test]
    fn symmetrized_arc_rescales_length() {
        // arc L on circle c < 2π maps to an arc of length 2πL/c on the unit circle
        let c = 1.5 * PI;
        let link = LinkSpace::circle(c).unwrap();
        let dom = LinkDomain::arc(&link, 0.3, 0.9).unwrap();
        let sym = dom.symmetrized_cap().unwrap();
        match sym.shape() {
            DomainShape::Cap { theta0, .. } => {
                // cap of polar radius θ on the round 1-sphere is an arc of length 2θ
                assert_relative_eq!(2.0 * theta0, 2.0 * PI * 0.9 / c, epsilon = 1e-11);
            }
            _ => panic!("expected cap"),
        }
    }

    #[test]
    fn symmetrization_is_identity_on_round_caps() {
        for &(n, theta0) in &[(3u32, 0.4), (4, 1.1), (5, 2.2), (6, 0.05)] {
            let link = LinkSpace::round_sphere(n).unwrap();
            let dom = LinkDomain::cap(&link, theta0, Pole::North).unwrap();
            let sym = dom.symmetrized_cap().unwrap();
            match sym.shape() {
                DomainShape::Cap { theta0: t, .. } => {
                    assert_relative_eq!(*t, theta0, epsilon = 1e-12)
                }
                _ => panic!("expected cap"),
            }
        }
    }

    #[test]
    fn fraction_consistency_invariant() {
        let link = LinkSpace::round_sphere(4).unwrap();
        let dom = LinkDomain::cap(&link, 0.8, Pole::South).unwrap();
        assert!(dom.fraction_consistent(1e-12));
        let circle = LinkSpace::circle(2.0 * PI).unwrap();
        let arc = LinkDomain::arc(&circle, 1.0, 2.5).unwrap();
        assert!(arc.fraction_consistent(1e-12));
    }

    #[test]
    fn distance_metric_properties_on_sampled_triples() {
        let links = [
            LinkSpace::round_sphere(3).unwrap(),
            LinkSpace::circle(1.7 * PI).unwrap(),
            LinkSpace::suspension(4, 2.0 * PI).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for link in &links {
            let span = link.coordinate_span();
            for _ in 0..10_000 {
                let p = |rng: &mut ChaCha8Rng| {
                    ConePoint::new(rng.gen_range(0.0..3.0), rng.gen_range(0.0..span))
                };
                let (x, y, z) = (p(&mut rng), p(&mut rng), p(&mut rng));
                let dxy = link.cone_distance(&x, &y);
                let dyx = link.cone_distance(&y, &x);
                assert_eq!(dxy, dyx, "symmetry");
                let dxz = link.cone_distance(&x, &z);
                let dyz = link.cone_distance(&y, &z);
                assert!(dxz <= dxy + dyz + 1e-12, "triangle inequality violated");
            }
            // zero iff coincident (vertex identified)
            let v1 = ConePoint::new(0.0, 0.2);
            let v2 = ConePoint::new(0.0, 1.2);
            assert_eq!(link.cone_distance(&v1, &v2), 0.0);
            let a = ConePoint::new(1.0, 0.2);
            assert!(link.cone_distance(&a, &ConePoint::new(1.0, 0.4)) > 0.0);
        }
    }

    #[test]
    fn disjointness_arithmetic() {
        let link = LinkSpace::round_sphere(3).unwrap();
        let north = LinkDomain::cap(&link, PI / 3.0, Pole::North).unwrap();
        let south = LinkDomain::cap(&link, PI - PI / 3.0, Pole::South).unwrap();
        assert!(north.disjoint_from(&south));
        let big = LinkDomain::cap(&link, 2.5, Pole::North).unwrap();
        assert!(!big.disjoint_from(&south));

        let circle = LinkSpace::circle(2.0 * PI).unwrap();
        let a1 = LinkDomain::arc(&circle, 0.0, PI).unwrap();
        let a2 = LinkDomain::arc(&circle, PI, PI - 1e-9).unwrap();
        assert!(a1.disjoint_from(&a2));
        let a3 = LinkDomain::arc(&circle, 5.8, 1.0).unwrap(); // wraps past 0
        assert!(!a3.disjoint_from(&a1));
    }

    #[test]
    fn suspension_profile_is_sin_power() {
        let link = LinkSpace::suspension(3, 1.0).unwrap();
        let prof = link.suspension_profile();
        let mid = prof[prof.len() / 2];
        assert_relative_eq!(mid, 1.0, epsilon = 1e-12); // sin(π/2) = 1
        assert_relative_eq!(link.total_measure(), 2.0, epsilon = 1e-12); // ∫ sinθ dθ = 2
    }
}
