//! The built-in verification catalog: every contract the library promises,
//! run end to end and reported as named checks. The CLI `verify` command is
//! a thin wrapper around [`run_all`].

use crate::calculus::{self, KernelTest};
use crate::error::Result;
use crate::fields::{self, HypothesisOptions, PairSpec, PoleSpec};
use crate::functionals::{self, RigidityOptions, RigidityVerdict};
use crate::geometry::{LinkDomain, LinkSpace, Pole};
use crate::grid::GridConfig;
use crate::par::Exec;
use crate::spectral::{self, CapSolver};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    fn le(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            pass: value <= threshold,
            value,
            threshold,
        }
    }

    fn ge(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            pass: value >= threshold,
            value,
            threshold,
        }
    }

    fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            value: if pass { 1.0 } else { 0.0 },
            threshold: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub sections: Vec<Section>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.sections.iter().all(|s| s.all_pass())
    }
}

pub fn run_all(exec: Exec) -> Result<VerificationReport> {
    Ok(VerificationReport {
        sections: vec![
            geometry_section()?,
            spectral_section(exec)?,
            fields_section()?,
            functionals_section()?,
            calculus_section()?,
            rigidity_section()?,
        ],
    })
}

fn geometry_section() -> Result<Section> {
    let mut checks = Vec::new();
    let s3 = LinkSpace::round_sphere(3)?;
    checks.push(Check::le(
        "sphere(3) total measure vs 4π",
        (s3.total_measure() - 4.0 * PI).abs(),
        1e-12,
    ));
    checks.push(Check::flag(
        "circle(3π) rejected",
        LinkSpace::circle(3.0 * PI).is_err(),
    ));
    checks.push(Check::le(
        "ball measure B₁ on sphere(3) vs 4π/3",
        (s3.ball_measure(1.0) - 4.0 * PI / 3.0).abs(),
        1e-12,
    ));
    // ball measure against tensor-grid quadrature
    let grid = crate::grid::LinkGrid::build(&s3, 256, &[]);
    let radial = crate::grid::RadialGrid::geometric(1e-3, 1.0, 512);
    let rs = radial.nodes();
    let link_total = grid.integrate_samples(&vec![1.0; grid.len()]);
    let mut quad = rs[0].powi(3) / 3.0 * link_total; // completion, exact power
    for w in rs.windows(2) {
        quad += crate::quad::power_law_segment(
            w[0],
            w[0].powi(2) * link_total,
            w[1],
            w[1].powi(2) * link_total,
        );
    }
    checks.push(Check::le(
        "ball measure vs tensor quadrature (relative)",
        (quad - s3.ball_measure(1.0)).abs() / s3.ball_measure(1.0),
        1e-6,
    ));
    let dom = LinkDomain::cap(&s3, PI / 3.0, Pole::North)?;
    let sym = dom.symmetrized_cap()?;
    let theta = match sym.shape() {
        crate::geometry::DomainShape::Cap { theta0, .. } => *theta0,
        _ => f64::NAN,
    };
    checks.push(Check::le(
        "symmetrized cap identity on round caps",
        (theta - PI / 3.0).abs(),
        1e-12,
    ));
    Ok(Section {
        name: "geometry".into(),
        checks,
    })
}

fn spectral_section(exec: Exec) -> Result<Section> {
    let mut checks = Vec::new();
    for n in 3..=6u32 {
        let r = spectral::cap_eigenvalue(n, PI / 2.0)?;
        checks.push(Check::le(
            format!("hemisphere eigenvalue N={n} vs N-1"),
            (r.lambda - (n as f64 - 1.0)).abs(),
            1e-8,
        ));
        checks.push(Check::le(
            format!("characteristic constant N={n} at λ=N-1 vs 1"),
            (spectral::characteristic_constant(n as f64 - 1.0, n) - 1.0).abs(),
            1e-12,
        ));
    }
    let shoot = spectral::cap_eigenvalue(3, PI / 4.0)?;
    let matrix = spectral::cap_eigenvalue_with(3, PI / 4.0, CapSolver::SturmLiouville)?;
    checks.push(Check::le(
        "cross-solver agreement at N=3, θ₀=π/4",
        (shoot.lambda - matrix.lambda).abs(),
        1e-6,
    ));
    // complementary-cap sweep on S²: nonnegative deficit with minimum 2 at π/2
    let thetas: Vec<f64> = (0..50)
        .map(|i| PI / 2.0 + 0.055 * (i as f64 - 24.0))
        .collect();
    let rows = spectral::fh_scan(3, &thetas, exec)?;
    let min_row = rows
        .iter()
        .min_by(|a, b| a.sum.total_cmp(&b.sum))
        .expect("rows");
    checks.push(Check::ge(
        "disjoint-pair sweep minimum deficit",
        rows.iter().map(|r| r.deficit).fold(f64::INFINITY, f64::min),
        -1e-6,
    ));
    checks.push(Check::le(
        "sweep minimum sum vs 2",
        (min_row.sum - 2.0).abs(),
        1e-6,
    ));
    checks.push(Check::le(
        "sweep minimum located at the hemisphere",
        (min_row.theta0 - PI / 2.0).abs(),
        0.056,
    ));
    // symmetrization gaps on arcs
    for &c in &[PI, 1.5 * PI, 2.0 * PI] {
        let circle = LinkSpace::circle(c)?;
        let arc = LinkDomain::arc(&circle, 0.0, 0.4 * c)?;
        let gap = spectral::faber_krahn_gap(&arc)?;
        checks.push(Check::ge(
            format!("symmetrization gap c={c:.3}"),
            gap,
            -1e-10,
        ));
        if (c - 2.0 * PI).abs() < 1e-12 {
            checks.push(Check::le(
                "gap vanishes on the full circle",
                gap.abs(),
                1e-10,
            ));
        }
    }
    Ok(Section {
        name: "spectral".into(),
        checks,
    })
}

fn fields_section() -> Result<Section> {
    let mut checks = Vec::new();
    let cfg = GridConfig::default().with_nodes(128, 96).with_r_max(2.0);
    let opts = HypothesisOptions::default();
    let case = fields::build_halfspace_pair(3, 1.0, 1.0, PoleSpec::North, &cfg)?;
    let rep = fields::check_two_phase_hypotheses(&case, &opts);
    checks.push(Check::flag(
        "halfspace pair satisfies all hypotheses",
        rep.all_pass(),
    ));
    let link = LinkSpace::round_sphere(3)?;
    let homog = fields::build_homogeneous_pair(
        &link,
        PairSpec::CapPair { theta0: PI / 3.0 },
        1.0,
        1.0,
        &cfg,
    )?;
    let rep = fields::check_two_phase_hypotheses(&homog, &opts);
    checks.push(Check::flag(
        "homogeneous pair satisfies all hypotheses",
        rep.all_pass(),
    ));
    let trunc = case.with_truncated_phase(0, 0.8);
    let rep = fields::check_two_phase_hypotheses(&trunc, &HypothesisOptions { stride: 1, ..opts });
    checks.push(Check::flag(
        "truncated phase detected as non-subharmonic",
        !rep.subharmonicity[0].pass,
    ));
    Ok(Section {
        name: "fields".into(),
        checks,
    })
}

fn functionals_section() -> Result<Section> {
    let mut checks = Vec::new();
    let cfg = GridConfig::default().with_r_max(2.0);
    let radii: Vec<f64> = (0..100).map(|i| 0.1 + 1.9 * i as f64 / 99.0).collect();

    let case = fields::build_halfspace_pair(3, 1.0, 1.0, PoleSpec::North, &cfg)?;
    let profile = functionals::compute_profile(&case, &radii)?;
    let dev = profile
        .j
        .iter()
        .map(|&j| (j - PI * PI).abs() / (PI * PI))
        .fold(0.0, f64::max);
    checks.push(Check::le(
        "halfspace J constant at π² (relative)",
        dev,
        5e-3,
    ));
    checks.push(Check::flag(
        "halfspace monotonicity",
        functionals::monotonicity_check(&profile, 1e-6).pass,
    ));
    let (ok, worst) = functionals::lower_bound_check(&profile, 1e-3);
    checks.push(Check::flag(
        format!("halfspace chain slack ≥ -1e-3 (worst {worst:.2e})"),
        ok,
    ));

    let circle = LinkSpace::circle(2.0 * PI)?;
    let arcs = fields::build_homogeneous_pair(
        &circle,
        PairSpec::ArcPair {
            start: 0.0,
            l1: PI / 2.0,
            l2: 3.0 * PI / 2.0,
        },
        1.0,
        1.0,
        &cfg,
    )?;
    let profile = functionals::compute_profile(&arcs, &radii)?;
    let slope = functionals::log_log_slope(&profile.radii, &profile.j);
    checks.push(Check::le(
        "unequal arcs growth exponent vs 4/3",
        (slope - 4.0 / 3.0).abs() / (4.0 / 3.0),
        0.01,
    ));
    let low = functionals::derivative_lower_bound_residual(&arcs, &profile, 50)?;
    let up = functionals::value_upper_bound_residual(&arcs, &profile, 50)?;
    let worst_eq = low
        .into_iter()
        .chain(up)
        .flatten()
        .map(f64::abs)
        .fold(0.0, f64::max);
    checks.push(Check::le(
        "chain identities saturate on homogeneous pair",
        worst_eq,
        1e-6,
    ));

    let perturbed = arcs.with_radial_factor(0.1);
    let profile_p = functionals::compute_profile(&perturbed, &radii)?;
    checks.push(Check::ge(
        "perturbed pair slack strictly positive",
        profile_p
            .bound_slack
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min),
        0.0,
    ));
    checks.push(Check::ge(
        "perturbed pair slack reaches 1e-3",
        profile_p.bound_slack.iter().cloned().fold(0.0, f64::max),
        1e-3,
    ));
    Ok(Section {
        name: "functionals".into(),
        checks,
    })
}

fn calculus_section() -> Result<Section> {
    let mut checks = Vec::new();
    for entry in calculus::stokes_catalog() {
        let study = calculus::refinement_study(&entry, 3)?;
        checks.push(Check::ge(
            format!("{} observed order", study.name),
            study.observed_order,
            1.0,
        ));
        checks.push(Check::le(
            format!("{} finest relative residual", study.name),
            *study.relative.last().unwrap(),
            1e-4,
        ));
    }
    let link = LinkSpace::round_sphere(3)?;
    let rep =
        calculus::green_kernel_residual(&link, KernelTest::RadialBump { a: 1.0, b: 2.0 }, 256)?;
    checks.push(Check::le(
        "kernel residual, radial bump",
        rep.residual,
        1e-10,
    ));
    let rep = calculus::green_kernel_residual(&link, KernelTest::BumpCos { a: 1.0, b: 2.0 }, 256)?;
    checks.push(Check::le("kernel residual, bump·cosθ", rep.residual, 1e-5));
    Ok(Section {
        name: "calculus".into(),
        checks,
    })
}

fn rigidity_section() -> Result<Section> {
    let mut checks = Vec::new();
    let cfg = GridConfig::default().with_r_max(2.0);
    let radii: Vec<f64> = (0..100).map(|i| 0.1 + 1.9 * i as f64 / 99.0).collect();
    let case = fields::build_halfspace_pair(3, 1.0, 2.0, PoleSpec::North, &cfg)?;
    let profile = functionals::compute_profile(&case, &radii)?;
    let report = functionals::rigidity_scan(&profile, &case, &RigidityOptions::default())?;
    checks.push(Check::flag(
        "halfspace pair recognized",
        report.verdict == RigidityVerdict::HalfSphereDecomposition,
    ));
    checks.push(Check::le(
        "recovered amplitude k₂ vs 2 (relative)",
        (report.k2.unwrap_or(f64::NAN) - 2.0).abs() / 2.0,
        1e-3,
    ));
    checks.push(Check::le(
        "inverse-power coefficient",
        report.sigma_zero_check.unwrap_or(f64::NAN),
        1e-6,
    ));

    let circle = LinkSpace::circle(2.0 * PI)?;
    let increasing = fields::build_homogeneous_pair(
        &circle,
        PairSpec::ArcPair {
            start: 0.0,
            l1: PI / 2.0,
            l2: 3.0 * PI / 2.0,
        },
        1.0,
        1.0,
        &cfg,
    )?;
    let profile = functionals::compute_profile(&increasing, &radii)?;
    let report = functionals::rigidity_scan(&profile, &increasing, &RigidityOptions::default())?;
    checks.push(Check::flag(
        "strictly increasing case reports no interval",
        report.verdict == RigidityVerdict::NoConstantInterval,
    ));
    Ok(Section {
        name: "rigidity".into(),
        checks,
    })
}
