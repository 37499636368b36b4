//! Quadrature primitives: Gauss–Legendre rules, sine-power antiderivatives,
//! and segment rules for integrands behaving like C·ρ^γ.

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on P_n from the Chebyshev initial guess; accurate to
/// machine precision for the node counts used here (n ≤ a few thousand).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Same rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// ∫ f over [a, b] by a composite Gauss–Legendre rule with `segments`
/// equal segments of `pts` points each.
pub fn integrate_composite(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    segments: usize,
    pts: usize,
) -> f64 {
    let (xs, ws) = gauss_legendre(pts);
    let h = (b - a) / segments as f64;
    let mut total = 0.0;
    for s in 0..segments {
        let lo = a + s as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in xs.iter().zip(&ws) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// ∫₀^θ sin^k t dt for integer k ≥ 0, via the exact reduction
/// I_k = (-sin^{k-1}θ cosθ + (k-1) I_{k-2}) / k.
pub fn sin_power_integral(k: u32, theta: f64) -> f64 {
    match k {
        0 => theta,
        1 => 1.0 - theta.cos(),
        _ => {
            let (s, c) = theta.sin_cos();
            let kf = k as f64;
            (-s.powi(k as i32 - 1) * c + (kf - 1.0) * sin_power_integral(k - 2, theta)) / kf
        }
    }
}

/// ∫_{r0}^{r1} g dρ from endpoint samples, assuming g ≈ C·ρ^γ on the segment.
///
/// Exact for pure power laws, which is what the ACF integrands reduce to on
/// homogeneous fields. Falls back to the trapezoid rule when a sample is
/// nonpositive (degenerate phases) or the fit is ill-defined.
pub fn power_law_segment(r0: f64, g0: f64, r1: f64, g1: f64) -> f64 {
    debug_assert!(r1 > r0 && r0 > 0.0);
    if g0 <= 0.0 || g1 <= 0.0 {
        return 0.5 * (g0 + g1) * (r1 - r0);
    }
    let gamma = (g1 / g0).ln() / (r1 / r0).ln();
    if !gamma.is_finite() {
        return 0.5 * (g0 + g1) * (r1 - r0);
    }
    if (gamma + 1.0).abs() < 1e-8 {
        // ∫ C/ρ = C ln(r1/r0) with C = g0 r0
        return g0 * r0 * (r1 / r0).ln();
    }
    g0 * r0 * ((r1 / r0).powf(gamma + 1.0) - 1.0) / (gamma + 1.0)
}

/// Completion of ∫₀^{r0} g dρ from the leading power fitted to the two
/// innermost samples (r0, g0), (r1, g1). Returns `None` when the fitted
/// exponent makes the integral divergent at the origin.
pub fn power_law_completion(r0: f64, g0: f64, r1: f64, g1: f64) -> Option<f64> {
    if g0 <= 0.0 || g1 <= 0.0 {
        return Some(0.0);
    }
    let gamma = (g1 / g0).ln() / (r1 / r0).ln();
    if !gamma.is_finite() || gamma <= -1.0 {
        return None;
    }
    Some(g0 * r0 / (gamma + 1.0))
}
