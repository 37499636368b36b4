use thiserror::Error;

/// Errors raised by link construction, eigensolvers, and field operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("circumference exceeds 2π (got {0}); the cone over such a circle violates the diameter bound diam ≤ π")]
    CircumferenceTooLarge(f64),
    #[error("circumference must be positive (got {0})")]
    CircumferenceNonPositive(f64),
    #[error("cone dimension must be an integer N ≥ 2 (got {0})")]
    DimensionTooSmall(u32),
    #[error("cap eigenvalue solver requires N ≥ 3 (got {0}); use the arc formula for N = 2")]
    CapSolverDimension(u32),
    #[error("volume fraction must lie strictly between 0 and 1 (got {0})")]
    InvalidFraction(f64),
    #[error("{what} must lie in {range} (got {value})")]
    OutOfRange {
        what: &'static str,
        range: &'static str,
        value: f64,
    },
    #[error("eigenvalue bracket not found while scanning [{lo:.3e}, {hi:.3e}]; the integrator failed, not the problem")]
    BracketNotFound { lo: f64, hi: f64 },
    #[error("domains overlap; the two phases must be disjoint")]
    OverlappingDomains,
    #[error("domain kind {0} is not supported by link kind {1}")]
    ShapeMismatch(&'static str, &'static str),
    #[error("amplitude k must be positive (got {0})")]
    NonPositiveAmplitude(f64),
    #[error("requested radius {0} is outside the field's radial grid [{1}, {2}]")]
    RadiusOutOfGrid(f64, f64, f64),
    #[error("point ({0}, {1}) is not within grid coverage")]
    PointOffGrid(f64, f64),
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("test function must be supported away from the vertex")]
    SupportAtVertex,
    #[error("green kernel check requires N ≥ 3 (got {0})")]
    KernelDimension(u32),
    #[error("rigidity reconstruction applies to round-sphere links only (got {0})")]
    RigidityUnsupportedLink(&'static str),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
