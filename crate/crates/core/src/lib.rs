//! Numerical verification of the ACF monotonicity functional
//! J(r) = r⁻⁴·A₁(r)·A₂(r) on metric measure cones over parametrized links,
//! together with the eigenvalue inequalities its monotonicity rests on and
//! the rigidity configuration that constant J forces.
//!
//! The crate is organized along the objects involved:
//!
//! * [`geometry`] — links Σ (spheres, circles, warped suspensions), the cone
//!   C(Σ), distances, measures, and symmetrized comparison caps;
//! * [`spectral`] — first Dirichlet eigenvalues, characteristic constants,
//!   symmetrization gaps, and disjoint-pair sums;
//! * [`fields`] — two-phase pairs (u₁, u₂) built from eigen-data, with split
//!   gradients and hypothesis checks;
//! * [`functionals`] — A_i(r), J(r), their log-derivatives, the inequality
//!   chain, and the rigidity scan;
//! * [`calculus`] — the annulus Stokes identities and the Green-kernel
//!   harmonicity residual, run as refinement studies.
//!
//! Sweeps run in parallel by default (`parallel` feature) with order-fixed
//! reductions, so all outputs are identical across thread counts.

pub mod calculus;
pub mod error;
pub mod fields;
pub mod fmt;
pub mod functionals;
pub mod geometry;
pub mod grid;
pub mod par;
pub mod quad;
pub mod spectral;
pub mod verification;

pub use error::{Error, Result};
