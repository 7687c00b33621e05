//! Hyperbolic programming with first-order methods.
//!
//! A conic program `min c·x s.t. Ax = b, x ∈ K`, with `K` a hyperbolicity
//! cone and a known strictly feasible `e`, is recast as maximizing the
//! minimum eigenvalue `λ_min` (defined relative to `e`) over a level set of
//! the objective. `λ_min` is replaced by an explicit log-sum-exp smoothing
//! whose gradient comes from derivative polynomials of the hyperbolic
//! polynomial, and an accelerated method with Lipschitz backtracking is run
//! on the smoothed problem. Iterates are mapped back to the feasible region
//! by radial projection from `e`.
//!
//! Modules, bottom up:
//!
//! - [`geometry`]: affine sets, projector onto `L`, `r_e`.
//! - [`cones`]: eigenvalues and eigenvalue directions for orthant,
//!   halfspace, quadratic and PSD factors and their combinations.
//! - [`smoothing`]: `f_μ`, `f̂_μ` and their gradients.
//! - [`reformulate`]: problem instances, radial projection, error
//!   translation formulas.
//! - [`agm`]: resumable accelerated gradient method.
//! - [`mainalgo`]: the restarting two-run driver.
//! - [`harness`]: problem files, generators, oracles, gradient checks.

pub mod agm;
pub mod cones;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod mainalgo;
pub mod reformulate;
pub mod smoothing;

pub use cones::{Cone, ConeSpec, EigenGradient, ProductBlock, Spectrum};
pub use error::{Error, Result};
pub use geometry::{compute_r_e, AffineGeometry};
pub use mainalgo::{solve, MainConfig, SolveReport, StopReason};
pub use reformulate::HPInstance;
pub use smoothing::SmoothedObjective;
