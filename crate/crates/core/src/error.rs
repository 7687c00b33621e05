use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("interior point violates the affine constraints (residual {residual:.3e} > tol {tol:.3e})")]
    InfeasibleInteriorPoint { residual: f64, tol: f64 },
    #[error("objective is orthogonal to the null space of the constraints; every feasible point is optimal")]
    DegenerateObjective,
    #[error("level sets are single points (dim L = 0)")]
    DegenerateSubspace,
    #[error("exact r_e is only available for polyhedral cones (found {0} leaf)")]
    UnsupportedConeForExactRe(&'static str),
    #[error("quadratic factor has complex roots (discriminant {0:.3e}); cone is not hyperbolic w.r.t. e")]
    ComplexRoots(f64),
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    JacobiNoConvergence(usize),
    #[error("derivative-polynomial denominator {0:.3e} is numerically zero")]
    NearSingularDenominator(f64),
    #[error("cone is not hyperbolic w.r.t. e at {leaf}: {reason}")]
    NotHyperbolicWrtE { leaf: String, reason: String },
    #[error("invalid cone specification: {0}")]
    InvalidCone(String),
    #[error("radial projection undefined: lambda_min(x) = {0} >= 1")]
    ProjectionUndefined(f64),
    #[error("warm start has c.v = {cv} >= c.e = {ce}")]
    BadWarmStart { cv: f64, ce: f64 },
    #[error("bad AGM start point: {0}")]
    BadStart(String),
    #[error("Lipschitz trial value exceeded {0:.1e}")]
    LipschitzOverflow(f64),
    #[error("restart requested with lambda_min(w) = {0} < 1/2")]
    PrematureRestart(f64),
    #[error("cone degree {0} is too small for the fixed smoothing parameters (ln n = 0)")]
    DegreeTooSmall(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
