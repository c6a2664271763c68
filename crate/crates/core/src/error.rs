//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building models or running checks.
///
/// The variants are deliberately coarse: each one corresponds to a violated
/// precondition or a numerical guard, and the message carries the offending
/// quantity so a failing run can be diagnosed from the error alone.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("spectrum must be a strictly increasing sequence of finite reals")]
    SpectrumNotIncreasing,

    #[error("coefficient vector has length {got}, spectrum has {expected} eigenvalues")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("functional calculus overflow: G({lambda}) * c is not finite")]
    FunctionalCalculusOverflow { lambda: f64 },

    #[error("symbol hypothesis violated: {0}")]
    SymbolHypothesis(String),

    #[error("bound degenerate at r = {0}: G(r) vanishes")]
    BoundDegenerate(f64),

    #[error("modulus-of-continuity conditions violated: {0}")]
    ModulusConditions(String),

    #[error("Dini condition violated: {0}")]
    DiniViolated(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("Gram block of order {0} is not positive definite")]
    GramNotPositiveDefinite(usize),

    #[error("pencil iteration failed to converge within {0} iterations")]
    PencilIterationFailed(usize),

    #[error("quadrature self-estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("boundary condition violated at t = {at}: residual {value:.3e}")]
    BoundaryCondition { at: f64, value: f64 },

    #[error("theorem hypothesis violated: {0}")]
    TheoremHypothesis(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("exact solution and right-hand side are inconsistent: residual {0:.3e}")]
    InconsistentExact(f64),
}
