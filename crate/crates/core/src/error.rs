use thiserror::Error;

/// An operation left the domain on which it is defined for some point of
/// its input enclosure. Provers treat this as "undecided here, subdivide".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("square root of a strictly negative interval")]
    NegativeSqrt,
    #[error("negative power of an interval containing zero")]
    NegativePowerOfZero,
    #[error("derivative of sqrt(a^2 - 1) requested too close to a = 1")]
    RadicalEndpoint,
    #[error("two bodies may collide inside the enclosure")]
    Collision,
    #[error("non-finite value produced")]
    NonFinite,
}

/// Failures of the linear-algebra and certification layers above plain
/// interval evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("midpoint Jacobian is numerically singular")]
    SingularMatrix,
    #[error("matrix is not certified rank deficient: {0}")]
    NotRankDeficient(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("expected a unique zero: {0}")]
    NotUnique(String),
    #[error("campaign budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("floating-point Newton iteration failed: {0}")]
    NewtonFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
