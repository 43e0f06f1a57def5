use thiserror::Error;

/// Crate-wide error type. Each invariant violation gets its own kind so
/// callers can branch on what failed, not on message text.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("subsystem dimension must be at least 1")]
    ZeroDimension,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("operator is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("operator is not positive semidefinite: minimum eigenvalue {min_eig:.3e}")]
    NotPositiveSemidefinite { min_eig: f64 },

    #[error("trace deviates from one by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("matrix is not unitary: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("weights are not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("rank {rank} is outside the valid range 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("basis element {index} is linearly dependent on earlier elements")]
    RankDeficient { index: usize },

    #[error(
        "marginal of joint state {index} deviates from its paired system state by {deviation:.3e}"
    )]
    MarginalMismatch { index: usize, deviation: f64 },

    #[error("input lies outside the span of the assignment basis (residual {residual:.3e})")]
    OutsideSpan { residual: f64 },

    #[error(
        "assignment map is defined only on a {dim}-dimensional span; extend the basis to the \
         full operator space first"
    )]
    PartialMap { dim: usize },

    #[error("block structure covers {covered} of {total} system dimensions; a map on the whole \
             operator space needs a saturating structure")]
    StructureNotSaturating { covered: usize, total: usize },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
