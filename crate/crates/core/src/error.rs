use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("scalar field mismatch: {0}")]
    FieldMismatch(String),

    #[error("empty frame")]
    EmptyFrame,

    #[error("non-finite entry: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator is not self-adjoint within tolerance: asymmetry {asymmetry}, tolerance {tolerance}")]
    NotSelfAdjoint { asymmetry: f64, tolerance: f64 },

    #[error("rank-deficient frame: {0}")]
    RankDeficient(String),

    #[error("invalid eigenvalue schedule: {0}")]
    InvalidSchedule(String),

    #[error("insufficient truncation headroom: need dimension at least {needed}, got {got}")]
    InsufficientTruncation { needed: usize, got: usize },

    #[error("family is not separated: index {index} has gap {gap:.3e}")]
    NotSeparated { index: usize, gap: f64 },

    #[error("norm precondition violated: vector {index} has norm {norm} > 1")]
    NormPrecondition { index: usize, norm: f64 },

    #[error("subset enumeration guard tripped: {0}")]
    SubsetGuard(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no injective perturbation found within {retries} retries")]
    RepairFailed { retries: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
