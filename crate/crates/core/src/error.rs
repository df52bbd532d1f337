use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (pivot {pivot} failed)")]
    NotPositiveDefinite { pivot: usize },

    #[error("Hermitian eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// One entry per violated existence condition.
    #[error("domain error: {}", .0.join("; "))]
    Domain(Vec<String>),

    #[error("generalized Pochhammer symbol vanishes for partition {partition}")]
    PochhammerPole { partition: String },

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("invalid support: {0}")]
    BadSupport(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("integrand is not finite at sample {index}")]
    NonFiniteIntegrand { index: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(condition: impl Into<String>) -> Self {
        Error::Domain(vec![condition.into()])
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::PochhammerPole { .. } => 2,
            Error::NotHermitian { .. }
            | Error::NonFinite
            | Error::DimensionMismatch { .. }
            | Error::BadWeights(_)
            | Error::BadSupport(_)
            | Error::InvalidSpec(_)
            | Error::Json(_) => 1,
            Error::NotPositiveDefinite { .. }
            | Error::NoConvergence { .. }
            | Error::NonFiniteIntegrand { .. }
            | Error::Io(_)
            | Error::Csv(_) => 4,
        }
    }
}
