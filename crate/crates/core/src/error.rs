use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown group descriptor `{0}`")]
    UnknownDescriptor(String),

    #[error("step distribution is not a symmetric probability measure: {0}")]
    NonSymmetricWeights(String),

    #[error("invalid lamp group: {0}")]
    InvalidLampGroup(String),

    #[error("probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(String),

    #[error("resource cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: usize },

    #[error("measures live in different algebras: {0}")]
    AlgebraMismatch(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("stabilizer of the animal is not abelian (order {0})")]
    NonAbelianStabilizer(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub(crate) fn cap(what: impl Into<String>, limit: usize) -> Self {
        Error::CapExceeded { what: what.into(), limit }
    }
}
