use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("graph generation failed: {0}")]
    GenerationFailure(String),

    #[error("game initialization failed: {0}")]
    Initialization(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("value {value} outside histogram range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("column {column} ({name}) has zero variance")]
    ZeroVariance { column: usize, name: String },

    #[error("similarity undefined for {0}")]
    UndefinedSimilarity(String),

    #[error("replica {replica}: {source}")]
    Replica {
        replica: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
