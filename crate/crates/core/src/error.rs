use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("bracket of order {order} needs {order} functions, got {got}")]
    OrderMismatch { order: usize, got: usize },
    #[error("numerical consistency: {0}")]
    Consistency(String),
    #[error("|Z,a'| below 1e-8 at node {node}")]
    NearSingularNode { node: usize },
    #[error("non-finite values: {0}")]
    BlowUp(String),
    #[error("lossy resampling: {0}")]
    Lossy(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("crest series: {0}")]
    SeriesTail(String),
    #[error("univalence margin violated: {0}")]
    Univalence(String),
    #[error("not enough samples: need {need}, have {have}")]
    InsufficientSamples { need: usize, have: usize },
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
