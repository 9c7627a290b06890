use thiserror::Error;

/// Errors produced across the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: malformed parse bits: {detail}")]
    MalformedParse {
        path: String,
        line: usize,
        detail: String,
    },
    #[error("{path}: malformed coreference for entity {entity} in sentence {sentence}: {detail}")]
    MalformedCoref {
        path: String,
        entity: i64,
        sentence: usize,
        detail: String,
    },
    #[error("{path}:{line}: bad record format: {detail}")]
    Format {
        path: String,
        line: usize,
        detail: String,
    },
    #[error("no genre mapping for document {0}")]
    UnmappedDocument(String),
    #[error("schema error in {path}: column {column}: {detail}")]
    Schema {
        path: String,
        column: String,
        detail: String,
    },
    #[error("encoding mismatch: {0}")]
    Encoding(String),
    #[error("stratification error: {0}")]
    Stratification(String),
    #[error("empty dataset: {0}")]
    EmptyDataset(String),
    #[error("degenerate category {0}: zero marginal total")]
    ZeroMarginal(String),
    #[error("unknown feature name: {0}")]
    UnknownFeature(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
