//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid feature vector: {0}")]
    InvalidFeature(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("example id {0} is not in the unlabeled set")]
    NotUnlabeled(u64),

    #[error("unknown example id {0}")]
    UnknownId(u64),

    #[error("train fraction must be in (0, 1), got {0}")]
    InvalidFraction(f64),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("IDX file {path}: bad magic number {got:#010x}, expected {expected:#010x}")]
    IdxBadMagic { path: String, got: u32, expected: u32 },

    #[error("IDX file {path}: truncated ({0})", .detail)]
    IdxTruncated { path: String, detail: String },

    #[error("IDX pair: {images} images but {labels} labels")]
    IdxCountMismatch { images: usize, labels: usize },

    #[error("delimited file {path}: missing column {column:?}")]
    MissingColumn { path: String, column: String },

    #[error("delimited file {path}, line {line}: {detail}")]
    MalformedRow { path: String, line: u64, detail: String },

    #[error("no labeled examples to train on")]
    NoTrainingData,

    #[error("empty test set")]
    EmptyTestSet,

    #[error("need at least 2 classes, got {0}")]
    TooFewClasses(usize),

    #[error("invalid probability vector: {0}")]
    InvalidProbVector(String),

    #[error("empty unlabeled pool")]
    EmptyUnlabeledPool,

    #[error("{requested} clusters requested but only {available} points available")]
    TooFewPoints { requested: usize, available: usize },

    #[error("subset must be non-empty")]
    EmptySubset,

    #[error("selection size {k} exceeds candidate count {n}")]
    SelectionTooLarge { k: usize, n: usize },

    #[error("invalid strategy spec {spec:?}: {detail}")]
    InvalidStrategySpec { spec: String, detail: String },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("model checkpoint {path}: {detail}")]
    Checkpoint { path: String, detail: String },

    #[error("CSV field {field:?} on line {line}: {detail}")]
    CsvField { field: String, line: u64, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
