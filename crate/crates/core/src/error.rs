use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("embedding is empty")]
    Empty,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("label `{0}` is reserved")]
    ReservedLabel(String),
    #[error("non-finite value in row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("ragged matrix: row {row} has {found} columns, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("size mismatch: {what} has {found} entries, expected {expected}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("cosine distance is undefined for a zero vector")]
    ZeroVector,
    #[error("invalid power {value} for entity {index}")]
    InvalidPower { index: usize, value: f64 },
    #[error("k = {k} is out of range (limit {limit})")]
    KTooLarge { k: usize, limit: usize },
    #[error("centered embedding has zero variance")]
    DegenerateSpectrum,
    #[error("PCA components are not orthonormal (error {0:e})")]
    NotOrthonormal(f64),
    #[error("no relation pair resolves against the embedding")]
    NoResolvableEdges,
    #[error("no scorable edges: every tree edge attaches to the root")]
    NoScorableEdges,
    #[error("no scorable pairs: every LCH set is empty")]
    NoScorablePairs,
    #[error("no active entities in the index")]
    NoActiveEntities,
    #[error("entity {0} is already active")]
    AlreadyActive(usize),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{path}:{line}: expected dimension {expected}, found {found}")]
    InconsistentDimension {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}: header declares {declared} rows, found {found}")]
    CountMismatch {
        path: PathBuf,
        declared: usize,
        found: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
