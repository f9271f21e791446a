use thiserror::Error;

/// Errors raised anywhere in the optimizer stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entries must be finite (found {value} at index {index})")]
    NonFinite { index: usize, value: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error(
        "matrix is singular: pivot {pivot:e} at column {column} below threshold {threshold:e}"
    )]
    SingularMatrix {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("rows are linearly dependent: row {row} has residual norm {residual:e}")]
    RankDeficient { row: usize, residual: f64 },

    #[error("invalid bounds in dimension {dim}: lower {lower} must be below upper {upper}")]
    InvalidBounds { dim: usize, lower: f64, upper: f64 },

    #[error("training set degenerate: {distinct} distinct samples remain, need at least 2")]
    DegenerateTrainingSet { distinct: usize },

    #[error("RBF Gram matrix is singular even after diagonal jitter")]
    SingularGram,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid projection dimensions: k = {k}, d = {d}")]
    InvalidDims { k: usize, d: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("ensemble member {index} failed: {source}")]
    EnsembleMember {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("population has {size} individuals, need at least {required}")]
    PopulationTooSmall { size: usize, required: usize },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("archive exhausted: {0} consecutive candidates rejected as duplicates")]
    ArchiveExhausted(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("all samples are identical")]
    DegenerateSamples,

    #[error("sample too small: {0} values, need at least 2")]
    SampleTooSmall(usize),

    #[error("no input data")]
    EmptyInput,

    #[error("run ended before a local phase started past half of the budget")]
    ProbeNotReached,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
