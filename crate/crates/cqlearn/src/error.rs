use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambient dimension must be at least 1")]
    EmptyDimension,

    #[error("unknown point id {0}")]
    UnknownPointId(usize),

    #[error("degenerate pool: f vanishes on every point")]
    DegeneratePool,

    #[error("empty target set")]
    EmptyTargets,

    #[error("inconsistent transcript: no concept satisfies it ({context})")]
    InconsistentTranscript { context: String },

    #[error("cone rule needs at least 2 sorted points, got {0}")]
    TooFewConePoints(usize),

    #[error("minimal-ratio slack must be nonnegative")]
    NegativeEta,

    #[error("rejection budget exhausted after {attempts} attempts; try a smaller eta target")]
    RejectionBudgetExhausted { attempts: usize },

    #[error("update step exceeded the resample guard ({resamples} resamples at iteration {iteration})")]
    ResampleGuard { iteration: usize, resamples: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
