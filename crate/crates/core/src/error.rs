use thiserror::Error;

/// Errors raised by the analysis, ingestion and reporting layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),

    #[error("bin counts differ ({left} vs {right}); homogenize the histograms to a common bin count first")]
    BinCountMismatch { left: usize, right: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("quantile table `{0}` is already centered")]
    AlreadyCentered(String),

    #[error("quantile table `{0}` must be centered first")]
    NotCentered(String),

    #[error("degenerate block `{0}`: every unit has the same distribution")]
    DegenerateBlock(String),

    #[error("all blocks are degenerate: {0:?}")]
    AllBlocksDegenerate(Vec<String>),

    #[error("axis {axis} is out of range (model has {available} axes)")]
    AxisOutOfRange { axis: usize, available: usize },

    #[error("axis {0} has a zero eigenvalue")]
    NullAxis(usize),

    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("validation error for unit `{unit}`, variable `{variable}`: {message}")]
    Validation {
        unit: String,
        variable: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
