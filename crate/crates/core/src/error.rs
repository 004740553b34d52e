use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed run-length encoding: {0}")]
    MalformedRle(String),

    #[error("slot disjointness violated at pixel ({row}, {col}): slots {a} and {b} both set")]
    DisjointnessViolation { row: usize, col: usize, a: usize, b: usize },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid proposal: {0}")]
    InvalidProposal(String),

    #[error("object placement failed: {0}")]
    Placement(String),

    #[error("invalid scene spec: {0}")]
    InvalidSpec(String),

    #[error("dataset layout error: {0}")]
    DatasetLayout(String),

    #[error("frame/annotation alignment error: {0}")]
    Alignment(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint version/config mismatch: {0}")]
    Checkpoint(String),

    #[error("training data error: {0}")]
    TrainingData(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image error: {0}")]
    Image(String),
}

impl Error {
    /// Process exit code for the CLI: 2 input/layout, 3 config/version, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Checkpoint(_) => 3,
            Error::Numerical(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<image::ImageError> for Error {
    fn from(e: image::ImageError) -> Self {
        Error::Image(e.to_string())
    }
}

impl From<png::DecodingError> for Error {
    fn from(e: png::DecodingError) -> Self {
        Error::Image(format!("png decode: {e}"))
    }
}

impl From<png::EncodingError> for Error {
    fn from(e: png::EncodingError) -> Self {
        Error::Image(format!("png encode: {e}"))
    }
}
