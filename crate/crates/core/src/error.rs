use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed CSV at line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },

    #[error("non-positive price at line {line}")]
    NonPositivePrice { line: usize },

    #[error("duplicate timestamp {timestamp} at line {line}")]
    DuplicateTimestamp { line: usize, timestamp: String },

    #[error("cannot resample from {from} to finer frequency {to}")]
    UpsampleRequested { from: String, to: String },

    #[error("series share no timestamps")]
    NoOverlap,

    #[error("frequency mismatch: {left} vs {right}")]
    FrequencyMismatch { left: String, right: String },

    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("power transform requires an odd positive exponent, got {0}")]
    EvenPower(u32),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("regression design matrix is singular")]
    SingularRegression,

    #[error("only {found} usable scales, at least 4 required")]
    TooFewScales { found: usize },

    #[error("degenerate fit: no spread in log n")]
    DegenerateFit,

    #[error("circulant embedding has negative eigenvalue {min_eigenvalue:e}")]
    EmbeddingFailure { min_eigenvalue: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
