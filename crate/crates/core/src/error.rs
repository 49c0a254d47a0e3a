use thiserror::Error;

/// Errors produced by the geometry, feature, neural and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a precondition (non-finite coordinate, too few points, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A scalar argument is out of its allowed range (k >= N, m > N, lr <= 0, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Configuration pieces do not fit together (layout width vs transform width).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called out of order, e.g. backward without a matching forward.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Malformed file content. `offset` is the byte (binary) or line (text) position.
    #[error("format error at {unit} {offset}: {message}")]
    Format {
        unit: &'static str,
        offset: u64,
        message: String,
    },

    /// Well-formed content that fails numeric validation (NaN, infinity).
    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format_at_byte(offset: u64, message: impl Into<String>) -> Self {
        Error::Format {
            unit: "byte",
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn format_at_line(line: u64, message: impl Into<String>) -> Self {
        Error::Format {
            unit: "line",
            offset: line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
