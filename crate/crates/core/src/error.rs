use core::fmt;

/// Errors produced by the fusion core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two inputs that must share a pixel grid do not.
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// Width or height is zero.
    EmptyImage { width: usize, height: usize },
    /// Pixel buffer length does not equal width × height.
    DataLength { expected: usize, found: usize },
    /// A tunable parameter is out of its admissible range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// A decision map value is not one of the levels its stage allows.
    InvalidLevel { stage: &'static str, value: f64 },
    /// The fusion rules are binary; only two sources are accepted.
    SourceCount(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::EmptyImage { width, height } => {
                write!(f, "image must be non-empty, got {width}x{height}")
            }
            Error::DataLength { expected, found } => {
                write!(f, "pixel buffer holds {found} values, expected {expected}")
            }
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::InvalidLevel { stage, value } => {
                write!(f, "value {value} is not a valid {stage} level")
            }
            Error::SourceCount(n) => write!(f, "exactly two sources are required, got {n}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
