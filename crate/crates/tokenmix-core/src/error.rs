//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors surfaced by the core pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Image dimensions do not match the patch layout.
    DimensionMismatch {
        expected: (usize, usize, usize),
        got: (usize, usize, usize),
    },
    /// Two grid-indexed values disagree on their token-grid shape.
    LayoutMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// A layout field violates its construction rules.
    InvalidLayout(String),
    /// A configuration value is out of range.
    InvalidConfig(String),
    /// Input contains NaN or infinite values where finite ones are required.
    NonFinite,
    /// Class index outside `0..num_classes`.
    ClassOutOfRange { class: usize, num_classes: usize },
    /// Cross-entropy target with zero total mass.
    EmptyTarget,
    /// Training produced a non-finite loss.
    Diverged { epoch: usize, step: usize },
    /// Archive construction rejected a record.
    InvalidArchive(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => write!(
                f,
                "image dimensions {:?} do not match layout {:?} (channels, height, width)",
                got, expected
            ),
            Error::LayoutMismatch { expected, got } => {
                write!(f, "token grid mismatch: expected {:?}, got {:?}", expected, got)
            }
            Error::InvalidLayout(msg) => write!(f, "invalid layout: {}", msg),
            Error::InvalidConfig(msg) => write!(f, "invalid config: {}", msg),
            Error::NonFinite => write!(f, "input contains non-finite values"),
            Error::ClassOutOfRange { class, num_classes } => {
                write!(f, "class {} out of range (num_classes = {})", class, num_classes)
            }
            Error::EmptyTarget => write!(f, "cross-entropy target has zero total mass"),
            Error::Diverged { epoch, step } => {
                write!(f, "training diverged (non-finite loss) at epoch {}, step {}", epoch, step)
            }
            Error::InvalidArchive(msg) => write!(f, "invalid map archive: {}", msg),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
