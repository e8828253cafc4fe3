//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the signal pipeline, persistence formats, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that needs at least one sample received an empty series.
    #[error("series is empty")]
    EmptySeries,

    /// A window parameter resolved to an unusable sample count.
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    /// Sample rates must be positive and finite.
    #[error("invalid sample rate: {0}")]
    InvalidRate(f64),

    /// Acceleration values must be finite.
    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },

    /// Timestamps within one stream must be strictly increasing.
    #[error("timestamp regression: {prev} ms followed by {next} ms")]
    StreamOrder { prev: u64, next: u64 },

    /// Too few samples for the requested statistic.
    #[error("need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    /// Template labels are unique within a store.
    #[error("duplicate template label: {0:?}")]
    DuplicateLabel(String),

    /// Template labels must be non-empty and free of whitespace (they are
    /// fields in whitespace-delimited file formats).
    #[error("invalid template label: {0:?}")]
    InvalidLabel(String),

    /// Classification needs at least one enrolled template.
    #[error("template store is empty")]
    EmptyStore,

    /// A text format failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The file declares a format version this build does not understand.
    #[error("unsupported format version: {0}")]
    FormatVersion(String),

    /// Ground-truth repetition intervals must not overlap.
    #[error("truth intervals overlap near {at_ms} ms")]
    OverlappingIntervals { at_ms: u64 },

    /// A configuration value is out of range or malformed.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A peak list handed to segment extraction referenced samples out of range.
    #[error("peak index {index} out of range for series of length {len}")]
    PeakOutOfRange { index: usize, len: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
