//! Error type shared across the crate.
//!
//! Everything fallible returns [`Result`]. Variants are deliberately coarse:
//! callers usually only need to distinguish "bad input" from "internal
//! invariant broken", and the message carries the specifics.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// Two compositions (or variable sets) that must have equal length do not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A polynomial operation mixed incompatible variable counts.
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),

    /// An index (row, column, variable, ...) is out of range.
    #[error("index out of range: {0}")]
    InvalidIndex(String),

    /// Textual input could not be parsed.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A sequence that should be a permutation of 1..=n is not.
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    /// A colored composition violates the coloring rules.
    #[error("invalid colored composition: {0}")]
    InvalidKomposition(String),

    /// A set-valued filling violates the filling conditions.
    #[error("invalid filling: {0}")]
    InvalidFilling(String),

    /// An operation was asked of a variant it does not support.
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),

    /// The expansion engine could not produce an exact expansion.
    #[error("expansion failed: {0}")]
    ExpansionFailed(String),

    /// A family name was not recognized.
    #[error("unknown family: {0}")]
    UnknownFamily(String),

    /// An internal invariant was violated; always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
