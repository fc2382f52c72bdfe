//! Error taxonomy shared by every module.

use thiserror::Error;

/// All failure modes of the laboratory.
///
/// The CLI maps every variant to exit code 2 (usage / configuration class);
/// exit code 1 is reserved for runs that complete but where a mathematical
/// check fails (a `false` verdict in the report).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A catalog name, parameter list, or run configuration is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// Input data violates a structural requirement (e.g. non-SPD metric).
    #[error("validation error: {0}")]
    Validation(String),

    /// A numerical routine failed (singular solve, eigensolver breakdown).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An internal invariant was violated; usually signals a derivative
    /// accuracy problem rather than caller misuse.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// The requested operation is not supported for this spec
    /// (missing metadata, odd dimension, upper-bound-only diameter, ...).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A stated precondition failed on concrete data.
    #[error("precondition error: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
