//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Classified failures.
///
/// The split matters to callers: `Parameter`, `Domain`, `Infeasible` and
/// `Config` indicate a bad request (the CLI maps them to exit code 2), while
/// `Estimation` and `Numerical` are runtime failures of an otherwise valid
/// request (exit code 1).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A constructor was handed parameters outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An operation was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constrained problem has an empty feasible set.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A simulation or sweep configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// Not enough usable data to produce an estimate.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by the request itself rather than by the
    /// computation (used for CLI exit-code mapping).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_) | Error::Domain(_) | Error::Infeasible(_) | Error::Config(_)
        )
    }
}
