//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsers, builders and solvers.
///
/// Infeasibility is *not* an error: solvers report it through their outcome
/// types. `Error` covers malformed input, configuration problems and
/// exhausted resource guards.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data (graph, instance file, decomposition file, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A tree decomposition failed validation.
    #[error("invalid tree decomposition: {0}")]
    Decomposition(String),

    /// A solver parameter combination was rejected.
    #[error("configuration error: {0}")]
    Config(String),

    /// A size or work guard tripped before the computation finished.
    #[error("resource guard: {what} needs {actual} but the limit is {limit}. {advice}")]
    Resource {
        what: String,
        limit: usize,
        actual: usize,
        advice: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn resource(
        what: impl Into<String>,
        limit: usize,
        actual: usize,
        advice: impl Into<String>,
    ) -> Self {
        Error::Resource {
            what: what.into(),
            limit,
            actual,
            advice: advice.into(),
        }
    }
}
