use thiserror::Error;

/// Errors produced by the library.
///
/// `Domain` means the inputs were outside an operation's contract (bad
/// parameters, degenerate measures, too few quadrature nodes). `Numeric`
/// means the inputs were admissible but the computation degenerated
/// (non-finite values, divergent iterates, unstable recurrences).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
