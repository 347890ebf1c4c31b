use thiserror::Error;

/// Errors raised by the counting and analytic routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid input: {0}")]
    Domain(String),

    /// A size or iteration guard was exceeded.
    #[error("resource guard exceeded: {what} (limit {limit})")]
    ResourceGuard { what: &'static str, limit: u64 },

    /// Two routes that must agree disagreed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// A numerical procedure failed to reach its stated accuracy.
    #[error("precision failure: {0}")]
    Precision(String),

    /// The least-squares system was singular or underdetermined.
    #[error("singular system: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(cond: bool, what: &'static str, limit: u64) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ResourceGuard { what, limit })
    }
}
