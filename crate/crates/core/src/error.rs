use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("root left its bracket: {0}")]
    Bracket(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

impl Error {
    /// True for failures of a numerical routine rather than of the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Bracket(_) | Error::Degenerate(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
