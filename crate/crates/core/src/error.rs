use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Input` and `Bound` are caller mistakes; `Precondition` means an operation
/// was handed a structure it is not defined on; `TheoremViolation` and
/// `Internal` mean a mathematical postcondition failed, which on a genuine
/// commutative Moufang loop would point at a bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("order {order} exceeds the configured bound {bound} for {what}")]
    Bound { what: &'static str, order: usize, bound: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by bad user input (files, arguments, bounds).
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Io { .. } | Error::Bound { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
