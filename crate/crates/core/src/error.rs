use thiserror::Error;

use crate::Scalar;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the range the operation is defined on.
    #[error("{name} = {value} is out of range (expected {expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("invalid order book: {0}")]
    InvalidBook(String),

    #[error("insufficient depth: no {side} levels within {window} of the mid price")]
    InsufficientDepth { side: &'static str, window: f64 },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain<S: Scalar>(name: &'static str, value: S, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.as_f64(),
            expected,
        }
    }

    /// Passes `value` through when `ok` holds, otherwise a domain error.
    /// NaN never satisfies a range predicate, so callers need no separate check.
    pub(crate) fn ensure<S: Scalar>(
        ok: bool,
        name: &'static str,
        value: S,
        expected: &'static str,
    ) -> Result<S> {
        if ok {
            Ok(value)
        } else {
            Err(Self::domain(name, value, expected))
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let line = err.position().map_or(0, |p| p.line());
        match err.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            kind => Error::Parse {
                line,
                message: format!("{kind:?}"),
            },
        }
    }
}
