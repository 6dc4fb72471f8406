use thiserror::Error;

/// Errors raised by the exact-arithmetic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand mismatch: sqrt({0}) and sqrt({1}) live in different quadratic fields")]
    RadicandMismatch(i64, i64),
    #[error("field tower would exceed height 2 (radicands {0:?})")]
    TowerTooHigh(Vec<i64>),
    #[error("radicand {0} does not fit the supported range")]
    RadicandOverflow(String),
    #[error("value has no real embedding")]
    NotReal,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("form is not homogeneous: found degrees {0} and {1}")]
    NotHomogeneous(usize, usize),
    #[error("unsupported coefficient field: {0}")]
    UnsupportedField(String),
    #[error("{what} = {value} is outside the allowed range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },
    #[error("the zero form has no rank")]
    ZeroForm,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    /// True for errors that indicate a bug in the engine rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
