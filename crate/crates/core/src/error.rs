use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument exceeds the range the double-precision evaluator supports.
    #[error("argument {value} exceeds the evaluation cap |z| <= {cap} ({what})")]
    Range {
        what: &'static str,
        value: f64,
        cap: f64,
    },

    /// Neither evaluation route reached the requested accuracy.
    #[error("precision loss in {what}: achieved error bound {achieved:e}, requested {requested:e}")]
    Precision {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    /// Adaptive quadrature or a truncated sum failed to converge.
    #[error("numeric failure in {what}: {detail}")]
    Numeric { what: &'static str, detail: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
