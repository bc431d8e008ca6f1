use thiserror::Error;

/// Errors raised by the numerical kernels and the chain models built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations (estimate {estimate}, error bound {error_bound})")]
    Convergence {
        estimate: f64,
        error_bound: f64,
        iterations: usize,
    },

    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("hopping vanishes at x = {x}")]
    SingularProfile { x: f64 },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("expression error at column {column}: {message}")]
    Expression { column: usize, message: String },

    #[error("malformed profile record: {0}")]
    Record(String),

    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
