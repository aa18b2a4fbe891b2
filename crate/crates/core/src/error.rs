use thiserror::Error;

/// Errors raised by the polynomial layer, the series engine and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial origins differ ({left} vs {right}); recenter before combining")]
    OriginMismatch { left: f64, right: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree cap {cap} exceeded while building series term {index} (degree {degree})")]
    DegreeCap {
        cap: usize,
        index: usize,
        degree: usize,
    },

    #[error("time {t} lies outside the domain [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("evaluator failed at t = {t}: {message}")]
    Evaluator { t: f64, message: String },

    #[error("transition matrix near-singular at t = {t} (condition estimate {condition:e})")]
    Singular { t: f64, condition: f64 },

    #[error("step subdivision did not converge on [{lo}, {hi}]")]
    Subdivision { lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
