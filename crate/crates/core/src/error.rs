use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input matrix is not symmetric within the requested tolerance.
    #[error("matrix is not symmetric: |M[{row}][{col}] - M[{col}][{row}]| = {deviation:e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },

    /// Covariance violates positivity or the uncertainty relation.
    #[error("covariance matrix is unphysical (smallest symplectic eigenvalue {nu_minus})")]
    Unphysical { nu_minus: f64 },

    #[error("parameter `{name}` = {value} is outside its domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    /// A residual that must be non-negative came out significantly negative.
    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("sampler rejected {rejected} of {window} draws; check the configured ranges")]
    SamplerStalled { rejected: usize, window: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}
