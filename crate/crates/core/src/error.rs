use num_complex::Complex64;
use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: domain violation: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A Gamma-family function was evaluated at (or numerically on top of) a pole.
    #[error("{op}: pole at z = {z}")]
    Pole { op: &'static str, z: Complex64 },

    /// The result magnitude cannot be represented.
    #[error("{op}: overflow for |z| = {modulus:e}")]
    Overflow { op: &'static str, modulus: f64 },

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// A rejection sampler hit its iteration cap.
    #[error("rejection sampler exceeded {cap} proposals (empirical acceptance {acceptance:e})")]
    IterationCap { cap: u64, acceptance: f64 },

    /// An iterative solver failed to converge.
    #[error("{op}: solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        op: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Invalid parameter combination (ensemble, rate point, grid, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A matrix or product degenerated (vanishing determinant factor, eigenvalue at 1, ...).
    #[error("{op}: degenerate input: {detail}")]
    Degenerate { op: &'static str, detail: String },

    /// I/O failure while exporting tables.
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
