use thiserror::Error;

use crate::field::Partial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("unsupported polynomial degree {0} (expected 1, 2 or 3)")]
    UnsupportedDegree(usize),

    #[error("unsupported quadrature order {0} (expected 1..=8)")]
    UnsupportedQuadrature(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is singular (pivot {pivot} has magnitude {magnitude:e})")]
    SingularMatrix { pivot: usize, magnitude: f64 },

    #[error("non-finite weight {value} at x = {x}")]
    NonFiniteWeight { x: f64, value: f64 },

    #[error("field does not provide the {0:?} derivative")]
    MissingDerivative(Partial),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("unknown case {0:?}")]
    UnknownCase(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step {n} (t = {t}): {source}")]
    Step {
        n: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("level {level} (m = {m}): {source}")]
    Level {
        level: usize,
        m: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_step(self, n: usize, t: f64) -> Self {
        Error::Step {
            n,
            t,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_level(self, level: usize, m: usize) -> Self {
        Error::Level {
            level,
            m,
            source: Box::new(self),
        }
    }
}
