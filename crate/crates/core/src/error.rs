use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial degree must be at least 1, got {0}")]
    InvalidDegree(usize),

    #[error("node set contains duplicate points at indices {0} and {1}")]
    DuplicateNodes(usize, usize),

    #[error("invalid domain [{a}, {b}]: left end must be below right end")]
    InvalidDomain { a: f64, b: f64 },

    #[error("element count must be at least 1")]
    NoElements,

    #[error("annihilation order {order} is outside 1..={degree}")]
    InvalidOrder { order: usize, degree: usize },

    #[error("degenerate normalization factor {value:e} at evaluation point {point}")]
    DegenerateNormalization { value: f64, point: f64 },

    #[error("evaluation point {point} lies outside the stencil hull [{lo}, {hi}]")]
    OutsideStencil { point: f64, lo: f64, hi: f64 },

    #[error("shape mismatch: expected length {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("invalid ADMM parameter `{0}`: must be positive")]
    InvalidAdmmParam(&'static str),

    #[error("ADMM iterate became non-finite at outer iteration {0}")]
    AdmmDiverged(usize),

    #[error("Newton iteration for the reference solution did not converge at x={x}, t={t}")]
    NewtonFailed { x: f64, t: f64 },

    #[error("time {t} is outside the supported range of the reference solution")]
    ReferenceTimeOutOfRange { t: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
