use thiserror::Error;

pub type Result<T, E = FrameError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("invalid vector system: {0}")]
    InvalidSystem(String),

    #[error("index {index} out of range for a system of {count} vectors")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("scaling factor {0} outside (0, 1]")]
    InvalidLambda(f64),

    #[error("scale factor must be positive and finite, got {0}")]
    InvalidFactor(f64),

    #[error("ratio of vector {0} is 0/0 (zero vector with zero interference at sigma = 0)")]
    IndeterminateRatio(usize),

    #[error("frame operator has zero trace")]
    ZeroTrace,

    #[error("invalid parameters: {0}")]
    Domain(String),

    #[error("vector {index} has squared norm {norm2} outside [{c1}, {c2}]")]
    Infeasible {
        index: usize,
        norm2: f64,
        c1: f64,
        c2: f64,
    },

    #[error("tight frame construction did not converge (best defect {best_defect:e})")]
    NotConverged { best_defect: f64 },

    #[error("{0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for FrameError {
    fn from(err: std::io::Error) -> Self {
        FrameError::Io(err.to_string())
    }
}
