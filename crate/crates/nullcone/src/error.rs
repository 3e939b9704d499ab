use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid structure tensor: {0}")]
    InvalidTensor(String),

    #[error("invalid frame layout: {0}")]
    InvalidLayout(String),

    #[error("invalid class vector: {0}")]
    InvalidClass(String),

    #[error("frame map does not preserve the metric: {0}")]
    NotMetricPreserving(String),

    #[error("invalid Cartan type {kind}{rank}")]
    InvalidCartanType { kind: String, rank: usize },

    #[error("grading dimensions are not weakly decreasing: {0:?}")]
    NonMonotoneGrading(Vec<usize>),

    #[error("graded algebra has no bracket; realization requires a split form")]
    DimsOnly,

    #[error("plan does not match grading: {0}")]
    PlanMismatch(String),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("linearly dependent vectors supplied as a basis")]
    DependentBasis,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
