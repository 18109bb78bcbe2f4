use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("table must be at least 2x2, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },

    #[error("entry at ({row}, {col}) is negative or not finite: {value}")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("entries sum to {sum}, expected 1 within {tol:e}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("total mass is zero")]
    ZeroMass,

    #[error("row {0} has no cell in the support")]
    EmptyRow(usize),

    #[error("column {0} has no cell in the support")]
    EmptyColumn(usize),

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid margin: {0}")]
    InvalidMargin(String),

    #[error("scaling factors must be strictly positive and finite")]
    NonPositiveScaling,

    #[error("invalid permutation of length {0}")]
    InvalidPermutation(usize),

    #[error("basis does not belong to the support of the table")]
    BasisMismatch,

    #[error("structural zero at ({row}, {col}): odds ratios need full support, use signature() instead")]
    StructuralZero { row: usize, col: usize },

    #[error("{0} is not stochastic")]
    NotStochastic(&'static str),

    #[error("zero marginal variance, correlation undefined")]
    DegenerateVariance,

    #[error("unknown calibration `{0}` (expected `yule` or `gauss`)")]
    UnknownCalibration(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("zero density at grid cell ({row}, {col})")]
    ZeroCell { row: usize, col: usize },

    #[error("grid has {found} rows/cols, level {level} needs {expected}")]
    GridShape {
        level: u32,
        expected: usize,
        found: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),
}
