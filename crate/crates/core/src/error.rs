//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}, outside tolerance {tol} of 1")]
    RowSumOutOfTolerance { row: usize, sum: f64, tol: f64 },
    #[error("channel has an empty output alphabet")]
    EmptyOutputAlphabet,
    #[error("difference label must be nonzero")]
    ZeroDifference,
    #[error("delta {0} must lie in (0, 1/2)")]
    DeltaOutOfRange(f64),
    #[error("path depth {depth} exceeds cap {cap} for generic channels")]
    DepthCapExceeded { depth: usize, cap: usize },
    #[error("depth {depth} exceeds the in-memory sweep cap {cap}")]
    DepthTooLarge { depth: usize, cap: usize },
    #[error("output alphabet grew to {width} entries, over the cap {cap}")]
    WidthCapExceeded { width: usize, cap: usize },
    #[error("epsilon {0} must lie in [0, 1]")]
    EpsilonOutOfRange(f64),
    #[error("vector length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("pair permutation is not a linear bijection: {0}")]
    InvalidPermutation(String),
    #[error("channel spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
