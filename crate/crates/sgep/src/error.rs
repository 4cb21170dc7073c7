use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum SgepError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is identically zero")]
    ZeroVector,
    #[error("sparsity level {s} out of range [1, {n}]")]
    InvalidSparsity { s: usize, n: usize },
    #[error("matrix {name} is not symmetric (max asymmetry {asym:e})")]
    NotSymmetric { name: &'static str, asym: f64 },
    #[error("matrix {name} is not positive definite")]
    NotPositiveDefinite { name: &'static str },
    #[error("matrix {name} is not positive semidefinite")]
    NotPositiveSemidefinite { name: &'static str },
    #[error("bad initial point: {0}")]
    BadInitialPoint(String),
    #[error("iterate x with x'Ax = 0 encountered; Rayleigh gradient undefined")]
    DegenerateIterate,
    #[error("tpm requires B = I")]
    NotIdentityB,
    #[error("rifle step {alpha} outside (0, {bound})")]
    InvalidStep { alpha: f64, bound: f64 },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("into-support index {index} has nonzero entry")]
    IntoSupportNotZero { index: usize },
    #[error("swap count {r} exceeds min(|support|, |zero set|) = {max}")]
    InvalidR { r: usize, max: usize },
    #[error("support enumeration count C({n},{s}) exceeds budget {budget}")]
    BudgetExceeded { n: usize, s: usize, budget: u64 },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("csv parse error at line {line}: {msg}")]
    CsvParse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SgepError>;
