use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid of size {size} cannot integrate degree {degree} exactly")]
    GridTooSmall { size: usize, degree: usize },
    #[error("grid mismatch: expected {expected} samples, got {actual}")]
    GridMismatch { expected: usize, actual: usize },
    #[error("polynomial of degree {degree} exceeds nominal degree {nominal}")]
    DegreeExceedsNominal { degree: usize, nominal: usize },
    #[error("Schur parameter {index} has modulus {modulus} >= 1")]
    SchurOutOfDisk { index: usize, modulus: f64 },
    #[error("requested {requested} recursion steps but only {available} Schur parameters")]
    SequenceTooShort { requested: usize, available: usize },
    #[error("measure has zero total mass")]
    ZeroMass,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("Gram matrix is not positive definite at degree {degree}")]
    NotPositiveDefinite { degree: usize },
    #[error("evaluation point {modulus} is not inside the open unit disk")]
    OutsideDisk { modulus: f64 },
    #[error("polynomial has a zero in the closed unit disk")]
    ZeroInClosedDisk,
    #[error("kernel condition violated: off-diagonal |K| = {value:e} exceeds {tolerance:e}")]
    KernelCondition { value: f64, tolerance: f64 },
    #[error("found {found} kernel roots, expected {expected}")]
    RootCount { found: usize, expected: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("identity check failed: {what} residual {residual:e} exceeds {tolerance:e}")]
    Identity {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error("weight vanishes on the grid (min {min:e})")]
    VanishingWeight { min: f64 },
    #[error("measure is not symmetric with respect to the real axis (defect {defect:e})")]
    NotSymmetric { defect: f64 },
}
