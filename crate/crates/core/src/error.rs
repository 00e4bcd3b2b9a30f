use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precision {0} bits is below the minimum of 64")]
    Precision(u32),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("argument {s} is within {dist:e} of a pole")]
    PoleProximity { s: f64, dist: f64 },

    #[error("truncation insufficient: {0}")]
    Truncation(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("eigenform residual {residual:e} exceeds bound {bound:e}")]
    Diagonalization { residual: f64, bound: f64 },

    #[error("table is incomplete: expected {expected} entries, found {found}")]
    IncompleteTable { expected: usize, found: usize },

    #[error("polynomial degree {degree} exceeds {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("weight {0} is not divisible by 4")]
    WeightMod4(u32),

    #[error("reconstruction residual {0:e} above tolerance")]
    Reconstruction(f64),

    #[error("coefficient {index} has imaginary part {im:e} beyond tolerance")]
    ComplexCoefficient { index: usize, im: f64 },

    #[error("leading coefficient vanishes to tolerance")]
    DegenerateLeading,

    #[error("neither functional-equation sign fits: residuals {plus:e} and {minus:e}")]
    NoSymmetry { plus: f64, minus: f64 },

    #[error("point leaves the safe region: Im = {0:e}")]
    UnsafePoint(f64),

    #[error("cocycle constant residual {0:e} exceeds tolerance")]
    BranchInconsistency(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
