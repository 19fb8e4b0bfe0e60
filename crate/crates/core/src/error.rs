use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative argument: {0}")]
    Negative(&'static str),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("monomial of degree {got} in a degree-{expected} object")]
    Inhomogeneous { expected: u32, got: u32 },
    #[error("zero form where a nonzero one is required")]
    ZeroForm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational {0} does not fit in a finite float")]
    FloatOverflow(String),
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("basis was not produced from this form")]
    BasisMismatch,
    #[error("exact division failed: {0}")]
    NotDivisible(&'static str),
    #[error("chart index {index} out of range for {vars} variables")]
    ChartOutOfRange { index: usize, vars: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("all samples hit zeros of the form")]
    DegeneratePlan,
    #[error("quadrature did not converge (achieved {achieved:e}, wanted {wanted:e})")]
    Quadrature { achieved: f64, wanted: f64 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
