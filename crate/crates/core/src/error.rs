use alloc::string::String;
use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gamma pole at z = {0}")]
    GammaPole(Complex64),
    #[error("{what}: parameter at a pole ({detail})")]
    ParameterPole { what: &'static str, detail: String },
    #[error("{what}: budget of {terms} terms exhausted")]
    BudgetExhausted { what: &'static str, terms: usize },
    #[error("{what}: argument outside supported domain ({detail})")]
    Domain { what: &'static str, detail: String },
    #[error("{what}: integer b = {b} is not supported")]
    IntegerB { what: &'static str, b: f64 },
    #[error("point {0} is within the near-pole threshold")]
    NearPole(Complex64),
    #[error("evaluation at a pole of the period function (z = {0})")]
    SingularPoint(Complex64),
    #[error("cannot certify series tail at y = {y}: need m > {needed}")]
    TailNotCertifiable { y: f64, needed: f64 },
    #[error("Re s = {sigma} is not beyond the abscissa {bound}")]
    Abscissa { sigma: f64, bound: f64 },
    #[error("s = {s} is within the exclusion radius of the pole at {pole}")]
    PoleProximity { s: Complex64, pole: f64 },
    #[error("contour circle passes through a pole")]
    CircleHitsPole,
    #[error("{what}: value {value} out of range (max {max})")]
    OutOfRange { what: &'static str, value: f64, max: f64 },
    #[error("quadrature did not converge: estimate {estimate:e}, tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

/// Non-fatal diagnostic attached to results and reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
}

impl Warning {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Warning { code, message: message.into() }
    }
}

impl core::fmt::Display for Warning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}
