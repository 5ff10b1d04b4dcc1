use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("divergent parameter: {0}")]
    DivergentParameter(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("pole in denominator parameter at term {0}")]
    PoleInDenominator(usize),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),
    #[error("singular Gram matrix: {0}")]
    DegenerateGram(String),
    #[error("singular interpolation system: {0}")]
    ParameterDegeneracy(String),
    #[error("normalization vanishes: {0}")]
    DegenerateNormalization(String),
    #[error("weight cutoff too small: tail {tail:e} exceeds tolerance {tol:e}")]
    CutoffTooSmall { tail: f64, tol: f64 },
    #[error("gamma function pole at {0}")]
    GammaPole(String),
    #[error("quadrature did not converge: last two refinements differ by {0:e}")]
    QuadratureNotConverged(f64),
    #[error("reduced denominator vanishes at q = 0: {0}")]
    PoleAtZero(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
