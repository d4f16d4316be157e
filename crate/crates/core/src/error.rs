use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    #[error("argument {0} is outside the supported evaluation range")]
    Overflow(Complex64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("denominator parameter {param} vanishes at term {term}")]
    DenominatorPole { param: Complex64, term: usize },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("integrand exceeds its declared envelope at x = {x}: |f| = {value:e} > {bound:e}")]
    Envelope { x: f64, value: f64, bound: f64 },

    #[error("sampled data ends at x = {end} but the envelope tail beyond it is {tail:e}")]
    TailNotCovered { end: f64, tail: f64 },

    #[error("tuning condition violated: {0}")]
    Tuning(String),
}

impl Error {
    /// True for errors caused by caller-supplied parameters rather than by
    /// the numerical machinery itself.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Pole(_) | Error::Domain(_) | Error::Range(_) | Error::Tuning(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
