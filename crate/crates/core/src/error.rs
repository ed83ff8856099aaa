use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical and algebraic operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("log-gamma has a pole at z = {0}")]
    GammaPole(Complex64),

    #[error("{what}: discrepancy {value:e} exceeds tolerance {tol:e}")]
    Consistency { what: &'static str, value: f64, tol: f64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("quadrature did not converge on [{lo}, {hi}] (error estimate {estimate:e})")]
    Quadrature { lo: f64, hi: f64, estimate: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("target is not normalized: |F(0) - 1| = {0:e}")]
    Unnormalized(f64),

    #[error("integration window too small: tail estimate {tail:e} exceeds tolerance {tol:e}")]
    WindowTooSmall { tail: f64, tol: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("|F(E)| = {modulus:e} at E = {energy} is below the delocalized threshold")]
    AtZero { energy: f64, modulus: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
