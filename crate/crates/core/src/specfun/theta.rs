//! Riemann–Siegel θ and Z.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{gamma::log_gamma, zeta::zeta};
use crate::error::{Error, Result};

/// Largest |Im| tolerated when projecting e^{iθ}ζ(1/2 + it) onto the reals.
pub const Z_IMAG_TOL: f64 = 1e-9;

/// θ(t) = Im log Γ(1/4 + it/2) − (t/2) log π.
pub fn rs_theta(t: f64) -> f64 {
    // 1/4 + it/2 is never a pole.
    let lg = log_gamma(Complex64::new(0.25, 0.5 * t)).expect("log_gamma is regular at 1/4 + it/2");
    lg.im - 0.5 * t * PI.ln()
}

/// e^{2iθ(t)} = π^{-it} Γ(1/4 + it/2) / Γ(1/4 − it/2).
pub fn rs_phase2(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * rs_theta(t))
}

/// Z(t) = e^{iθ(t)} ζ(1/2 + it), checked to be real.
pub fn rs_z(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("rs_z argument {t} is not finite")));
    }
    let z = Complex64::from_polar(1.0, rs_theta(t)) * zeta(Complex64::new(0.5, t))?;
    if z.im.abs() >= Z_IMAG_TOL {
        return Err(Error::Consistency { what: "Im Z(t)", value: z.im.abs(), tol: Z_IMAG_TOL });
    }
    Ok(z.re)
}
