//! Principal-value quadrature checks of the analyticity formula and the
//! ⋆-product.
//!
//! Both integrals are of the form PV∫ dt/(iπ) h(t)/(t − z) over a symmetric
//! window [−W, W]. The pole is removed by subtraction:
//! PV∫ h(t)/(t − z) dt = ∫ (h(t) − h(z))/(t − z) dt + h(z) log((W − z)/(W + z)).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{star, ExpPoly};
use crate::error::{Error, Result};
use crate::quad::integrate_panels;

/// Width of the quadrature panels; frequencies of interest have |log q| ≲ 3.
const PANEL: f64 = 0.5;

/// Upper estimate of the error from truncating PV∫_ℝ dt/(iπ) h(t)/(t − z)
/// to [−W, W]: each oscillating term e^{iνt} leaves at most 2/(π|ν|(W − |z|)),
/// and the constant term 2|z|/(π(W − |z|)).
fn tail_estimate(h: &ExpPoly, z: f64, window: f64) -> f64 {
    let d = window - z.abs();
    h.terms()
        .iter()
        .map(|(q, c)| {
            let nu = q.ln().abs();
            if nu == 0.0 {
                2.0 * c.norm() * z.abs() / (PI * d)
            } else {
                2.0 * c.norm() / (PI * nu * d)
            }
        })
        .sum()
}

/// PV∫_{−W}^{W} dt/(iπ) h(t)/(t − z).
fn pv_integral(h: &ExpPoly, z: f64, window: f64, tol: f64) -> Result<Complex64> {
    let logs: Vec<(f64, Complex64)> = h.terms().iter().map(|(q, c)| (q.ln(), *c)).collect();
    let hz = h.eval_real(z);
    // derivative, used when a node lands on the pole
    let dhz: Complex64 = logs
        .iter()
        .map(|&(l, c)| c * Complex64::new(0.0, l) * Complex64::from_polar(1.0, z * l))
        .sum();
    let integrand = |t: f64| {
        let d = t - z;
        if d.abs() < 1e-7 {
            return dhz;
        }
        let ht: Complex64 = logs.iter().map(|&(l, c)| c * Complex64::from_polar(1.0, t * l)).sum();
        (ht - hz) / d
    };
    let body = integrate_panels(&integrand, -window, window, PANEL, tol * PI)?;
    let log_term = hz * ((window - z) / (window + z)).ln();
    Ok((body + log_term) / Complex64::new(0.0, PI))
}

fn check_window(h: &ExpPoly, z: f64, window: f64, tol: f64) -> Result<()> {
    if !(window > 2.0 * z.abs()) {
        return Err(Error::WindowTooSmall { tail: f64::INFINITY, tol });
    }
    let tail = tail_estimate(h, z, window);
    if tail > tol {
        return Err(Error::WindowTooSmall { tail, tol });
    }
    Ok(())
}

/// Checks p(z) = PV∫ dt/(iπ) p(t)/(t − z) − PV∫ dt/(iπ) p(t)/t at real z and
/// returns the discrepancy (formula minus p(z)). Fails when the truncation
/// tail of the window is larger than `tol`.
pub fn pv_hilbert_check(p: &ExpPoly, z: f64, window: f64, tol: f64) -> Result<Complex64> {
    if !p.vanishes_at_zero(1e-12) {
        return Err(Error::InvalidArgument("the analyticity formula needs p(0) = 0".into()));
    }
    if p.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    check_window(p, z, window, tol)?;
    check_window(p, 0.0, window, tol)?;
    let quad_tol = 0.01 * tol;
    let at_z = pv_integral(p, z, window, quad_tol)?;
    let at_0 = pv_integral(p, 0.0, window, quad_tol)?;
    Ok(at_z - at_0 - p.eval_real(z))
}

/// Evaluates (f⋆g)(z) from its defining integral,
/// f(z) g(−z) + PV∫ dt/(iπ) f(t) g(−t)/(t − z), and returns the discrepancy
/// against the closed form [`star`].
pub fn pv_star_check(f: &ExpPoly, g: &ExpPoly, z: f64, window: f64, tol: f64) -> Result<Complex64> {
    let h = f.mul(&g.reflect());
    if h.is_zero() {
        return Ok(star(f, g).eval_real(z));
    }
    check_window(&h, z, window, tol)?;
    let pv = pv_integral(&h, z, window, 0.01 * tol)?;
    Ok(h.eval_real(z) + pv - star(f, g).eval_real(z))
}
