//! Riemann zeta by Euler–Maclaurin summation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// B_2, B_4, ..., B_30.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Cutoff and correction order for the Euler–Maclaurin evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaConfig {
    /// Number of terms summed directly.
    pub terms: usize,
    /// Number of Bernoulli correction terms (at most 15).
    pub order: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig { terms: 50, order: 12 }
    }
}

/// ζ(s) with the default configuration.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    zeta_with(s, &ZetaConfig::default())
}

/// ζ(x) for real x ≠ 1.
pub fn zeta_real(x: f64) -> Result<f64> {
    zeta(Complex64::new(x, 0.0)).map(|z| z.re)
}

pub fn zeta_with(s: Complex64, cfg: &ZetaConfig) -> Result<Complex64> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta argument {s} is not finite")));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    if cfg.terms < 2 || cfg.order > BERNOULLI_EVEN.len() {
        return Err(Error::InvalidArgument(format!("bad zeta configuration {cfg:?}")));
    }
    let n = cfg.terms as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..cfg.terms {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * n.ln()).exp(); // N^{-s}
    sum += n_pow * n / (s - 1.0) + 0.5 * n_pow;

    // Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
    let mut rising = s; // s(s+1)…(s+2k-2)
    let mut power = n_pow / n; // N^{-s-2k+1}
    let mut factorial = 2.0; // (2k)!
    for k in 1..=cfg.order {
        sum += rising * power * (BERNOULLI_EVEN[k - 1] / factorial);
        let kk = 2.0 * k as f64;
        rising *= (s + kk - 1.0) * (s + kk);
        power /= n * n;
        factorial *= (kk + 1.0) * (kk + 2.0);
    }
    if !sum.re.is_finite() || !sum.im.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta overflowed at s = {s}")));
    }
    Ok(sum)
}
