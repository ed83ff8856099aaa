//! Complex log-gamma.

use num_complex::Complex64;

use crate::error::{Error, Result};

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_741_780_329_736_4;

/// log Γ(z), continuous off the negative real axis and real for z > 0.
///
/// The imaginary part is not reduced modulo 2π, so θ(t) built from it is
/// smooth. Arguments with Re z < 1/2 are shifted up with
/// log Γ(z) = log Γ(z + 1) − log z.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("log_gamma argument {z} is not finite")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 0.5 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(lanczos(w) - shift)
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
}
