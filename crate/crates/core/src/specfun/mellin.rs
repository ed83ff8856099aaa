//! x-domain potentials and their Mellin transforms â(t) = ∫₁^∞ x^{−1+it} a(x) dx.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_panels};
use crate::rational::PosRational;

/// A real potential a(x) on x ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// a(x) = a1 for x < x1, zero afterwards.
    Step {
        a1: f64,
        x1: PosRational,
    },
    /// a(x) = −2 sin(2πx)/√x.
    SmoothSine,
    /// Piecewise-linear interpolation of `(x, a(x))` samples, zero past the last one.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl PotentialSpec {
    pub fn step(a1: f64, x1: PosRational) -> Result<Self> {
        let p = PotentialSpec::Step { a1, x1 };
        p.validate()?;
        Ok(p)
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        let p = PotentialSpec::Tabulated { samples };
        p.validate()?;
        Ok(p)
    }

    /// Checks the variant's shape constraints and that ∫ a/x and ∫ a²/x are finite.
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Step { a1, x1 } => {
                if !a1.is_finite() {
                    return Err(Error::InvalidPotential(format!("step amplitude {a1} is not finite")));
                }
                if *x1 <= PosRational::one() {
                    return Err(Error::InvalidPotential(format!("step edge {x1} must exceed 1")));
                }
                Ok(())
            }
            PotentialSpec::SmoothSine => Ok(()),
            PotentialSpec::Tabulated { samples } => {
                let bad = |m: &str| Err(Error::InvalidPotential(m.to_string()));
                if samples.len() < 2 {
                    return bad("tabulated potential needs at least two samples");
                }
                if samples[0].0 != 1.0 {
                    return bad("tabulated potential must start at x = 1");
                }
                if samples.iter().any(|(x, a)| !x.is_finite() || !a.is_finite()) {
                    return bad("tabulated potential has non-finite samples");
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return bad("tabulated abscissae must be strictly increasing");
                }
                let (i1, i2) = self.normalization_integrals()?;
                if !i1.is_finite() || !i2.is_finite() {
                    return bad("tabulated potential fails the integrability conditions");
                }
                Ok(())
            }
        }
    }

    /// (∫₁^∞ a(x)/x dx, ∫₁^∞ a(x)²/x dx).
    pub fn normalization_integrals(&self) -> Result<(f64, f64)> {
        match self {
            PotentialSpec::Step { a1, x1 } => Ok((a1 * x1.ln(), a1 * a1 * x1.ln())),
            PotentialSpec::SmoothSine => {
                let i1 = mellin(self, 0.0)?.re;
                let f = |x: f64| Complex64::new(4.0 * (2.0 * PI * x).sin().powi(2) / (x * x), 0.0);
                let head = integrate_panels(&f, 1.0, 200.0, 0.5, 1e-12)?.re;
                // sin² averages to 1/2 on the tail
                Ok((i1, head + 2.0 / 200.0))
            }
            PotentialSpec::Tabulated { samples } => {
                let mut i1 = 0.0;
                let mut i2 = 0.0;
                for w in samples.windows(2) {
                    let ((xa, ya), (xb, yb)) = (w[0], w[1]);
                    let f = |x: f64| {
                        let a = ya + (yb - ya) * (x - xa) / (xb - xa);
                        Complex64::new(a / x, a * a / x)
                    };
                    let v = integrate(&f, xa, xb, 1e-13 * (xb - xa))?;
                    i1 += v.re;
                    i2 += v.im;
                }
                Ok((i1, i2))
            }
        }
    }

    /// a(x) for x ≥ 1.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Step { a1, x1 } => {
                if x < x1.to_f64() {
                    *a1
                } else {
                    0.0
                }
            }
            PotentialSpec::SmoothSine => -2.0 * (2.0 * PI * x).sin() / x.sqrt(),
            PotentialSpec::Tabulated { samples } => {
                let k = samples.partition_point(|&(xs, _)| xs <= x);
                if k == 0 || k == samples.len() {
                    return if k == samples.len() && x == samples[k - 1].0 { samples[k - 1].1 } else { 0.0 };
                }
                let ((xa, ya), (xb, yb)) = (samples[k - 1], samples[k]);
                ya + (yb - ya) * (x - xa) / (xb - xa)
            }
        }
    }
}

/// (e^{itL} − 1)/(it), continuous through t = 0.
fn expm1_over_it(t: f64, l: f64) -> Complex64 {
    let half = 0.5 * t * l;
    let sinc = if half.abs() < 1e-8 { 1.0 - half * half / 6.0 } else { half.sin() / half };
    Complex64::from_polar(l * sinc, half)
}

/// Absolute accuracy targeted by the numerical transforms.
pub const MELLIN_TOL: f64 = 1e-10;

/// â(t) = ∫₁^∞ x^{−1+it} a(x) dx.
pub fn mellin(potential: &PotentialSpec, t: f64) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("mellin argument {t} is not finite")));
    }
    match potential {
        PotentialSpec::Step { a1, x1 } => {
            potential.validate()?;
            Ok(*a1 * expm1_over_it(t, x1.ln()))
        }
        PotentialSpec::SmoothSine => smooth_sine_mellin(t),
        PotentialSpec::Tabulated { samples } => {
            potential.validate()?;
            let mut acc = Complex64::new(0.0, 0.0);
            for w in samples.windows(2) {
                let ((xa, ya), (xb, yb)) = (w[0], w[1]);
                // a = α + βx on the segment
                let beta = (yb - ya) / (xb - xa);
                let alpha = ya - beta * xa;
                let pa = Complex64::from_polar(1.0, t * xa.ln());
                let first = pa * expm1_over_it(t, (xb / xa).ln());
                let s1 = Complex64::new(1.0, t);
                let pb = Complex64::from_polar(1.0, t * xb.ln());
                let second = (pb * xb - pa * xa) / s1;
                acc += alpha * first + beta * second;
            }
            Ok(acc)
        }
    }
}

fn smooth_sine_mellin(t: f64) -> Result<Complex64> {
    let expo = Complex64::new(-1.5, t);
    let big_x = 20.0f64.max(4.0 * t.abs());
    let body = |x: f64| -2.0 * (expo * x.ln()).exp() * (2.0 * PI * x).sin();
    let head = integrate_panels(&body, 1.0, big_x, 0.125, 0.1 * MELLIN_TOL)?;

    // sin(2πx) = (e^{2πix} − e^{−2πix})/(2i); each exponential is rotated onto
    // the vertical ray x = X ± iy where it decays like e^{−2πy}.
    let ray = |sign: f64| {
        move |y: f64| {
            let x = Complex64::new(big_x, sign * y);
            let osc = (Complex64::new(0.0, sign * 2.0 * PI) * x).exp();
            (expo * x.ln()).exp() * osc * Complex64::new(0.0, sign)
        }
    };
    let up = integrate(&ray(1.0), 0.0, 8.0, 0.01 * MELLIN_TOL)?;
    let down = integrate(&ray(-1.0), 0.0, 8.0, 0.01 * MELLIN_TOL)?;
    let tail = -2.0 * (up - down) / Complex64::new(0.0, 2.0);
    Ok(head + tail)
}
