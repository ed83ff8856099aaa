//! Jost functions of the interacting xp model: construction, validation,
//! real zeros (bound states), finite-N eigencondition residuals and phase shifts.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{s_func, star, ExpPoly};
use crate::error::{Error, Result};
use crate::rational::PosRational;
use crate::spectra::{LineKind, SpectralLine};
use crate::specfun::{rs_theta, zeta, zeta_real};

/// Tolerance on the reality and regularity conditions of bold potentials.
pub const POTENTIAL_TOL: f64 = 1e-12;
/// |F| accepted as a real zero.
pub const ZERO_ACCEPT: f64 = 1e-10;
/// |F(E)| below which the phase shift is undefined.
pub const PHASE_ZERO: f64 = 1e-12;

/// The Jost-function constructions.
#[derive(Debug, Clone, PartialEq)]
pub enum JostModel {
    /// F = 1 + 2𝐚 + 𝐚⋆𝐚.
    TypeI { a: ExpPoly },
    /// F = 1 − S_{𝐚𝐛} + S_{𝐛𝐚} + S_{𝐚𝐚}S_{𝐛𝐛} − S_{𝐚𝐛}S_{𝐛𝐚}.
    TypeII { a: ExpPoly, b: ExpPoly },
    /// Step potential a(x) = a1 on 1 < x < x1.
    Step { a1: f64, x1: PosRational },
    /// F = ζ(σ − it)/ζ(σ).
    ZetaSigma { sigma: f64 },
    /// F = C (E − i/2)/(E + iμ) ζ(1/2 − iE) with F(0) = 1.
    CriticalTarget { mu: f64 },
    /// F = 2(1 + e^{2iθ(E)}), the large-E form for the sine potential.
    SmoothAsymptotic,
}

/// 𝐚(t) = (it/2) â(t) for the step potential: (a1/2)(x1^{it} − 1).
pub fn step_bold(a1: f64, x1: &PosRational) -> ExpPoly {
    ExpPoly::from_terms([
        (x1.clone(), Complex64::new(0.5 * a1, 0.0)),
        (PosRational::one(), Complex64::new(-0.5 * a1, 0.0)),
    ])
}

fn check_bold(name: &str, p: &ExpPoly) -> Result<()> {
    if !p.is_real_symmetric(POTENTIAL_TOL) {
        return Err(Error::InvalidModel(format!("{name} must have real coefficients")));
    }
    if !p.vanishes_at_zero(POTENTIAL_TOL) {
        return Err(Error::InvalidModel(format!("{name} must vanish at t = 0")));
    }
    Ok(())
}

impl JostModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            JostModel::TypeI { a } => check_bold("a", a),
            JostModel::TypeII { a, b } => {
                check_bold("a", a)?;
                check_bold("b", b)
            }
            JostModel::Step { a1, x1 } => {
                if !a1.is_finite() || *x1 <= PosRational::one() {
                    return Err(Error::InvalidModel(format!("step needs finite a1 and x1 > 1, got {a1}, {x1}")));
                }
                Ok(())
            }
            JostModel::ZetaSigma { sigma } => {
                if !(sigma.is_finite() && *sigma > 1.0) {
                    return Err(Error::InvalidModel(format!("sigma must exceed 1, got {sigma}")));
                }
                Ok(())
            }
            JostModel::CriticalTarget { mu } => {
                if !(mu.is_finite() && *mu > 0.0) {
                    return Err(Error::InvalidModel(format!("mu must be positive, got {mu}")));
                }
                Ok(())
            }
            JostModel::SmoothAsymptotic => Ok(()),
        }
    }

    /// The bold potential 𝐚 when the model is of type I form.
    pub fn type_i_potential(&self) -> Option<ExpPoly> {
        match self {
            JostModel::TypeI { a } => Some(a.clone()),
            JostModel::Step { a1, x1 } => Some(step_bold(*a1, x1)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
enum Rule {
    Poly(ExpPoly),
    Zeta { sigma: f64, norm: f64 },
    Critical { mu: f64, norm: Complex64, zeta_half: f64 },
    Smooth,
}

/// A built Jost function: a pointwise rule plus, when available, its closed form.
#[derive(Debug, Clone)]
pub struct JostEval {
    model: JostModel,
    rule: Rule,
}

/// Builds F for a model.
pub fn build_jost(model: JostModel) -> Result<JostEval> {
    model.validate()?;
    let rule = match &model {
        JostModel::TypeI { a } => {
            let two_a = a.scale(Complex64::new(2.0, 0.0));
            Rule::Poly(&(&ExpPoly::one() + &two_a) + &star(a, a))
        }
        JostModel::TypeII { a, b } => {
            let (sab, sba) = (s_func(a, b), s_func(b, a));
            let (saa, sbb) = (s_func(a, a), s_func(b, b));
            let linear = &(&ExpPoly::one() - &sab) + &sba;
            Rule::Poly(&(&linear + &saa.mul(&sbb)) - &sab.mul(&sba))
        }
        JostModel::Step { a1, x1 } => {
            let k = 0.5 * a1 * (2.0 - a1);
            Rule::Poly(ExpPoly::from_terms([
                (PosRational::one(), Complex64::new(1.0 - k, 0.0)),
                (x1.clone(), Complex64::new(k, 0.0)),
            ]))
        }
        JostModel::ZetaSigma { sigma } => Rule::Zeta { sigma: *sigma, norm: zeta_real(*sigma)? },
        JostModel::CriticalTarget { mu } => Rule::Critical {
            mu: *mu,
            norm: Complex64::new(0.0, -0.5) / Complex64::new(0.0, *mu),
            zeta_half: zeta_real(0.5)?,
        },
        JostModel::SmoothAsymptotic => Rule::Smooth,
    };
    Ok(JostEval { model, rule })
}

impl JostEval {
    pub fn model(&self) -> &JostModel {
        &self.model
    }

    /// The Dirichlet polynomial form of F, for type I, type II and step models.
    pub fn closed_form(&self) -> Option<&ExpPoly> {
        match &self.rule {
            Rule::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// F(t) on the real line.
    pub fn eval(&self, t: f64) -> Result<Complex64> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!("Jost argument {t} is not finite")));
        }
        Ok(match &self.rule {
            Rule::Poly(p) => p.eval_real(t),
            Rule::Zeta { sigma, norm } => zeta(Complex64::new(*sigma, -t))? / *norm,
            Rule::Critical { mu, norm, zeta_half } => {
                // written as a ratio to its own value at 0, so F(0) = 1 exactly
                let prefactor = (Complex64::new(t, -0.5) / Complex64::new(t, *mu)) / *norm;
                prefactor * (zeta(Complex64::new(0.5, -t))? / *zeta_half)
            }
            Rule::Smooth => 2.0 * (1.0 + Complex64::from_polar(1.0, 2.0 * rs_theta(t))),
        })
    }

    /// F at complex z, available for the closed-form models.
    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        self.closed_form().map(|p| p.eval(z))
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// max |F(−t) − conj F(t)| over the grid.
    pub reality: f64,
    /// |F(0) − 1|.
    pub regularity: f64,
    /// min Re F over the grid.
    pub min_re: f64,
    /// max |Re F − |1 + 𝐚|²| for type I models.
    pub type_i_identity: Option<f64>,
    /// min Re F(z) over Im z ∈ (0, 5] above the grid, for type I models.
    pub upper_half_plane_min_re: Option<f64>,
}

/// Heights at which the upper half-plane positivity is sampled.
pub const UHP_HEIGHTS: [f64; 6] = [0.01, 0.1, 0.5, 1.0, 2.5, 5.0];

/// Reality, regularity and positivity diagnostics of F on a real grid.
pub fn validate(f: &JostEval, t_grid: &[f64]) -> Result<ValidationReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("validation grid is empty".into()));
    }
    let mut reality: f64 = 0.0;
    let mut min_re = f64::INFINITY;
    for &t in t_grid {
        let (fp, fm) = (f.eval(t)?, f.eval(-t)?);
        reality = reality.max((fm - fp.conj()).norm());
        min_re = min_re.min(fp.re);
    }
    let regularity = (f.eval(0.0)? - 1.0).norm();
    let mut identity = None;
    let mut uhp = None;
    if let (Some(a), Some(closed)) = (f.model.type_i_potential(), f.closed_form()) {
        let one_plus_a = &ExpPoly::one() + &a;
        let mut dev: f64 = 0.0;
        let mut lowest = f64::INFINITY;
        for &t in t_grid {
            dev = dev.max((closed.eval_real(t).re - one_plus_a.eval_real(t).norm_sqr()).abs());
            for y in UHP_HEIGHTS {
                lowest = lowest.min(closed.eval(Complex64::new(t, y)).re);
            }
        }
        identity = Some(dev);
        uhp = Some(lowest);
    }
    Ok(ValidationReport { reality, regularity, min_re, type_i_identity: identity, upper_half_plane_min_re: uhp })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of |F| on [lo, hi].
fn golden_min(f: &JostEval, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let abs = |t: f64| f.eval(t).map(|v| v.norm());
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (abs(x1)?, abs(x2)?);
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = abs(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = abs(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Real zeros of F on (t_lo, t_hi): local minima of |F|² on a uniform scan
/// (default step (t_hi − t_lo)/4096), refined by golden-section search and
/// kept when |F| < 1e−10.
pub fn find_real_zeros(f: &JostEval, t_lo: f64, t_hi: f64, scan_step: Option<f64>) -> Result<Vec<SpectralLine>> {
    if !(t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!("empty window ({t_lo}, {t_hi})")));
    }
    let step = scan_step.unwrap_or((t_hi - t_lo) / 4096.0);
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("scan step must be positive, got {step}")));
    }
    let n = ((t_hi - t_lo) / step).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|k| (t_lo + k as f64 * step).min(t_hi)).collect();
    let mut vals = Vec::with_capacity(ts.len());
    for &t in &ts {
        vals.push(f.eval(t)?.norm_sqr());
    }
    let mut out: Vec<SpectralLine> = Vec::new();
    for k in 1..ts.len().saturating_sub(1) {
        if vals[k] <= vals[k - 1] && vals[k] < vals[k + 1] {
            let (t, r) = golden_min(f, ts[k - 1], ts[k + 1])?;
            if r < ZERO_ACCEPT && t > t_lo && t < t_hi && out.last().is_none_or(|l| t - l.energy > step) {
                out.push(SpectralLine { energy: t, kind: LineKind::Localized, residual: r });
            }
        }
    }
    Ok(out)
}

/// F(E) + F(−E) N^{iE}, zero at the delocalized levels of the box of size N.
pub fn finite_n_residual(f: &JostEval, n: f64, e: f64) -> Result<Complex64> {
    if !(n > 1.0) {
        return Err(Error::InvalidArgument(format!("N must exceed 1, got {n}")));
    }
    Ok(f.eval(e)? + f.eval(-e)? * Complex64::from_polar(1.0, e * n.ln()))
}

/// Scattering phase arg[F(E)/F(−E)] in (−π, π].
pub fn phase_shift(f: &JostEval, e: f64) -> Result<f64> {
    let fp = f.eval(e)?;
    if fp.norm() <= PHASE_ZERO {
        return Err(Error::AtZero { energy: e, modulus: fp.norm() });
    }
    let ratio = fp / f.eval(-e)?;
    let dev = (ratio.norm() - 1.0).abs();
    if dev >= 1e-10 {
        return Err(Error::Consistency { what: "|F(E)/F(-E)| - 1", value: dev, tol: 1e-10 });
    }
    let phase = ratio.arg();
    Ok(if phase <= -PI { PI } else { phase })
}

/// (t, F(t)) on a uniform grid, for Argand plots.
pub fn argand_scan(f: &JostEval, t_lo: f64, t_hi: f64, step: f64) -> Result<Vec<(f64, Complex64)>> {
    if !(step > 0.0) || !(t_lo <= t_hi) {
        return Err(Error::InvalidArgument(format!("bad scan ({t_lo}, {t_hi}, {step})")));
    }
    let n = ((t_hi - t_lo) / step).round() as usize;
    (0..=n)
        .map(|k| {
            let t = t_lo + k as f64 * step;
            f.eval(t).map(|v| (t, v))
        })
        .collect()
}

/// CSV with header `t,re_F,im_F` and 17 significant digits per value.
pub fn argand_csv(rows: &[(f64, Complex64)]) -> String {
    let mut out = String::from("t,re_F,im_F\n");
    for (t, f) in rows {
        out.push_str(&format!("{t:.16e},{:.16e},{:.16e}\n", f.re, f.im));
    }
    out
}
