//! Closed-form spectra: semiclassical counting, the finite-box xp levels, the
//! Russian-Doll eigencondition, smooth zeros and a Z(t) sign-change scanner.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{rs_theta, rs_z};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    Localized,
    Delocalized,
    ResonanceCandidate,
}

impl LineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LineKind::Localized => "localized",
            LineKind::Delocalized => "delocalized",
            LineKind::ResonanceCandidate => "resonance_candidate",
        }
    }
}

/// One energy level with its classification and the residual of the
/// condition that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub energy: f64,
    pub kind: LineKind,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingVariant {
    /// (E/2π)(log(E/2π) − 1) + 1.
    BerryKeating,
    /// (E/π) log Λ − (E/2π)(log(E/2π) − 1).
    Connes,
    /// (E/2π) log(Λ/l_x).
    Box,
}

/// Semiclassical number of levels below E.
pub fn counting(variant: CountingVariant, e: f64, lambda: Option<f64>, l_x: Option<f64>) -> Result<f64> {
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::InvalidArgument(format!("counting needs E > 0, got {e}")));
    }
    let smooth = e / (2.0 * PI) * ((e / (2.0 * PI)).ln() - 1.0);
    let need = |v: Option<f64>, name: &str| {
        v.filter(|x| *x > 0.0 && x.is_finite())
            .ok_or_else(|| Error::InvalidArgument(format!("{variant:?} counting needs a positive {name}")))
    };
    match variant {
        CountingVariant::BerryKeating => Ok(smooth + 1.0),
        CountingVariant::Connes => Ok(e / PI * need(lambda, "lambda")?.ln() - smooth),
        CountingVariant::Box => Ok(e / (2.0 * PI) * (need(lambda, "lambda")? / need(l_x, "l_x")?).ln()),
    }
}

/// Box size N (with l_x = 1) and self-adjoint extension angle α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: f64,
    pub alpha: f64,
}

/// E_n = (2π/log N)(n + α/2π) for n in [n_lo, n_hi]; the residual is
/// |N^{iE} − e^{iα}|.
pub fn xp_eigenvalues(params: &ModelParams, n_lo: i64, n_hi: i64) -> Result<Vec<SpectralLine>> {
    if !(params.n > 1.0) || !params.alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("need N > 1 and finite alpha, got {params:?}")));
    }
    if n_lo > n_hi {
        return Err(Error::InvalidArgument(format!("empty level range [{n_lo}, {n_hi}]")));
    }
    let log_n = params.n.ln();
    let target = Complex64::from_polar(1.0, params.alpha);
    Ok((n_lo..=n_hi)
        .map(|n| {
            let energy = 2.0 * PI / log_n * (n as f64 + params.alpha / (2.0 * PI));
            let residual = (Complex64::from_polar(1.0, energy * log_n) - target).norm();
            SpectralLine { energy, kind: LineKind::Delocalized, residual }
        })
        .collect())
}

/// Couplings of the one-body Russian-Doll model on the band 1 < x < N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RdParams {
    pub g: f64,
    pub h: f64,
    pub n: f64,
}

/// A Russian-Doll level with the index k of the 2πk branch it solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RdRoot {
    pub energy: f64,
    pub branch: i64,
}

/// Distance kept from the band edges 1 and N.
pub const RD_EDGE_MARGIN: f64 = 1e-9;

/// φ(E) = h log((N − E)/(1 − E)) − 2 atan2(h, g); levels solve φ(E) = 2πk.
pub fn rd_phase(params: &RdParams, e: f64) -> f64 {
    params.h * ((params.n - e) / (1.0 - e)).ln() - 2.0 * params.h.atan2(params.g)
}

/// Roots of ((N − E)/(1 − E))^{ih} = (g + ih)/(g − ih) in the window, outside
/// the band [1, N]. The phase is increasing on each side of the band, so
/// every branch crossing is bracketed and bisected.
pub fn rd_solve(params: &RdParams, window: (f64, f64)) -> Result<Vec<RdRoot>> {
    if params.h == 0.0 || !params.h.is_finite() || !params.g.is_finite() || !(params.n > 1.0) {
        return Err(Error::InvalidArgument(format!("need h != 0 and N > 1, got {params:?}")));
    }
    let (lo, hi) = window;
    let pieces = [(lo, hi.min(1.0 - RD_EDGE_MARGIN)), (lo.max(params.n + RD_EDGE_MARGIN), hi)];
    let mut roots = Vec::new();
    let mut any = false;
    for (a, b) in pieces {
        if !(a < b) {
            continue;
        }
        any = true;
        let (pa, pb) = (rd_phase(params, a), rd_phase(params, b));
        let (kmin, kmax) = if pa <= pb { (pa, pb) } else { (pb, pa) };
        let k_lo = (kmin / (2.0 * PI)).ceil() as i64;
        let k_hi = (kmax / (2.0 * PI)).floor() as i64;
        for k in k_lo..=k_hi {
            let target = 2.0 * PI * k as f64;
            let f = |e: f64| rd_phase(params, e) - target;
            let (mut x0, mut x1) = (a, b);
            let f0 = f(x0);
            if f0 == 0.0 {
                roots.push(RdRoot { energy: x0, branch: k });
                continue;
            }
            for _ in 0..2200 {
                let mid = 0.5 * (x0 + x1);
                if mid == x0 || mid == x1 {
                    break;
                }
                if f(mid).signum() == f0.signum() {
                    x0 = mid;
                } else {
                    x1 = mid;
                }
            }
            roots.push(RdRoot { energy: 0.5 * (x0 + x1), branch: k });
        }
    }
    if !any {
        return Err(Error::InvalidArgument(format!("window {window:?} lies inside the band [1, {}]", params.n)));
    }
    roots.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(roots)
}

/// Solves θ(E) = (n − 1/2)π, i.e. 1 + e^{2iθ(E)} = 0.
pub fn smooth_zero(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("smooth zeros are indexed from 1".into()));
    }
    let target = (n as f64 - 0.5) * PI;
    // asymptotic θ ≈ πe·u log u − π/8 with u = E/(2πe)
    let c = (target + PI / 8.0) / (PI * E);
    let mut u: f64 = (1.0 + c).max(1.5);
    for _ in 0..50 {
        u -= (u * u.ln() - c) / (u.ln() + 1.0);
    }
    let mut e = 2.0 * PI * E * u;
    let mut dev = f64::INFINITY;
    for _ in 0..100 {
        dev = rs_theta(e) - target;
        if dev.abs() < 1e-12 {
            return Ok(e);
        }
        let slope = 0.5 * (e / (2.0 * PI)).ln();
        e -= dev / slope;
    }
    Err(Error::NoConvergence { iterations: 100, residual: dev.abs() })
}

/// Zeros of Z(t) found by sign changes on a uniform scan, with any warnings
/// about zeros the scan may have stepped over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroScan {
    pub zeros: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Bisection tolerance of the scanner.
pub const ZSCAN_TOL: f64 = 1e-12;

pub fn zscan_true_zeros(t_lo: f64, t_hi: f64, step: f64) -> Result<ZeroScan> {
    if !(t_lo >= 0.0 && t_lo < t_hi && step > 0.0) {
        return Err(Error::InvalidArgument(format!("bad scan ({t_lo}, {t_hi}, {step})")));
    }
    let n = ((t_hi - t_lo) / step).ceil() as usize;
    let mut zeros = Vec::new();
    let mut prev_t = t_lo;
    let mut prev = rs_z(prev_t)?;
    for k in 1..=n {
        let t = (t_lo + k as f64 * step).min(t_hi);
        let z = rs_z(t)?;
        if z == 0.0 {
            zeros.push(t);
        } else if prev != 0.0 && prev.signum() != z.signum() {
            let (mut a, mut b, fa) = (prev_t, t, prev);
            while b - a > ZSCAN_TOL * (1.0 + a) {
                let m = 0.5 * (a + b);
                let fm = rs_z(m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        prev_t = t;
        prev = z;
    }
    let mut warnings = Vec::new();
    if zeros.windows(2).any(|w| w[1] - w[0] < 2.0 * step) {
        warnings.push(format!("zeros closer than twice the step {step}; neighbours may be missing"));
    }
    // θ(t)/π + 1 tracks the zero count; a deficit of two means a skipped pair
    if t_hi > 2.0 * PI {
        let expected = (rs_theta(t_hi) - rs_theta(t_lo.max(2.0 * PI))) / PI;
        if (zeros.len() as f64) < expected - 2.0 {
            warnings.push(format!(
                "found {} zeros where about {expected:.1} are expected; the step may be too coarse",
                zeros.len()
            ));
        }
    }
    Ok(ZeroScan { zeros, warnings })
}
