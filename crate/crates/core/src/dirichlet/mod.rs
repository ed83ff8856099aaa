//! Generalized Dirichlet polynomials Σ c_k q_k^{it} with exact rational
//! frequencies, and the ⋆-product.
//!
//! On a single pair of basis functions the ⋆-product reduces to
//! `q1^{it} ⋆ q2^{it} = w · (q1/q2)^{it}` with weight `w` equal to 2, 1 or 0
//! when `q1/q2` is above, equal to, or below one. This is the Hilbert
//! projection of `f(t) g(−t)` onto the functions analytic in the upper
//! half-plane; [`pv`] checks it against direct principal-value quadrature.

pub mod json;
pub mod pv;

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::rational::PosRational;

/// Exact positive rational q standing for the basis function q^{it}.
pub type Frequency = PosRational;

/// A finite sum Σ c_k q_k^{it}, kept sorted by frequency without zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<(Frequency, Complex64)>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(Frequency::one(), c)
    }

    pub fn monomial(q: Frequency, c: Complex64) -> Self {
        Self::from_terms([(q, c)])
    }

    /// Builds a polynomial, merging equal frequencies and dropping exact zeros.
    pub fn from_terms<I: IntoIterator<Item = (Frequency, Complex64)>>(terms: I) -> Self {
        let mut acc: FxHashMap<Frequency, Complex64> = FxHashMap::default();
        for (q, c) in terms {
            *acc.entry(q).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Frequency, Complex64>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        ExpPoly { terms }
    }

    pub fn terms(&self) -> &[(Frequency, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, q: &Frequency) -> Complex64 {
        self.terms
            .binary_search_by(|(p, _)| p.cmp(q))
            .map(|i| self.terms[i].1)
            .unwrap_or_default()
    }

    /// Σ c_k q_k^{iz} for complex z. For Im z < 0 this is the analytic
    /// continuation; use [`ExpPoly::is_analytic`] to see whether it is bounded there.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let iz = Complex64::new(-z.im, z.re);
        self.terms.iter().map(|(q, c)| c * (iz * q.ln()).exp()).sum()
    }

    /// Value on the real line.
    pub fn eval_real(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|(q, c)| c * Complex64::from_polar(1.0, t * q.ln())).sum()
    }

    /// Values on many real points, computing each log q once.
    pub fn eval_grid(&self, ts: &[f64]) -> Vec<Complex64> {
        let logs: Vec<(f64, Complex64)> = self.terms.iter().map(|(q, c)| (q.ln(), *c)).collect();
        ts.iter()
            .map(|&t| logs.iter().map(|&(l, c)| c * Complex64::from_polar(1.0, t * l)).sum())
            .collect()
    }

    /// Value at t = 0, the plain sum of coefficients.
    pub fn at_zero(&self) -> Complex64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Σ |c_k|.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// All frequencies are ≥ 1, so the polynomial is bounded in the upper half-plane.
    pub fn is_analytic(&self) -> bool {
        self.terms.first().is_none_or(|(q, _)| *q >= Frequency::one())
    }

    /// Reality p(−t) = conj p(t) on the real line, which holds exactly when
    /// every coefficient is real.
    pub fn is_real_symmetric(&self, tol: f64) -> bool {
        self.terms.iter().all(|(_, c)| c.im.abs() <= tol)
    }

    /// |p(0)| ≤ tol.
    pub fn vanishes_at_zero(&self, tol: f64) -> bool {
        self.at_zero().norm() <= tol
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        ExpPoly { terms: self.terms.iter().map(|(q, c)| (q.clone(), c * s)).collect() }
    }

    /// The function z ↦ p(−z): frequencies inverted, coefficients unchanged.
    pub fn reflect(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(q, c)| (q.recip(), *c)))
    }

    /// The function t ↦ conj p(t) for real t: frequencies inverted and
    /// coefficients conjugated. Equal to [`ExpPoly::reflect`] for real coefficients.
    pub fn conj_reflect(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(q, c)| (q.recip(), c.conj())))
    }

    /// Ordinary pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: FxHashMap<Frequency, Complex64> = FxHashMap::default();
        for (q1, c1) in &self.terms {
            for (q2, c2) in &other.terms {
                *acc.entry(q1.mul(q2)).or_default() += c1 * c2;
            }
        }
        Self::from_map(acc)
    }

    /// Largest coefficient-wise distance, matching frequencies exactly.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs_coeff()
    }
}

/// The ⋆-product: the upper-half-plane analytic part of f(t) g(−t), with the
/// zero frequency counted once and positive frequencies twice.
pub fn star(f: &ExpPoly, g: &ExpPoly) -> ExpPoly {
    star_screened(f, g, 0.0)
}

/// [`star`] that skips every product with 2|c₁c₂| < `min_product`.
/// With `min_product = 0` the result is exact.
pub(crate) fn star_screened(f: &ExpPoly, g: &ExpPoly, min_product: f64) -> ExpPoly {
    if let Some(p) = star_small(f, g, min_product) {
        return p;
    }
    fn by_size(p: &ExpPoly) -> Vec<(&Frequency, Complex64, f64)> {
        let mut v: Vec<(&Frequency, Complex64, f64)> = p.terms.iter().map(|(q, c)| (q, *c, c.norm())).collect();
        v.sort_by(|x, y| y.2.total_cmp(&x.2).then_with(|| x.0.cmp(y.0)));
        v
    }
    let (fs, gs) = (by_size(f), by_size(g));
    let mut acc: FxHashMap<Frequency, Complex64> = FxHashMap::default();
    for &(q1, c1, s1) in &fs {
        for &(q2, c2, s2) in &gs {
            if 2.0 * s1 * s2 < min_product {
                break;
            }
            match q1.cmp(q2) {
                Ordering::Greater => *acc.entry(q1.div(q2)).or_default() += 2.0 * c1 * c2,
                Ordering::Equal => *acc.entry(Frequency::one()).or_default() += c1 * c2,
                Ordering::Less => {}
            }
        }
    }
    ExpPoly::from_map(acc)
}

/// Fast path of [`star_screened`] when every numerator and denominator is
/// below 2^32: ratios are reduced in machine integers and keyed as num·2^32 + den.
fn star_small(f: &ExpPoly, g: &ExpPoly, min_product: f64) -> Option<ExpPoly> {
    const LIMIT: u64 = 1 << 32;
    let small = |p: &ExpPoly| -> Option<Vec<(u64, u64, Complex64, f64)>> {
        let mut v = Vec::with_capacity(p.len());
        for (q, c) in &p.terms {
            let (n, d) = q.as_small()?;
            if n >= LIMIT || d >= LIMIT {
                return None;
            }
            v.push((n, d, *c, c.norm()));
        }
        if min_product > 0.0 {
            v.sort_by(|x, y| y.3.total_cmp(&x.3).then_with(|| (x.0 * y.1).cmp(&(y.0 * x.1))));
        }
        Some(v)
    };
    let (fs, gs) = (small(f)?, small(g)?);
    let mut acc: FxHashMap<u64, Complex64> = FxHashMap::default();
    let mut spill: Vec<(Frequency, Complex64)> = Vec::new();
    for &(n1, d1, c1, s1) in &fs {
        for &(n2, d2, c2, s2) in &gs {
            if 2.0 * s1 * s2 < min_product {
                break;
            }
            // q1/q2 = n1 d2 / (d1 n2); both products fit in u64
            let (num, den) = (n1 * d2, d1 * n2);
            match num.cmp(&den) {
                Ordering::Greater => {
                    let k = num_integer::gcd(num, den);
                    let (num, den) = (num / k, den / k);
                    if num < LIMIT {
                        *acc.entry(num << 32 | den).or_default() += 2.0 * c1 * c2;
                    } else {
                        spill.push((Frequency::new(num, den).ok()?, 2.0 * c1 * c2));
                    }
                }
                Ordering::Equal => *acc.entry(1 << 32 | 1).or_default() += c1 * c2,
                Ordering::Less => {}
            }
        }
    }
    let mut out: FxHashMap<Frequency, Complex64> = FxHashMap::default();
    out.reserve(acc.len());
    for (key, c) in acc {
        out.insert(Frequency::new(key >> 32, key & (LIMIT - 1)).ok()?, c);
    }
    for (q, c) in spill {
        *out.entry(q).or_default() += c;
    }
    Some(ExpPoly::from_map(out))
}

/// S_{f,g}(z) = (f⋆g)(z) − (f⋆g)(0), so that S_{f,g}(0) = 0.
pub fn s_func(f: &ExpPoly, g: &ExpPoly) -> ExpPoly {
    let p = star(f, g);
    let shift = p.at_zero();
    &p - &ExpPoly::constant(shift)
}

/// Drops coefficients below `coeff_floor` and frequencies outside
/// `[1/max_frequency, max_frequency]`. The only lossy operation on [`ExpPoly`].
pub fn prune(p: &ExpPoly, coeff_floor: f64, max_frequency: &Frequency) -> ExpPoly {
    let lo = max_frequency.recip();
    ExpPoly {
        terms: p
            .terms
            .iter()
            .filter(|(q, c)| c.norm() >= coeff_floor && q <= max_frequency && *q >= lo)
            .cloned()
            .collect(),
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly { terms: self.terms.iter().map(|(q, c)| (q.clone(), -c)).collect() }
    }
}

impl Mul<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::mul(self, rhs)
    }
}
