//! Exact positive rationals.
//!
//! Values are kept in lowest terms. Anything whose numerator and denominator
//! fit in a `u64` is stored inline; larger values spill to `BigUint`. The
//! representation is canonical, so derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(u64, u64),
    Big(Box<(BigUint, BigUint)>),
}

/// A strictly positive rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PosRational(Repr);

impl PosRational {
    pub fn one() -> Self {
        PosRational(Repr::Small(1, 1))
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidArgument(format!(
                "positive rational needs non-zero parts, got {num}/{den}"
            )));
        }
        let g = num.gcd(&den);
        Ok(PosRational(Repr::Small(num / g, den / g)))
    }

    pub fn from_big(num: BigUint, den: BigUint) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::InvalidArgument(
                "positive rational needs non-zero parts".into(),
            ));
        }
        Ok(Self::normalized_big(num, den))
    }

    fn normalized_big(num: BigUint, den: BigUint) -> Self {
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num / &g, den / &g) };
        match (num.to_u64(), den.to_u64()) {
            (Some(n), Some(d)) => PosRational(Repr::Small(n, d)),
            _ => PosRational(Repr::Big(Box::new((num, den)))),
        }
    }

    pub fn numer(&self) -> BigUint {
        match &self.0 {
            Repr::Small(n, _) => BigUint::from(*n),
            Repr::Big(b) => b.0.clone(),
        }
    }

    pub fn denom(&self) -> BigUint {
        match &self.0 {
            Repr::Small(_, d) => BigUint::from(*d),
            Repr::Big(b) => b.1.clone(),
        }
    }

    /// Numerator and denominator when both fit in a `u64`.
    pub fn as_small(&self) -> Option<(u64, u64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => PosRational(Repr::Small(*d, *n)),
            Repr::Big(b) => PosRational(Repr::Big(Box::new((b.1.clone(), b.0.clone())))),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &other.0) {
            let g1 = n1.gcd(d2);
            let g2 = n2.gcd(d1);
            let num = (n1 / g1).checked_mul(n2 / g2);
            let den = (d1 / g2).checked_mul(d2 / g1);
            if let (Some(num), Some(den)) = (num, den) {
                return PosRational(Repr::Small(num, den));
            }
        }
        Self::normalized_big(self.numer() * other.numer(), self.denom() * other.denom())
    }

    pub fn div(&self, other: &Self) -> Self {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &other.0) {
            let g1 = n1.gcd(n2);
            let g2 = d1.gcd(d2);
            let num = (n1 / g1).checked_mul(d2 / g2);
            let den = (d1 / g2).checked_mul(n2 / g1);
            if let (Some(num), Some(den)) = (num, den) {
                return PosRational(Repr::Small(num, den));
            }
        }
        Self::normalized_big(self.numer() * other.denom(), self.denom() * other.numer())
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(_) => self.ln().exp(),
        }
    }

    /// Natural logarithm, accurate also when the value is close to one.
    pub fn ln(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => match n.cmp(d) {
                Ordering::Equal => 0.0,
                Ordering::Greater => ((n - d) as f64 / *d as f64).ln_1p(),
                Ordering::Less => -((d - n) as f64 / *n as f64).ln_1p(),
            },
            Repr::Big(b) => big_ln(&b.0) - big_ln(&b.1),
        }
    }

    /// Exact conversion of a finite positive decimal, e.g. `2.5` becomes `5/2`.
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a positive rational: {s:?}"));
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let digits: String = format!("{int}{frac}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num = BigUint::from_str(&digits).map_err(|_| bad())?;
        let den = BigUint::from(10u32).pow(frac.len() as u32);
        Self::from_big(num, den)
    }
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl Ord for PosRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
                (*n1 as u128 * *d2 as u128).cmp(&(*n2 as u128 * *d1 as u128))
            }
            _ => (self.numer() * other.denom()).cmp(&(other.numer() * self.denom())),
        }
    }
}

impl PartialOrd for PosRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl fmt::Debug for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PosRational {
    type Err = Error;

    /// Accepts `p`, `p/q` and plain decimals such as `2.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let bad = || Error::InvalidArgument(format!("not a positive rational: {s:?}"));
                let n = BigUint::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigUint::from_str(d.trim()).map_err(|_| bad())?;
                Self::from_big(n, d)
            }
            None => Self::from_decimal_str(s),
        }
    }
}

impl serde::Serialize for PosRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PosRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
