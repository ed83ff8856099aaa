//! JSON form of [`ExpPoly`]: a list of `{num, den, re, im}` objects.
//!
//! Numerators and denominators are JSON integers when they fit in a `u64`
//! and decimal strings otherwise. Coefficients round-trip bit-exactly.

use std::str::FromStr;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::{ExpPoly, Frequency};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Int {
    Small(u64),
    Big(String),
}

impl Int {
    fn from_big(n: BigUint) -> Self {
        u64::try_from(&n).map(Int::Small).unwrap_or_else(|_| Int::Big(n.to_string()))
    }

    fn to_big(&self) -> std::result::Result<BigUint, String> {
        match self {
            Int::Small(n) => Ok(BigUint::from(*n)),
            Int::Big(s) => BigUint::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    num: Int,
    den: Int,
    re: f64,
    im: f64,
}

impl Serialize for ExpPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .terms()
            .iter()
            .map(|(q, c)| Term {
                num: Int::from_big(q.numer()),
                den: Int::from_big(q.denom()),
                re: c.re,
                im: c.im,
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let num = t.num.to_big().map_err(de::Error::custom)?;
            let den = t.den.to_big().map_err(de::Error::custom)?;
            let q = Frequency::from_big(num, den).map_err(de::Error::custom)?;
            out.push((q, Complex64::new(t.re, t.im)));
        }
        Ok(ExpPoly::from_terms(out))
    }
}

pub fn to_json(p: &ExpPoly) -> String {
    serde_json::to_string(p).expect("ExpPoly serialization cannot fail")
}

pub fn from_json(s: &str) -> Result<ExpPoly> {
    serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad ExpPoly JSON: {e}")))
}
