//! Catalan numbers.

use num_bigint::BigUint;

/// C_n = binomial(2n, n)/(n + 1), exactly.
pub fn catalan(n: u32) -> BigUint {
    let mut c = BigUint::from(1u32);
    for k in 0..n as u64 {
        // C_{k+1} = C_k · 2(2k + 1)/(k + 2), always exact
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}
