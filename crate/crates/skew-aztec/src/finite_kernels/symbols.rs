use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

/// A transition between lines `s1 ≤ s2` of a domain with weight `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolParams {
    pub a: f64,
    pub s1: i64,
    pub s2: i64,
}

impl SymbolParams {
    pub fn new(spec: &DomainSpec, s1: i64, s2: i64) -> Result<Self> {
        let top = 2 * spec.n + 1;
        if s1 < 0 || s2 > top || s1 > s2 {
            return Err(Error::OutOfRange(format!("transition lines ({s1}, {s2}) outside 0 ≤ s1 ≤ s2 ≤ {top}")));
        }
        Ok(SymbolParams { a: spec.a, s1, s2 })
    }
}

/// Exponents `(p, q)` of `φ_{s1,s2}(ζ) = (1 + aζ)^p / (1 − a/ζ)^q`.
pub fn phi_hat_exponents(s1: i64, s2: i64) -> (i64, i64) {
    let p = s2.div_euclid(2) - s1.div_euclid(2);
    let q = (s2 - s2.div_euclid(2)) - (s1 - s1.div_euclid(2));
    (p, q)
}

/// The transition symbol `φ_{s1,s2}(ζ)`, valid for `|ζ| > a`.
pub fn phi(sp: &SymbolParams, zeta: C64) -> C64 {
    let (p, q) = phi_hat_exponents(sp.s1, sp.s2);
    (1.0 + sp.a * zeta).powi(p as i32) / (1.0 - sp.a / zeta).powi(q as i32)
}

/// `ln C(n, k)` for `0 ≤ k ≤ n`.
pub fn ln_binomial(n: i64, k: i64) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// Coefficient of `ζ^(u2−u1)` in `φ_{s1,s2}`, by finite binomial convolution.
pub fn phi_hat(sp: &SymbolParams, u1: i64, u2: i64) -> f64 {
    let (p, q) = phi_hat_exponents(sp.s1, sp.s2);
    let k = u2 - u1;
    let la = sp.a.ln();
    let mut total = 0.0;
    for i in k.max(0)..=p {
        let j = i - k;
        if q == 0 {
            if j == 0 {
                total += (ln_binomial(p, i) + i as f64 * la).exp();
            }
            continue;
        }
        total += (ln_binomial(p, i) + ln_binomial(q - 1 + j, j) + (i + j) as f64 * la).exp();
    }
    total
}
