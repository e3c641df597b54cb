use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::det_from_fn;

use super::symbols::{phi_hat, SymbolParams};

/// Both sides of an identity and their relative residual `|lhs − rhs| / max(1, |lhs|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub residual: f64,
}

impl IdentityResidual {
    pub fn new(name: String, lhs: C64, rhs: C64) -> Self {
        IdentityResidual {
            name,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            residual: (lhs - rhs).norm() / lhs.norm().max(1.0),
        }
    }
}

/// Which side of the winding the blow-up removes: `ζ^κ` or `ζ^−κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupSide {
    Plus,
    Minus,
}

/// Laurent coefficients `f̂_k`, `kmin ≤ k ≤ kmax`, from the trapezoidal rule on `|ζ| = radius`.
pub fn fourier_coefficients(
    f: impl Fn(C64) -> C64,
    radius: f64,
    nodes: usize,
    kmin: i64,
    kmax: i64,
) -> Vec<C64> {
    let samples: Vec<(f64, C64)> = (0..nodes)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / nodes as f64;
            (th, f(C64::from_polar(radius, th)))
        })
        .collect();
    (kmin..=kmax)
        .map(|k| {
            let s: C64 = samples
                .iter()
                .map(|&(th, v)| v * C64::from_polar(1.0, -(k as f64) * th))
                .sum();
            s / nodes as f64 * radius.powi(-(k as i32))
        })
        .collect()
}

/// `D_p = det(ĉ_{i−j})_{0 ≤ i, j < p}` for a coefficient function.
pub fn toeplitz_det_from_coeffs(coeff: impl Fn(i64) -> C64, p: usize) -> C64 {
    det_from_fn(p, |i, j| coeff(i as i64 - j as i64))
}

/// Toeplitz determinant of a symbol analytic near `|ζ| = radius`.
pub fn toeplitz_det(f: impl Fn(C64) -> C64, p: usize, radius: f64, nodes: usize) -> Result<C64> {
    if p > 12 {
        return Err(Error::Unsupported(format!("Toeplitz size {p} exceeds 12")));
    }
    let pi = p as i64;
    let c = fourier_coefficients(f, radius, nodes, -pi, pi);
    Ok(toeplitz_det_from_coeffs(|k| c[(k + pi) as usize], p))
}

fn full_symbol_coeff(n: i64, a: f64) -> impl Fn(i64) -> f64 {
    let sp = SymbolParams { a, s1: 0, s2: 2 * n + 1 };
    move |k| phi_hat(&sp, 0, k)
}

/// `det(1 − K)` on `ℓ²(≥ p)` where `K_kℓ = Σ_j ĉ_{−(ℓ+j+1)} b̂_{k+j+1}` and `c` has
/// no Laurent terms below `ζ^−(n+1)`, so only the block `p..=n` matters.
fn bo_fredholm(n: i64, p: i64, c_neg: impl Fn(i64) -> C64, b_pos: impl Fn(i64) -> C64) -> C64 {
    if p > n {
        return C64::new(1.0, 0.0);
    }
    let size = (n - p + 1) as usize;
    det_from_fn(size, |i, j| {
        let k = p + i as i64;
        let l = p + j as i64;
        let kij: C64 = (0..=(n - l)).map(|jj| c_neg(l + jj + 1) * b_pos(k + jj + 1)).sum();
        let d = if i == j { 1.0 } else { 0.0 };
        d - kij
    })
}

/// Borodin–Okounkov at zero winding: `D_p[φ_{0,2n+1}] = (1 + a²)^{n(n+1)} det(1 − K)_{ℓ²(≥p)}`.
pub fn bo_check(n: i64, a: f64, p: usize) -> Result<IdentityResidual> {
    if !(a > 0.0 && a < 1.0) || n < 1 {
        return Err(Error::Domain(format!("Borodin–Okounkov check needs n ≥ 1 and 0 < a < 1 (got n = {n}, a = {a})")));
    }
    let fhat = full_symbol_coeff(n, a);
    let lhs = toeplitz_det_from_coeffs(|k| fhat(k).into(), p);
    let nodes = 1024;
    let rho = |u: C64| (1.0 + a * u).powi(n as i32) * (1.0 - a / u).powi(n as i32 + 1);
    let cn = fourier_coefficients(rho, 1.0, nodes, -(n + 1), 0);
    let bp = fourier_coefficients(|u| 1.0 / rho(u), 1.0, nodes, 0, 2 * n + 2);
    let det = bo_fredholm(
        n,
        p as i64,
        |m| cn[(n + 1 - m) as usize],
        |m| bp[m as usize],
    );
    let ga = (1.0 + a * a).powf((n * (n + 1)) as f64);
    Ok(IdentityResidual::new(format!("bo n={n} a={a} p={p}"), lhs, ga * det))
}

/// Multi-index iteration over `κ` trapezoid grids of `nodes` points each.
fn for_each_grid(kappa: usize, nodes: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; kappa];
    loop {
        f(&idx);
        let mut d = 0;
        loop {
            if d == kappa {
                return;
            }
            idx[d] += 1;
            if idx[d] < nodes {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Blow-up of a winding symbol: `D_p[ζ^{±κ} f] = (−1)^{κp} ∮…∮ ∏ λⱼ^p dλⱼ/(2πiλⱼ) D_p[p_λ(ζ^{±1}) f]`
/// with `p_λ(ζ) = ∏ (1 − ζ/λⱼ)` and `f = φ_{0,2n+1}`.
pub fn blowup_check(n: i64, a: f64, kappa: usize, p: usize, side: BlowupSide) -> Result<IdentityResidual> {
    if kappa == 0 || kappa > 3 || p > 12 {
        return Err(Error::Unsupported(format!("blow-up check supports 1 ≤ κ ≤ 3 and p ≤ 12 (got κ = {kappa}, p = {p})")));
    }
    let fhat = full_symbol_coeff(n, a);
    let shift = match side {
        BlowupSide::Plus => kappa as i64,
        BlowupSide::Minus => -(kappa as i64),
    };
    let lhs = toeplitz_det_from_coeffs(|k| fhat(k - shift).into(), p);
    let nodes = (2 * p + 4).max(16);
    let radius = 1.0;
    let lam: Vec<C64> = (0..nodes)
        .map(|j| C64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64))
        .collect();
    let mut total = C64::new(0.0, 0.0);
    for_each_grid(kappa, nodes, |idx| {
        // polynomial coefficients of ∏ (1 − ζ/λⱼ)
        let mut poly = vec![C64::new(1.0, 0.0)];
        let mut weight = C64::new(1.0, 0.0);
        for &i in idx {
            let l = lam[i];
            let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k] += c;
                next[k + 1] -= c / l;
            }
            poly = next;
            weight *= l.powi(p as i32) / nodes as f64;
        }
        let coeff = |m: i64| -> C64 {
            poly.iter()
                .enumerate()
                .map(|(k, c)| match side {
                    BlowupSide::Plus => c * fhat(m - k as i64),
                    BlowupSide::Minus => c * fhat(m + k as i64),
                })
                .sum()
        };
        total += weight * toeplitz_det_from_coeffs(coeff, p);
    });
    let sign = if (kappa * p).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(IdentityResidual::new(
        format!("blowup n={n} a={a} kappa={kappa} p={p} side={side:?}"),
        lhs,
        sign * total,
    ))
}

/// `D_M[ψ_{0,2n+1}] = (−1)^{κM} ∮_{|λ|=R} g_a (λ − a)^{n+1} λ^{−𝔯−1} det(1 − K^{(λ)})_{ℓ²(≥M)} dλ/(2πi)`
/// for winding `κ = m − n = 1`, with `ψ̂_k = φ̂_{k−κ}` and `𝔯 = n − M + 1`.
pub fn dphi_check(n: i64, m: i64, big_m: i64, a: f64) -> Result<IdentityResidual> {
    let kappa = m - n;
    if kappa != 1 {
        return Err(Error::Unsupported(format!("the D_M identity is implemented for κ = 1 (got κ = {kappa})")));
    }
    if !(a > 0.0 && a < 0.75) || big_m < 1 || big_m > n {
        return Err(Error::Domain(format!("need 0 < a < 0.75 and 1 ≤ M ≤ n (got a = {a}, M = {big_m})")));
    }
    let fhat = full_symbol_coeff(n, a);
    let lhs = toeplitz_det_from_coeffs(|k| fhat(k - kappa).into(), big_m as usize);
    let r = n - big_m + 1;
    let big_r = 1.0;
    let v_radius = 0.75;
    let lam_nodes = 128;
    let dft_nodes = 1024;
    let ga = (1.0 + a * a).powf((n * (n + 1)) as f64);
    let rho = move |u: C64| (1.0 + a * u).powi(n as i32) * (1.0 - a / u).powi(n as i32 + 1);
    let mut total = C64::new(0.0, 0.0);
    for j in 0..lam_nodes {
        let lam = C64::from_polar(big_r, 2.0 * PI * j as f64 / lam_nodes as f64);
        let rho_l = |u: C64| rho(u) * (1.0 - u / lam);
        let cn = fourier_coefficients(rho_l, 1.0, dft_nodes, -(n + 1), 0);
        let bp = fourier_coefficients(|u| 1.0 / rho_l(u), v_radius, dft_nodes, 0, 2 * n + 2);
        let det = bo_fredholm(n, big_m, |k| cn[(n + 1 - k) as usize], |k| bp[k as usize]);
        // dλ/(2πi) = λ dθ/(2π)
        let measure = ga * (lam - a).powi(n as i32 + 1) / lam.powi(r as i32 + 1) * lam / lam_nodes as f64;
        total += measure * det;
    }
    let sign = if (kappa * big_m) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(IdentityResidual::new(
        format!("dphi n={n} m={m} M={big_m} a={a}"),
        lhs,
        sign * total,
    ))
}
