use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{sum_nodes, ContourSpec, QuadResult, QuadratureConfig};

use super::tacnode::{heaviside, Tacnode, TacnodeParams, TacnodePoint};

/// Discretization of the Airy-like contour and of the `λ`-integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AiryConfig {
    /// Gauss–Legendre nodes on the two rays together.
    pub ray_nodes: usize,
    /// Least distance of the contour vertex left of `0` when `τ < 0`.
    pub vertex: f64,
    /// Gauss–Legendre nodes per unit length of the `λ`-integral.
    pub lambda_nodes_per_unit: usize,
    /// Integrand bound used to truncate the `λ`-integral.
    pub lambda_tol: f64,
}

impl Default for AiryConfig {
    fn default() -> Self {
        AiryConfig {
            ray_nodes: 256,
            vertex: 1.0,
            lambda_nodes_per_unit: 16,
            lambda_tol: 1e-12,
        }
    }
}

impl AiryConfig {
    pub fn refined(&self) -> Self {
        AiryConfig {
            ray_nodes: self.ray_nodes * 2,
            lambda_nodes_per_unit: self.lambda_nodes_per_unit * 2,
            ..*self
        }
    }
}

/// `A_τ(u) = ∫ z^τ e^{−z³/3 + uz} dz/(2πi)` from `∞e^{4πi/3}` to `∞e^{2πi/3}`, passing
/// right of `0`. `A_0` is the Airy function.
///
/// The rays meet on the negative axis, at the saddle `−√u` when `u > 0`. For `τ < 0`
/// the vertex lies at least `cfg.vertex` left of the pole and the residue at `0` is added.
pub fn airy_like(tau: i64, u: f64, cfg: &AiryConfig) -> Result<f64> {
    let saddle = u.max(0.0).sqrt();
    let vertex = if tau >= 0 { -saddle } else { -cfg.vertex.max(saddle) };
    let length = 8.0 + 2.0 * u.abs().sqrt() + vertex.abs();
    let contour = ContourSpec::airy_rays(vertex, length, cfg.ray_nodes);
    contour.validate()?;
    let v = sum_nodes(&contour.discretize(), |z| z.powi(tau as i32) * (-z * z * z / 3.0 + u * z).exp())?;
    let residue = if tau < 0 { airy_residue(-tau, u) } else { 0.0 };
    Ok(v.re + residue)
}

/// Residue of `z^{−k} e^{−z³/3 + uz}` at `0`: the coefficient of `z^{k−1}`, which is
/// `Σ_{a + 3b = k−1} u^a/a! · (−1/3)^b/b!`.
fn airy_residue(k: i64, u: f64) -> f64 {
    let top = k - 1;
    let mut total = 0.0;
    let mut b = 0;
    while 3 * b <= top {
        let a = top - 3 * b;
        let ua: f64 = (1..=a).fold(1.0, |acc, i| acc * u / i as f64);
        let cb: f64 = (1..=b).fold(1.0, |acc, i| acc * (-1.0 / 3.0) / i as f64);
        total += ua * cb;
        b += 1;
    }
    total
}

fn check_quadrant(t1: i64, t2: i64) -> Result<()> {
    if t1 >= 0 && t2 < 0 {
        return Err(Error::Unsupported(format!(
            "cusp-Airy kernel is not available for τ₁ ≥ 0 and τ₂ < 0 (got τ₁ = {t1}, τ₂ = {t2})"
        )));
    }
    Ok(())
}

fn cusp_airy_once(t1: i64, xi1: f64, t2: i64, xi2: f64, cfg: &AiryConfig) -> Result<f64> {
    let integrand = |l: f64| -> Result<f64> { Ok(airy_like(-t1, xi1 + l, cfg)? * airy_like(t2, xi2 + l, cfg)?) };
    let mut cutoff = 4.0;
    while integrand(cutoff)?.abs() > cfg.lambda_tol && cutoff < 200.0 {
        cutoff += 4.0;
    }
    let panels = (cutoff.ceil() as usize).max(1);
    let per = cfg.lambda_nodes_per_unit.max(2);
    let rule = GaussLegendre::new(NonZeroUsize::new(per).unwrap());
    let mut total = 0.0;
    let h = cutoff / panels as f64;
    for p in 0..panels {
        let lo = p as f64 * h;
        for &(x, w) in rule.as_node_weight_pairs() {
            let l = lo + 0.5 * h * (x + 1.0);
            total += 0.5 * h * w * integrand(l)?;
        }
    }
    let sign = if t2.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(-heaviside(t1 - t2, xi1 - xi2) + sign * total)
}

/// `𝕃^{cusp-Airy}(τ₁, ξ₁; τ₂, ξ₂) = −ℍ^{τ₁−τ₂}(ξ₁ − ξ₂) + (−1)^{τ₂} ∫₀^∞ A_{−τ₁}(ξ₁ + λ) A_{τ₂}(ξ₂ + λ) dλ`.
pub fn cusp_airy(t1: i64, xi1: f64, t2: i64, xi2: f64, cfg: &AiryConfig) -> Result<QuadResult> {
    check_quadrant(t1, t2)?;
    let coarse = cusp_airy_once(t1, xi1, t2, xi2, cfg)?;
    let fine = cusp_airy_once(t1, xi1, t2, xi2, &cfg.refined())?;
    Ok(QuadResult {
        value: C64::from(fine),
        err_estimate: (fine - coarse).abs(),
    })
}

/// One row of the cusp-Airy comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspRow {
    pub r: usize,
    /// `𝕃̃^dTac` at `yᵢ = 2√𝔯 + ξᵢ 𝔯^{−1/6}`.
    pub tilde_re: f64,
    pub tilde_im: f64,
    /// `𝔯^{(τ₁−τ₂−1)/6} 𝕃̃^dTac`, the normalization that converges numerically.
    pub scaled: f64,
    pub limit: f64,
    pub discrepancy: f64,
}

/// `𝕃̃^dTac(τ₁, y₁; τ₂, y₂) = (√2)^{τ₁−τ₂−1} 𝕃^dTac_{𝔯,0,0}(τ₁, −y₁/√2; τ₂, −y₂/√2)` for
/// each `𝔯`, compared with the cusp-Airy kernel at `(τ₁, ξ₁; τ₂, ξ₂)`.
pub fn cusp_limit_check(
    rs: &[usize],
    t1: i64,
    xi1: f64,
    t2: i64,
    xi2: f64,
    cfg: &QuadratureConfig,
    airy: &AiryConfig,
) -> Result<Vec<CuspRow>> {
    check_quadrant(t1, t2)?;
    let limit = cusp_airy(t1, xi1, t2, xi2, airy)?.value.re;
    let s2 = std::f64::consts::SQRT_2;
    let mut rows = Vec::new();
    for &r in rs {
        let tac = Tacnode::new(TacnodeParams { r, rho: 0, beta: 0.0 }, cfg)?;
        let rf = r as f64;
        let y1 = 2.0 * rf.sqrt() + xi1 / rf.powf(1.0 / 6.0);
        let y2 = 2.0 * rf.sqrt() + xi2 / rf.powf(1.0 / 6.0);
        let v = tac.dtac(TacnodePoint::new(t1, -y1 / s2), TacnodePoint::new(t2, -y2 / s2))?;
        let tilde = v * s2.powi((t1 - t2 - 1) as i32);
        let scaled = rf.powf((t1 - t2 - 1) as f64 / 6.0) * tilde.re;
        rows.push(CuspRow {
            r,
            tilde_re: tilde.re,
            tilde_im: tilde.im,
            scaled,
            limit,
            discrepancy: (scaled - limit).abs(),
        });
    }
    Ok(rows)
}
