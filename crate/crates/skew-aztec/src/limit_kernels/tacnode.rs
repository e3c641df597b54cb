use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_kernels::PreLimit;
use crate::linalg::{det_from_fn, DenseMatrix};
use crate::quadrature::{pairwise_sum, ContourSpec, QuadResult, QuadratureConfig};

/// `ℍ^m(z) = z^{m−1}/(m−1)!` for `m ≥ 1`, `z ≥ 0`, and `0` otherwise.
pub fn heaviside(m: i64, z: f64) -> f64 {
    if m < 1 || z < 0.0 {
        return 0.0;
    }
    (1..m).fold(1.0, |acc, k| acc * z / k as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TacnodeParams {
    pub r: usize,
    pub rho: i64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TacnodePoint {
    pub tau: i64,
    pub y: f64,
}

impl TacnodePoint {
    pub fn new(tau: i64, y: f64) -> Self {
        TacnodePoint { tau, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaSign {
    Plus,
    Minus,
}

/// The five terms of the discrete tacnode kernel, already divided by `Θ_𝔯(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtacTerms {
    pub heaviside: C64,
    pub t2: C64,
    pub t3: C64,
    pub t4: C64,
    pub t5: C64,
}

impl DtacTerms {
    pub fn total(&self) -> C64 {
        self.heaviside + self.t2 + self.t3 + self.t4 + self.t5
    }
}

/// Evaluator of `𝕃^dTac_{𝔯,ρ,β}` with frozen contours.
///
/// Moments `∫ qᵢ qⱼ g(w) dμ(w)` over `dμ = e^{w²−2βw} w^{−ρ} dw/(2πi)` on the upward
/// line `L₀₊` use the monic basis `q_{k+1} = z q_k + (k/2) q_{k−1}`, `z = w − β`,
/// which leaves every determinant unchanged and keeps the moment matrices well scaled.
#[derive(Debug, Clone)]
pub struct Tacnode {
    pub params: TacnodeParams,
    pub cfg: QuadratureConfig,
    gamma0: Vec<(C64, C64)>,
    gamma0_inner: Vec<(C64, C64)>,
    line: Vec<(C64, C64)>,
    line_shifted: Vec<(C64, C64)>,
    mu: Vec<C64>,
    /// `basis[k][node] = q_k(w_node)` for `k ≤ 𝔯 + 1`.
    basis: Vec<Vec<C64>>,
    c: DenseMatrix,
    theta00: C64,
}

impl Tacnode {
    pub fn new(params: TacnodeParams, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        if params.r > 24 {
            return Err(Error::Unsupported(format!("𝔯 = {} exceeds the determinant cap 24", params.r)));
        }
        let half = cfg.half_height_for(params.beta, params.rho as f64);
        let nodes = {
            let per = cfg.line_nodes_per_unit as f64;
            let n = ((2.0 * half * per).ceil() as usize).min(cfg.max_line_nodes);
            n.div_ceil(crate::quadrature::PANEL_POINTS) * crate::quadrature::PANEL_POINTS
        };
        let line = ContourSpec::vertical_line(cfg.line_abscissa, half, nodes).discretize();
        let line_shifted =
            ContourSpec::vertical_line(cfg.line_abscissa + cfg.line_offset, half, nodes).discretize();
        let gamma0 = ContourSpec::circle(C64::new(0.0, 0.0), cfg.circle_radius, cfg.circle_nodes).discretize();
        let gamma0_inner =
            ContourSpec::circle(C64::new(0.0, 0.0), cfg.circle_radius * cfg.inner_ratio, cfg.circle_nodes)
                .discretize();
        let beta = params.beta;
        let mu: Vec<C64> = line
            .iter()
            .map(|&(w, dw)| dw * (w * w - 2.0 * beta * w).exp() / w.powi(params.rho as i32))
            .collect();
        let kmax = params.r + 2;
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(kmax);
        basis.push(vec![C64::new(1.0, 0.0); line.len()]);
        basis.push(line.iter().map(|&(w, _)| w - beta).collect());
        for k in 1..kmax.saturating_sub(1) {
            let next = line
                .iter()
                .enumerate()
                .map(|(i, &(w, _))| (w - beta) * basis[k][i] + 0.5 * k as f64 * basis[k - 1][i])
                .collect();
            basis.push(next);
        }
        let mut t = Tacnode {
            params,
            cfg: *cfg,
            gamma0,
            gamma0_inner,
            line,
            line_shifted,
            mu,
            basis,
            c: DenseMatrix::zeros(0, 0),
            theta00: C64::new(1.0, 0.0),
        };
        t.c = t.moments(params.r, |_| C64::new(1.0, 0.0));
        t.theta00 = t.c.det();
        if t.theta00.norm() < 1e-12 {
            return Err(Error::Singular(format!("Θ_𝔯(0, 0) = {} is too small to normalize", t.theta00)));
        }
        Ok(t)
    }

    /// `[∫ qᵢ qⱼ g(w) dμ(w)]` of the given size.
    pub fn moments(&self, size: usize, g: impl Fn(C64) -> C64) -> DenseMatrix {
        let weights: Vec<C64> = self
            .line
            .iter()
            .zip(&self.mu)
            .map(|(&(w, _), &m)| g(w) * m)
            .collect();
        let mut out = DenseMatrix::zeros(size, size);
        for i in 0..size {
            for j in i..size {
                let terms: Vec<C64> = (0..weights.len())
                    .map(|k| self.basis[i][k] * self.basis[j][k] * weights[k])
                    .collect();
                let v = pairwise_sum(&terms);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }

    pub fn theta00(&self) -> C64 {
        self.theta00
    }

    fn check_off_line(&self, z: C64) -> Result<()> {
        if (z.re - self.cfg.line_abscissa).abs() < 1e-9 {
            return Err(Error::Quadrature(format!("{z} lies on the line L₀₊")));
        }
        Ok(())
    }

    /// `Θ_𝔯(u, v) = det[∫ qᵢ qⱼ (v − w)/(u − w) dμ(w)]`.
    pub fn theta(&self, u: C64, v: C64) -> Result<C64> {
        self.check_off_line(u)?;
        let d = self.moments(self.params.r, |w| 1.0 / (u - w));
        Ok(det_from_fn(self.params.r, |i, j| self.c[(i, j)] + (v - u) * d[(i, j)]))
    }

    /// `Θ⁺_{𝔯−1}(u, v) = det[∫ qᵢ qⱼ (u − w)(v − w) dμ]` and
    /// `Θ⁻_{𝔯+1}(u, v) = det[∫ qᵢ qⱼ dμ / ((u − w)(v − w))]`.
    pub fn theta_pm(&self, sign: ThetaSign, u: C64, v: C64) -> Result<C64> {
        let r = self.params.r;
        match sign {
            ThetaSign::Plus => {
                if r == 0 {
                    return Ok(C64::new(0.0, 0.0));
                }
                let m = self.moments(r - 1, |w| (u - w) * (v - w));
                Ok(m.det())
            }
            ThetaSign::Minus => {
                self.check_off_line(u)?;
                self.check_off_line(v)?;
                let m = self.moments(r + 1, |w| 1.0 / ((u - w) * (v - w)));
                Ok(m.det())
            }
        }
    }

    /// Node values `qᵢ qⱼ μ` packed per node, for fast moment assembly.
    fn packed(&self, size: usize) -> Vec<Vec<C64>> {
        (0..self.line.len())
            .map(|k| {
                let mut v = Vec::with_capacity(size * size);
                for i in 0..size {
                    for j in 0..size {
                        v.push(self.basis[i][k] * self.basis[j][k] * self.mu[k]);
                    }
                }
                v
            })
            .collect()
    }

    fn resolvent(&self, packed: &[Vec<C64>], size: usize, z: C64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); size * size];
        for (k, &(w, _)) in self.line.iter().enumerate() {
            let f = 1.0 / (z - w);
            for (o, p) in out.iter_mut().zip(&packed[k]) {
                *o += p * f;
            }
        }
        out
    }

    pub fn terms(&self, p1: TacnodePoint, p2: TacnodePoint) -> Result<DtacTerms> {
        let TacnodeParams { r, rho, beta: b } = self.params;
        let (t1, y1, t2, y2) = (p1.tau, p1.y, p2.tau, p2.y);
        let heav = C64::from(-heaviside(t1 - t2, y1 - y2));

        let packed = self.packed(r);
        let c = &self.c;
        let (t2v, t3v): (C64, C64) = self
            .gamma0
            .par_iter()
            .map(|&(u, wu)| {
                let d = self.resolvent(&packed, r, u);
                let eu2 = u.powi((rho - t1) as i32) * (-u * u / 2.0 + (b + y1) * u).exp();
                let eu3 = u.powi(t2 as i32) * (-u * u / 2.0 + (b - y2) * u).exp();
                let mut a2 = C64::new(0.0, 0.0);
                let mut a3 = C64::new(0.0, 0.0);
                for &(v, wv) in &self.line {
                    let th = det_from_fn(r, |i, j| c[(i, j)] + (v - u) * d[i * r + j]);
                    let f2 = eu2 / (v.powi((rho - t2) as i32) * (-v * v / 2.0 + (b + y2) * v).exp());
                    let f3 = eu3 / (v.powi(t1 as i32) * (-v * v / 2.0 + (b - y1) * v).exp());
                    let k = wv * th / (v - u);
                    a2 += f2 * k;
                    a3 += f3 * k;
                }
                (wu * a2, wu * a3)
            })
            .reduce(|| (C64::new(0.0, 0.0), C64::new(0.0, 0.0)), |x, y| (x.0 + y.0, x.1 + y.1));

        let mut t4 = C64::new(0.0, 0.0);
        if r >= 1 {
            let fu: Vec<C64> = self
                .line_shifted
                .iter()
                .map(|&(u, wu)| wu * u.powi(-(t1 as i32)) * (u * u / 2.0 - (b - y1) * u).exp())
                .collect();
            let gv: Vec<C64> = self
                .line
                .iter()
                .map(|&(v, wv)| wv / (v.powi((rho - t2) as i32) * (-v * v / 2.0 + (b + y2) * v).exp()))
                .collect();
            if r == 1 {
                t4 = fu.iter().sum::<C64>() * gv.iter().sum::<C64>();
            } else {
                let s = r - 1;
                let a = self.moments(s, |_| C64::new(1.0, 0.0));
                let bm = self.moments(s, |w| w);
                let c2 = self.moments(s, |w| w * w);
                t4 = self
                    .line_shifted
                    .par_iter()
                    .zip(fu.par_iter())
                    .map(|(&(u, _), fu)| {
                        let mut acc = C64::new(0.0, 0.0);
                        for (&(v, _), g) in self.line.iter().zip(&gv) {
                            let om = det_from_fn(s, |i, j| u * v * a[(i, j)] - (u + v) * bm[(i, j)] + c2[(i, j)]);
                            acc += g * om;
                        }
                        fu * acc
                    })
                    .sum();
            }
        }

        let size = r + 1;
        let packed1 = self.packed(size);
        let ev: Vec<Vec<C64>> = self
            .gamma0_inner
            .iter()
            .map(|&(v, _)| self.resolvent(&packed1, size, v))
            .collect();
        let t5: C64 = self
            .gamma0
            .par_iter()
            .map(|&(u, wu)| {
                let eu = self.resolvent(&packed1, size, u);
                let fu = u.powi((rho - t1) as i32) * (-u * u / 2.0 + (b + y1) * u).exp();
                let mut acc = C64::new(0.0, 0.0);
                for (&(v, wv), ev) in self.gamma0_inner.iter().zip(&ev) {
                    let dm = det_from_fn(size, |i, j| (eu[i * size + j] - ev[i * size + j]) / (v - u));
                    acc += wv * v.powi(t2 as i32) / (v * v / 2.0 - (b - y2) * v).exp() * dm;
                }
                wu * fu * acc
            })
            .sum();

        let n0 = self.theta00;
        Ok(DtacTerms {
            heaviside: heav,
            t2: t2v / n0,
            t3: t3v / n0,
            t4: t4 / n0,
            t5: -t5 / n0,
        })
    }

    pub fn dtac(&self, p1: TacnodePoint, p2: TacnodePoint) -> Result<C64> {
        Ok(self.terms(p1, p2)?.total())
    }

    /// Value with an error estimate from a second evaluation at doubled node counts.
    pub fn dtac_with_error(&self, p1: TacnodePoint, p2: TacnodePoint) -> Result<QuadResult> {
        let fine = Tacnode::new(self.params, &self.cfg.refined())?;
        let v = fine.dtac(p1, p2)?;
        let c = self.dtac(p1, p2)?;
        Ok(QuadResult {
            value: v,
            err_estimate: (v - c).norm(),
        })
    }
}

/// One row of the pre-limit versus limit comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: i64,
    pub prelimit_re: f64,
    pub prelimit_im: f64,
    pub limit_re: f64,
    pub limit_im: f64,
    pub discrepancy: f64,
    /// Discrepancy divided by the previous row's, when there is one.
    pub ratio: Option<f64>,
}

/// Compares the pre-limit kernel at `xᵢ = τᵢ − κ`, `yᵢ = y′ᵢ/√2` with `𝕃^dTac` at
/// `(τᵢ, y′ᵢ)` for each `n`, where `M = n − 𝔯 + 1`, `m = ρ + M − 1`, `a = 1 + β/√n`.
pub fn convergence_main(
    params: TacnodeParams,
    p1: TacnodePoint,
    p2: TacnodePoint,
    ns: &[i64],
    cfg: &QuadratureConfig,
) -> Result<Vec<ConvergenceRow>> {
    let limit = Tacnode::new(params, cfg)?.dtac(p1, p2)?;
    let kappa = params.rho - params.r as i64;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in ns {
        let pre = PreLimit::new(n, params.r, params.rho, params.beta, cfg)?;
        let s2 = std::f64::consts::SQRT_2;
        let v = pre.eval(p1.tau - kappa, p1.y / s2, p2.tau - kappa, p2.y / s2)?;
        let d = (v - limit).norm();
        let ratio = rows.last().map(|r| d / r.discrepancy);
        rows.push(ConvergenceRow {
            n,
            prelimit_re: v.re,
            prelimit_im: v.im,
            limit_re: limit.re,
            limit_im: limit.im,
            discrepancy: d,
            ratio,
        });
    }
    Ok(rows)
}
