use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, TilingCase};
use crate::linalg::{det_from_fn, DenseMatrix};
use crate::quadrature::{pairwise_sum, ContourSpec, QuadResult, QuadratureConfig};

/// Largest `𝔯` accepted by the pre-limit kernel.
pub const PRELIMIT_R_CAP: usize = 6;

/// `ln(1 + z)` without cancellation for small `z`.
fn log1p(z: C64) -> C64 {
    let u = 1.0 + z;
    if u == C64::new(1.0, 0.0) {
        z
    } else {
        u.ln() * z / (u - 1.0)
    }
}

/// The finite-t functions of the scaled kernel, `t = n^{−1/2}`, `a = 1 + βt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledFunctions {
    pub n: i64,
    pub t: f64,
    pub beta: f64,
    pub a: f64,
    pub kappa: i64,
}

impl ScaledFunctions {
    pub fn new(n: i64, beta: f64, kappa: i64) -> Self {
        let t = (n as f64).powf(-0.5);
        ScaledFunctions {
            n,
            t,
            beta,
            a: 1.0 + beta * t,
            kappa,
        }
    }

    fn plus(&self, z: C64, p: i64) -> C64 {
        (p as f64 * log1p(self.a * self.a * self.t * z)).exp()
    }

    fn minus(&self, z: C64, p: i64) -> C64 {
        (p as f64 * log1p(-self.t * z)).exp()
    }

    /// `h(z) = (1 + a²tz)^n (1 − tz)^{n+1}`, with `h(0) = 1`.
    pub fn h(&self, z: C64) -> C64 {
        self.plus(z, self.n) * self.minus(z, self.n + 1)
    }

    /// `𝓕_{x,s}(v) = v^{−x} (1 + a²tv)^{s−1} (1 − tv)^{n−s}`.
    pub fn calf(&self, v: C64, x: i64, s: i64) -> C64 {
        v.powi(-(x as i32)) * self.plus(v, s - 1) * self.minus(v, self.n - s)
    }

    /// `𝓖_{x,s}(z) = z^{−x−κ} (1 + a²tz)^s (1 − tz)^{n+1−s}`.
    pub fn calg(&self, z: C64, x: i64, s: i64) -> C64 {
        z.powi(-((x + self.kappa) as i32)) * self.plus(z, s) * self.minus(z, self.n + 1 - s)
    }
}

/// The four pieces of the pre-limit kernel, normalized by `Ω(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreLimitTerms {
    pub l0: C64,
    pub l12: C64,
    pub l3: C64,
    pub l4: C64,
}

impl PreLimitTerms {
    pub fn total(&self) -> C64 {
        self.l0 + self.l12 + self.l3 + self.l4
    }
}

/// The rescaled finite-n red kernel `𝕃_{n,𝔯,ρ}` written as double contour integrals
/// with `𝔯`-fold moment determinants over the downward line `Γ̃`.
#[derive(Debug, Clone)]
pub struct PreLimit {
    pub r: usize,
    pub rho: i64,
    pub f: ScaledFunctions,
    pub cfg: QuadratureConfig,
    gamma0: Vec<(C64, C64)>,
    gamma0_inner: Vec<(C64, C64)>,
    line: Vec<(C64, C64)>,
    /// `dμ(w) = dw / (2πi w^ρ h(w))` on the line nodes.
    mu: Vec<C64>,
}

impl PreLimit {
    pub fn new(n: i64, r: usize, rho: i64, beta: f64, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        if r > PRELIMIT_R_CAP {
            return Err(Error::Unsupported(format!("pre-limit kernel needs 𝔯 ≤ {PRELIMIT_R_CAP} (got {r})")));
        }
        if rho < r as i64 {
            return Err(Error::Unsupported(format!("pre-limit kernel needs ρ ≥ 𝔯 (got ρ = {rho}, 𝔯 = {r})")));
        }
        let f = ScaledFunctions::new(n, beta, rho - r as i64);
        let gamma0 = ContourSpec::circle(C64::new(0.0, 0.0), cfg.circle_radius, cfg.circle_nodes).discretize();
        let gamma0_inner =
            ContourSpec::circle(C64::new(0.0, 0.0), cfg.circle_radius * cfg.inner_ratio, cfg.circle_nodes)
                .discretize();
        let line = ContourSpec::vertical_line(cfg.line_abscissa, cfg.line_half_height, cfg.line_nodes())
            .reversed()
            .discretize();
        let mu = line
            .iter()
            .map(|&(w, dw)| dw / (w.powi(rho as i32) * f.h(w)))
            .collect();
        Ok(PreLimit {
            r,
            rho,
            f,
            cfg: *cfg,
            gamma0,
            gamma0_inner,
            line,
            mu,
        })
    }

    /// Parameters read off a Case 1, `Δ ≤ 0` domain with `a = 1 + β/√n`.
    pub fn from_spec(spec: &DomainSpec, cfg: &QuadratureConfig) -> Result<Self> {
        spec.validate()?;
        let v = spec.verdict();
        let d = spec.derived();
        if v.case != TilingCase::Case1 || d.delta > 0 {
            return Err(Error::Unsupported("analytic kernels require Case 1 with Δ ≤ 0".into()));
        }
        let beta = (spec.a - 1.0) * (spec.n as f64).sqrt();
        PreLimit::new(spec.n, d.r as usize, d.rho, beta, cfg)
    }

    fn moments(&self, size: usize, ratio: impl Fn(C64) -> C64) -> DenseMatrix {
        let weights: Vec<C64> = self
            .line
            .iter()
            .zip(&self.mu)
            .map(|(&(w, _), &m)| ratio(w) * m)
            .collect();
        let mut pw: Vec<C64> = vec![C64::new(1.0, 0.0); self.line.len()];
        let mut sums = Vec::with_capacity(2 * size);
        for _ in 0..(2 * size).max(1) {
            let terms: Vec<C64> = pw.iter().zip(&weights).map(|(p, w)| p * w).collect();
            sums.push(pairwise_sum(&terms));
            for (p, &(w, _)) in pw.iter_mut().zip(&self.line) {
                *p *= w;
            }
        }
        DenseMatrix::from_fn(size, size, |i, j| sums[i + j])
    }

    fn power_moments(&self, count: usize, ratio: impl Fn(C64) -> C64) -> Vec<C64> {
        let mut out = Vec::with_capacity(count);
        let mut pw: Vec<C64> = self.line.iter().zip(&self.mu).map(|(&(w, _), &m)| ratio(w) * m).collect();
        for _ in 0..count {
            out.push(pairwise_sum(&pw));
            for (p, &(w, _)) in pw.iter_mut().zip(&self.line) {
                *p *= w;
            }
        }
        out
    }

    /// `Ω(0, 0) = det[∫ w^{i+j} dμ(w)]_{𝔯×𝔯}`.
    pub fn omega00(&self) -> C64 {
        self.moments(self.r, |_| C64::new(1.0, 0.0)).det()
    }

    fn s_of(&self, y: f64) -> Result<i64> {
        let n = self.f.n as f64;
        let s = (n + y * (2.0 * n).sqrt()) / 2.0;
        if (s - s.round()).abs() > 1e-9 {
            return Err(Error::OutOfRange(format!("y = {y} does not sit on a lattice line (s = {s})")));
        }
        Ok(s.round() as i64)
    }

    pub fn terms(&self, x1: i64, y1: f64, x2: i64, y2: f64) -> Result<PreLimitTerms> {
        let s1 = self.s_of(y1)?;
        let s2 = self.s_of(y2)?;
        let f = &self.f;
        let (r, rho, kap) = (self.r, self.rho, f.kappa);
        let (a, t) = (f.a, f.t);
        let o00 = self.omega00();
        if o00.norm() < 1e-300 {
            return Err(Error::Singular("Ω(0, 0) vanishes".into()));
        }

        let mut l0 = C64::new(0.0, 0.0);
        if x1 > x2 && y1 >= y2 - 1e-12 {
            for &(z, wz) in &self.gamma0 {
                l0 -= wz * f.calf(z, x1, s1) / (z.powi(kap as i32) * f.calg(z, x2, s2));
            }
        }
        if x1 > x2 && (y1 - y2).abs() < 1e-12 {
            l0 -= C64::from((-a * a * t).powi((x1 - x2 - 1) as i32) / (1.0 + a.powi(-2)));
        }

        let c = self.moments(r, |_| C64::new(1.0, 0.0));
        let l12: C64 = self
            .gamma0
            .par_iter()
            .map(|&(u, wu)| {
                let d = self.moments(r, |w| 1.0 / (u - w));
                let mut acc = C64::new(0.0, 0.0);
                for &(v, wv) in &self.line {
                    let om = det_from_fn(r, |i, j| c[(i, j)] + (v - u) * d[(i, j)]);
                    let g = u.powi(r as i32) * f.calf(u, x1, s1) / (v.powi(rho as i32) * f.calg(v, x2, s2))
                        + (f.h(u) / f.calg(u, x2, s2)) / (v.powi(kap as i32) * f.h(v) / f.calf(v, x1, s1));
                    acc += wv * g / (u - v) * om;
                }
                wu * acc
            })
            .sum::<C64>()
            / o00;

        let mut l3 = C64::new(0.0, 0.0);
        if r >= 1 {
            let cm = self.power_moments(2 * r + 1, |_| C64::new(1.0, 0.0));
            let fu: Vec<C64> = self
                .line
                .iter()
                .map(|&(v, _)| v.powi(-(kap as i32)) * f.calf(v, x1, s1) / f.h(v))
                .collect();
            let gv: Vec<C64> = self
                .line
                .iter()
                .map(|&(v, _)| 1.0 / (v.powi(rho as i32) * f.calg(v, x2, s2)))
                .collect();
            l3 = if r == 1 {
                let su: C64 = self.line.iter().zip(&fu).map(|(&(_, w), f)| w * f).sum();
                let sv: C64 = self.line.iter().zip(&gv).map(|(&(_, w), g)| w * g).sum();
                su * sv
            } else {
                self.line
                    .par_iter()
                    .zip(fu.par_iter())
                    .map(|(&(uu, wu), fu)| {
                        let mut acc = C64::new(0.0, 0.0);
                        for (&(vv, wv), g) in self.line.iter().zip(&gv) {
                            let om = det_from_fn(r - 1, |i, j| {
                                uu * vv * cm[i + j] - (uu + vv) * cm[i + j + 1] + cm[i + j + 2]
                            });
                            acc += wv * g * om;
                        }
                        wu * fu * acc
                    })
                    .sum()
            };
            l3 = -l3 / o00;
        }

        let e_of = |z: C64| self.power_moments(2 * r + 1, |w| 1.0 / (z - w));
        let ev: Vec<Vec<C64>> = self.gamma0_inner.iter().map(|&(v, _)| e_of(v)).collect();
        let l4: C64 = self
            .gamma0
            .par_iter()
            .map(|&(uu, wu)| {
                let eu = e_of(uu);
                let mut acc = C64::new(0.0, 0.0);
                for (&(vv, wv), ev) in self.gamma0_inner.iter().zip(&ev) {
                    let dm = det_from_fn(r + 1, |i, j| (eu[i + j] - ev[i + j]) / (vv - uu));
                    acc += wv * f.h(vv) / f.calg(vv, x2, s2) * dm;
                }
                wu * uu.powi(r as i32) * f.calf(uu, x1, s1) * acc
            })
            .sum::<C64>()
            / o00;

        Ok(PreLimitTerms { l0, l12, l3, l4 })
    }

    pub fn eval(&self, x1: i64, y1: f64, x2: i64, y2: f64) -> Result<C64> {
        Ok(self.terms(x1, y1, x2, y2)?.total())
    }

    /// Value with an error estimate from a rule with doubled node counts.
    pub fn eval_with_error(&self, x1: i64, y1: f64, x2: i64, y2: f64) -> Result<QuadResult> {
        let fine = PreLimit::new(self.f.n, self.r, self.rho, self.f.beta, &self.cfg.refined())?;
        let v = fine.eval(x1, y1, x2, y2)?;
        let c = self.eval(x1, y1, x2, y2)?;
        Ok(QuadResult {
            value: v,
            err_estimate: (v - c).norm(),
        })
    }

    /// The lattice prefactor turning `𝕃` into the red kernel between blue centres
    /// on lines `S = η + 1`: `(−1)^{(S2−S1)/2} a^{u2−u1} t^{x2−x1+1} (1 + a²)`.
    pub fn red_prefactor(&self, x1: i64, s1: i64, u1: i64, x2: i64, s2: i64, u2: i64) -> f64 {
        let a = self.f.a;
        let sign = if ((s2 - s1) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * a.powi((u2 - u1) as i32) * self.f.t.powi((x2 - x1 + 1) as i32) * (1.0 + a * a)
    }
}
