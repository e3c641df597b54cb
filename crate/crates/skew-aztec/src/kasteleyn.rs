//! Kasteleyn matrix, its determinant and inverse, and the exact finite-n kernels.
//!
//! Rows of `K` are white cells and columns blue cells. Horizontal edges carry
//! weight `1` and vertical edges `i·a`, which makes `|det K|` the weighted number
//! of tilings of the skew-Aztec rectangle. Cells are ordered by `(s, u)`, so `K`
//! is banded with bandwidths close to `M` and `m + 1`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_kernels::{GreenKernel, IdentityResidual};
use crate::geometry::{Domain, DomainSpec, Su, XiEta};
use crate::linalg::{det_from_fn, BandLu, BandMatrix, DenseMatrix};
use crate::oracle;
use crate::tiling::{Domino, Orientation};

/// Sign gauge `(−1)^(c0·s_b/2 + c1·(s_w−1)/2 + c2·u_b + c3·u_w + c4)` relating the
/// inverse Kasteleyn matrix to the blue kernel, on top of the prefactor `i^−(u_b+u_w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignGauge {
    pub bits: [u8; 5],
}

impl SignGauge {
    pub fn sign(&self, b: Su, w: Su) -> f64 {
        let e = self.bits[0] as i64 * (b.s / 2)
            + self.bits[1] as i64 * ((w.s - 1) / 2)
            + self.bits[2] as i64 * b.u
            + self.bits[3] as i64 * w.u
            + self.bits[4] as i64;
        if e.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Fits the five sign bits on `spec` by matching `K⁻¹(b, w)` against
    /// `−i^−(u_b+u_w)·K^green(b; w)`; returns the gauge and its residual.
    pub fn detect(spec: &DomainSpec) -> Result<(SignGauge, f64)> {
        let sys = KasteleynSystem::build_with_gauge(spec, SignGauge { bits: [0; 5] })?;
        let green = GreenKernel::new(spec)?;
        let n = spec.n;
        let mut samples = Vec::new();
        for w in sys.domain.white.iter().filter(|w| w.s < 2 * n + 1) {
            let wi = sys.domain.white_index(*w).unwrap();
            let col = sys.kinv_column(wi)?;
            for b in sys.domain.blue.iter().filter(|b| b.s > 0) {
                let bi = sys.domain.blue_index(*b).unwrap();
                let g = green.eval(b.s, b.u, w.s, w.u);
                let pre = prefactor(*b, *w);
                samples.push((*b, *w, col[bi], -pre * g));
            }
        }
        let mut best: Option<(SignGauge, f64)> = None;
        for code in 0..32u8 {
            let gauge = SignGauge {
                bits: [code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1, (code >> 4) & 1],
            };
            let res = samples
                .iter()
                .map(|(b, w, k, p)| (k - p * gauge.sign(*b, *w)).norm())
                .fold(0.0, f64::max);
            if best.is_none_or(|(_, r)| res < r) {
                best = Some((gauge, res));
            }
        }
        let (g, r) = best.unwrap();
        if r > 1e-8 {
            return Err(Error::Singular(format!("no sign gauge fits (best residual {r:.3e})")));
        }
        Ok((g, r))
    }

    /// The gauge detected once on a fixed reference domain and reused everywhere.
    pub fn reference() -> SignGauge {
        static GAUGE: OnceLock<SignGauge> = OnceLock::new();
        *GAUGE.get_or_init(|| {
            let spec = DomainSpec::new(4, 4, 3, 0.7).expect("reference spec");
            SignGauge::detect(&spec).expect("gauge detection on the reference spec").0
        })
    }
}

/// `−(−1)^((w₁−w₂+b₁−b₂+2)/4)` in `(ξ, η)` coordinates, which equals `i^−(u_b+u_w)`.
pub fn prefactor(b: Su, w: Su) -> C64 {
    let k = (-(b.u + w.u)).rem_euclid(4);
    [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][k as usize]
}

/// Signed weighted adjacency matrix with its banded LU factorization.
#[derive(Debug, Clone)]
pub struct KasteleynSystem {
    pub spec: DomainSpec,
    pub domain: Arc<Domain>,
    pub gauge: SignGauge,
    matrix: BandMatrix,
    lu: BandLu,
}

impl KasteleynSystem {
    pub fn build(spec: &DomainSpec) -> Result<Self> {
        Self::build_with_gauge(spec, SignGauge::reference())
    }

    pub fn build_with_gauge(spec: &DomainSpec, gauge: SignGauge) -> Result<Self> {
        let domain = Arc::new(Domain::new(spec)?);
        let mut entries = Vec::new();
        let (mut kl, mut ku) = (0usize, 0usize);
        for (bi, b) in domain.blue.iter().enumerate() {
            for o in Orientation::ALL {
                if let Some(wi) = domain.white_index(o.partner(*b)) {
                    let v = if o.is_vertical() {
                        C64::new(0.0, spec.a)
                    } else {
                        C64::new(1.0, 0.0)
                    };
                    if wi > bi {
                        kl = kl.max(wi - bi);
                    } else {
                        ku = ku.max(bi - wi);
                    }
                    entries.push((wi, bi, v));
                }
            }
        }
        let mut matrix = BandMatrix::zeros(domain.white.len(), kl, ku);
        for (wi, bi, v) in entries {
            matrix.set(wi, bi, v);
        }
        let lu = BandLu::new(matrix.clone());
        Ok(KasteleynSystem {
            spec: *spec,
            domain,
            gauge,
            matrix,
            lu,
        })
    }

    pub fn size(&self) -> usize {
        self.domain.white.len()
    }

    /// `K(w, b)` by indices.
    pub fn entry(&self, wi: usize, bi: usize) -> C64 {
        self.matrix.get(wi, bi)
    }

    pub fn det(&self) -> C64 {
        self.lu.det()
    }

    /// Column `w` of `K⁻¹`, indexed by blue cell.
    pub fn kinv_column(&self, wi: usize) -> Result<Vec<C64>> {
        let mut e = vec![C64::new(0.0, 0.0); self.size()];
        e[wi] = C64::new(1.0, 0.0);
        self.lu.solve(&e)
    }

    /// `K⁻¹(b, w)` for cells of the domain.
    pub fn kinv(&self, b: Su, w: Su) -> Result<C64> {
        let bi = self.blue_idx(b)?;
        let wi = self.white_idx(w)?;
        Ok(self.kinv_column(wi)?[bi])
    }

    /// The whole inverse (small systems only).
    pub fn kinv_dense(&self) -> Result<DenseMatrix> {
        let n = self.size();
        let mut out = DenseMatrix::zeros(n, n);
        for wi in 0..n {
            let col = self.kinv_column(wi)?;
            for bi in 0..n {
                out[(bi, wi)] = col[bi];
            }
        }
        Ok(out)
    }

    pub fn dense_matrix(&self) -> DenseMatrix {
        let n = self.size();
        DenseMatrix::from_fn(n, n, |i, j| self.matrix.get(i, j))
    }

    fn blue_idx(&self, b: Su) -> Result<usize> {
        self.domain
            .blue_index(b)
            .ok_or_else(|| Error::OutOfRange(format!("{b:?} is not a blue cell of the domain")))
    }

    fn white_idx(&self, w: Su) -> Result<usize> {
        self.domain
            .white_index(w)
            .ok_or_else(|| Error::OutOfRange(format!("{w:?} is not a white cell of the domain")))
    }

    fn blue_value(&self, b: Su, w: Su, kinv: C64) -> C64 {
        kinv / (prefactor(b, w) * self.gauge.sign(b, w))
    }

    /// The blue kernel `K^blue(b; w)` read off the inverse Kasteleyn matrix.
    pub fn kblue(&self, b: Su, w: Su) -> Result<C64> {
        if !b.is_blue() || w.is_blue() {
            return Err(Error::OutOfRange(format!("parity violation for b = {b:?}, w = {w:?}")));
        }
        let k = self.kinv(b, w)?;
        Ok(self.blue_value(b, w, k))
    }

    fn kblue_or_zero(&self, b: Su, w: Su, cache: &mut HashMap<usize, Vec<C64>>) -> Result<C64> {
        let bi = self.blue_idx(b)?;
        match self.domain.white_index(w) {
            None => Ok(C64::new(0.0, 0.0)),
            Some(wi) => {
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(wi) {
                    e.insert(self.kinv_column(wi)?);
                }
                Ok(self.blue_value(b, w, cache[&wi][bi]))
            }
        }
    }

    /// Blue kernel between two blue cells of line `s`.
    pub fn kblue_level(&self, s: i64, u1: i64, u2: i64) -> Result<C64> {
        let mut cache = HashMap::new();
        let b = Su::new(s, u1);
        let d = if u1 == u2 { 1.0 } else { 0.0 };
        Ok(C64::new(d, 0.0)
            + self.kblue_or_zero(b, Su::new(s - 1, u2), &mut cache)?
            + self.spec.a * self.kblue_or_zero(b, Su::new(s - 1, u2 - 1), &mut cache)?)
    }

    /// The red kernel between two blue-cell centres.
    pub fn kred(&self, p1: XiEta, p2: XiEta) -> Result<C64> {
        let m = self.kred_matrix(&[p1, p2])?;
        Ok(m[(0, 1)])
    }

    /// `[K^red(pᵢ, pⱼ)]` for a list of blue-cell centres.
    pub fn kred_matrix(&self, pts: &[XiEta]) -> Result<DenseMatrix> {
        let su = pts
            .iter()
            .map(|p| {
                if !p.is_blue_centre() {
                    return Err(Error::OutOfRange(format!("({}, {}) is not a blue centre", p.xi, p.eta)));
                }
                let b = p.to_su()?;
                self.blue_idx(b)?;
                Ok(b)
            })
            .collect::<Result<Vec<Su>>>()?;
        let mut cache = HashMap::new();
        let a = self.spec.a;
        let mut out = DenseMatrix::zeros(su.len(), su.len());
        for (i, b1) in su.iter().enumerate() {
            for (j, b2) in su.iter().enumerate() {
                let t1 = self.kblue_or_zero(*b2, Su::new(b1.s + 1, b1.u), &mut cache)?;
                let t2 = self.kblue_or_zero(*b2, Su::new(b1.s - 1, b1.u - 1), &mut cache)?;
                out[(i, j)] = t1 - a * t2;
            }
        }
        Ok(out)
    }

    /// Probability that none of the given blue-cell centres carries a red dot,
    /// `det(I − K^red)` on those sites.
    pub fn red_gap_probability(&self, pts: &[XiEta]) -> Result<f64> {
        let k = self.kred_matrix(pts)?;
        let d = det_from_fn(pts.len(), |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            C64::new(id, 0.0) - k[(i, j)]
        });
        Ok(d.re)
    }

    /// Red-dot density `K^red(p, p)`.
    pub fn red_density(&self, p: XiEta) -> Result<f64> {
        Ok(self.kred(p, p)?.re)
    }

    /// All dominoes that fit in the domain.
    pub fn all_dominoes(&self) -> Vec<Domino> {
        self.domain
            .blue
            .iter()
            .flat_map(|&b| Orientation::ALL.into_iter().map(move |o| Domino::new(b, o)))
            .filter(|d| self.domain.white_index(d.white()).is_some())
            .collect()
    }

    /// Probability that all given dominoes appear: `∏ K(wᵢ, bᵢ) · det[K⁻¹(bᵢ, wⱼ)]`.
    pub fn kenyon_probability(&self, dominoes: &[Domino]) -> Result<f64> {
        let mut idx = Vec::with_capacity(dominoes.len());
        let mut prod = C64::new(1.0, 0.0);
        for d in dominoes {
            let bi = match self.domain.blue_index(d.anchor) {
                Some(i) => i,
                None => return Ok(0.0),
            };
            let wi = match self.domain.white_index(d.white()) {
                Some(i) => i,
                None => return Ok(0.0),
            };
            prod *= self.entry(wi, bi);
            idx.push((bi, wi));
        }
        let mut cols: HashMap<usize, Vec<C64>> = HashMap::new();
        for &(_, wi) in &idx {
            if let std::collections::hash_map::Entry::Vacant(e) = cols.entry(wi) {
                e.insert(self.kinv_column(wi)?);
            }
        }
        let d = det_from_fn(idx.len(), |i, j| cols[&idx[j].1][idx[i].0]);
        Ok((prod * d).re)
    }
}

/// Worst case of `1_{u₁=u₂} − K^green(s, u₁; s, u₂) = K^blue(s, u₁; s, u₂)` over
/// the blue line `s`, with the blue side read off the Kasteleyn inverse.
pub fn duality_check(spec: &DomainSpec, s: i64) -> Result<IdentityResidual> {
    if s <= 0 || s > 2 * spec.n || s % 2 != 0 {
        return Err(Error::OutOfRange(format!("duality line s = {s} must be even with 0 < s < 2n + 1")));
    }
    let sys = KasteleynSystem::build(spec)?;
    let green = GreenKernel::new(spec)?;
    let (lo, hi) = sys.domain.line_range(s);
    let mut worst: Option<IdentityResidual> = None;
    for u1 in lo..=hi {
        for u2 in lo..=hi {
            let d = if u1 == u2 { 1.0 } else { 0.0 };
            let lhs = C64::new(d - green.eval(s, u1, s, u2), 0.0);
            let rhs = sys.kblue_level(s, u1, u2)?;
            let r = IdentityResidual::new(format!("duality s={s} u1={u1} u2={u2}"), lhs, rhs);
            if worst.as_ref().is_none_or(|w| r.residual > w.residual) {
                worst = Some(r);
            }
        }
    }
    worst.ok_or_else(|| Error::OutOfRange(format!("line s = {s} is empty")))
}

/// One kernel-versus-oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCheck {
    pub kind: String,
    pub config: String,
    pub kernel: f64,
    pub oracle: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub spec: DomainSpec,
    pub checks: Vec<CorrelationCheck>,
    pub max_error: f64,
}

/// Compares Kenyon probabilities and red gap probabilities against exhaustive
/// enumeration: every single domino and site, then `pairs` random pairs of each.
pub fn correlation_suite(spec: &DomainSpec, pairs: usize, seed: u64) -> Result<CorrelationReport> {
    let sys = KasteleynSystem::build(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dominoes = sys.all_dominoes();
    let sites: Vec<XiEta> = sys.domain.blue.iter().map(|b| b.to_xi_eta()).collect();
    let mut checks = Vec::new();
    let mut push = |kind: &'static str, config: String, kernel: f64, oracle: f64| {
        checks.push(CorrelationCheck {
            kind: kind.to_string(),
            config,
            kernel,
            oracle,
            error: (kernel - oracle).abs(),
        });
    };
    let dom_label = |d: &Domino| {
        let p = d.anchor.to_xi_eta();
        format!("({},{}){}", p.xi, p.eta, d.o.label())
    };
    let site_label = |p: &XiEta| format!("({},{})", p.xi, p.eta);
    for d in &dominoes {
        let k = sys.kenyon_probability(&[*d])?;
        let o = oracle::correlation(spec, &[*d])?;
        push("domino", dom_label(d), k, o);
    }
    for p in &sites {
        let k = sys.red_gap_probability(&[*p])?;
        let o = oracle::red_gap_probability_sites(spec, &[*p])?;
        push("gap", site_label(p), k, o);
    }
    for _ in 0..pairs {
        let pick: Vec<Domino> = dominoes.choose_multiple(&mut rng, 2).copied().collect();
        let k = sys.kenyon_probability(&pick)?;
        let o = oracle::correlation(spec, &pick)?;
        push("domino pair", format!("{} {}", dom_label(&pick[0]), dom_label(&pick[1])), k, o);
    }
    for _ in 0..pairs {
        let pick: Vec<XiEta> = sites.choose_multiple(&mut rng, 2).copied().collect();
        let k = sys.red_gap_probability(&pick)?;
        let o = oracle::red_gap_probability_sites(spec, &pick)?;
        push("gap pair", format!("{} {}", site_label(&pick[0]), site_label(&pick[1])), k, o);
    }
    let max_error = checks.iter().map(|c| c.error).fold(0.0, f64::max);
    Ok(CorrelationReport {
        spec: *spec,
        checks,
        max_error,
    })
}
