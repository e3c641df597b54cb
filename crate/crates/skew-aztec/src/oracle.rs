//! Exhaustive enumeration of small domains.
//!
//! Two independent counters are provided: a depth-first matcher that branches on
//! the first uncovered blue cell, and a line-by-line transfer recursion over
//! bitmask profiles. Both return the partition function as an integer polynomial
//! in the vertical weight `a`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec, Su, XiEta};
use crate::tiling::{Domino, Orientation, Tiling};

pub const DEFAULT_CELL_CAP: usize = 60;

/// Polynomial in `a` with non-negative integer coefficients; index = power.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightPolynomial {
    pub coeffs: Vec<BigUint>,
}

impl WeightPolynomial {
    pub fn zero() -> Self {
        WeightPolynomial { coeffs: Vec::new() }
    }

    fn add_shifted(&mut self, other: &WeightPolynomial, shift: usize) {
        if other.coeffs.is_empty() {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, BigUint::zero());
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k + shift] += c;
        }
    }

    fn add_monomial(&mut self, power: usize, c: u64) {
        if self.coeffs.len() <= power {
            self.coeffs.resize(power + 1, BigUint::zero());
        }
        self.coeffs[power] += c;
    }

    /// Value at `a = 1`, i.e. the number of tilings.
    pub fn count(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval_rational(&self, a: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + BigRational::from_integer(c.clone().into());
        }
        acc
    }

    /// Exact evaluation at the binary rational nearest to `a`, rounded to `f64`.
    pub fn eval(&self, a: f64) -> f64 {
        let ar = BigRational::from_float(a).expect("finite weight");
        self.eval_rational(&ar).to_f64().unwrap_or(f64::NAN)
    }
}

/// Ratio of two polynomials evaluated exactly at `a`.
pub fn exact_ratio(num: &WeightPolynomial, den: &WeightPolynomial, a: f64) -> f64 {
    let ar = BigRational::from_float(a).expect("finite weight");
    let d = den.eval_rational(&ar);
    if d.is_zero() {
        return f64::NAN;
    }
    (num.eval_rational(&ar) / d).to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub count: BigUint,
    pub polynomial: WeightPolynomial,
    pub tilings: Option<Vec<Tiling>>,
}

impl EnumerationResult {
    pub fn partition_function(&self, a: f64) -> f64 {
        self.polynomial.eval(a)
    }
}

/// Cell-branching order used by the depth-first matcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchOrder {
    /// Blue cells by `(s, u)`, with pruning of completed white lines.
    LineMajor,
    /// Blue cells by `(u, s)`, no pruning.
    DiagonalMajor,
}

const ALL_MASK: u8 = 0b1111;

fn bit(o: Orientation) -> u8 {
    match o {
        Orientation::HL => 1,
        Orientation::HR => 2,
        Orientation::VU => 4,
        Orientation::VD => 8,
    }
}

struct Dfs {
    order: Vec<usize>,
    partners: Vec<Vec<(Orientation, usize)>>,
    allowed: Vec<u8>,
    used: Vec<bool>,
    current: Vec<Orientation>,
    line_end_check: Vec<Option<Vec<usize>>>,
    poly: WeightPolynomial,
    emit: Option<Vec<Vec<Orientation>>>,
    verticals: usize,
}

impl Dfs {
    fn new(domain: &Domain, allowed: Vec<u8>, order: BranchOrder, emit: bool) -> Self {
        let nb = domain.blue.len();
        let mut idx: Vec<usize> = (0..nb).collect();
        match order {
            BranchOrder::LineMajor => idx.sort_by_key(|&i| (domain.blue[i].s, domain.blue[i].u)),
            BranchOrder::DiagonalMajor => idx.sort_by_key(|&i| (domain.blue[i].u, domain.blue[i].s)),
        }
        let partners = domain
            .blue
            .iter()
            .map(|&b| {
                Orientation::ALL
                    .iter()
                    .filter_map(|&o| domain.white_index(o.partner(b)).map(|w| (o, w)))
                    .collect()
            })
            .collect();
        let mut line_end_check = vec![None; nb];
        if order == BranchOrder::LineMajor {
            for (pos, &i) in idx.iter().enumerate() {
                let s = domain.blue[i].s;
                let last = pos + 1 == idx.len() || domain.blue[idx[pos + 1]].s != s;
                if last && s >= 1 {
                    let whites: Vec<usize> = domain
                        .white
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| w.s == s - 1)
                        .map(|(k, _)| k)
                        .collect();
                    line_end_check[pos] = Some(whites);
                }
            }
        }
        Dfs {
            order: idx,
            partners,
            allowed,
            used: vec![false; domain.white.len()],
            current: vec![Orientation::HL; nb],
            line_end_check,
            poly: WeightPolynomial::zero(),
            emit: if emit { Some(Vec::new()) } else { None },
            verticals: 0,
        }
    }

    fn run(&mut self, pos: usize) {
        if pos == self.order.len() {
            if self.used.iter().all(|&u| u) {
                self.poly.add_monomial(self.verticals, 1);
                if let Some(e) = self.emit.as_mut() {
                    e.push(self.current.clone());
                }
            }
            return;
        }
        let i = self.order[pos];
        for k in 0..self.partners[i].len() {
            let (o, w) = self.partners[i][k];
            if self.used[w] || self.allowed[i] & bit(o) == 0 {
                continue;
            }
            self.used[w] = true;
            self.current[i] = o;
            let v = o.is_vertical() as usize;
            self.verticals += v;
            let ok = match &self.line_end_check[pos] {
                Some(ws) => ws.iter().all(|&x| self.used[x]),
                None => true,
            };
            if ok {
                self.run(pos + 1);
            }
            self.verticals -= v;
            self.used[w] = false;
        }
    }
}

fn check_cap(domain: &Domain, cap: usize) -> Result<()> {
    let cells = domain.blue.len() + domain.white.len();
    if cells > cap {
        return Err(Error::CapExceeded { cells, cap });
    }
    Ok(())
}

/// Exhaustive enumeration with the default cap and line-major branching.
pub fn enumerate(spec: &DomainSpec, emit: bool) -> Result<EnumerationResult> {
    enumerate_with(spec, emit, DEFAULT_CELL_CAP, BranchOrder::LineMajor)
}

pub fn enumerate_with(spec: &DomainSpec, emit: bool, cap: usize, order: BranchOrder) -> Result<EnumerationResult> {
    let domain = Arc::new(Domain::new(spec)?);
    check_cap(&domain, cap)?;
    let allowed = vec![ALL_MASK; domain.blue.len()];
    let mut dfs = Dfs::new(&domain, allowed, order, emit);
    dfs.run(0);
    let tilings = dfs.emit.take().map(|list| {
        list.into_iter()
            .map(|o| Tiling::new(domain.clone(), o).expect("enumerated cover is a tiling"))
            .collect()
    });
    let polynomial = dfs.poly;
    Ok(EnumerationResult {
        count: polynomial.count(),
        polynomial,
        tilings,
    })
}

/// Weight polynomial of the tilings whose blue cells obey the given orientation masks.
fn constrained_polynomial(domain: &Domain, allowed: Vec<u8>) -> WeightPolynomial {
    let mut dfs = Dfs::new(domain, allowed, BranchOrder::LineMajor, false);
    dfs.run(0);
    dfs.poly
}

/// Probability that a random tiling contains all the given dominoes.
pub fn correlation(spec: &DomainSpec, dominoes: &[Domino]) -> Result<f64> {
    correlation_with_cap(spec, dominoes, DEFAULT_CELL_CAP)
}

pub fn correlation_with_cap(spec: &DomainSpec, dominoes: &[Domino], cap: usize) -> Result<f64> {
    let domain = Domain::new(spec)?;
    check_cap(&domain, cap)?;
    let total = constrained_polynomial(&domain, vec![ALL_MASK; domain.blue.len()]);
    let mut allowed = vec![ALL_MASK; domain.blue.len()];
    for d in dominoes {
        match domain.blue_index(d.anchor) {
            Some(i) => allowed[i] &= bit(d.o),
            None => return Ok(0.0),
        }
    }
    let part = constrained_polynomial(&domain, allowed);
    Ok(exact_ratio(&part, &total, spec.a))
}

/// Probability that no red dot occupies any of the given blue-cell sites.
pub fn red_gap_probability_sites(spec: &DomainSpec, sites: &[XiEta]) -> Result<f64> {
    let domain = Domain::new(spec)?;
    check_cap(&domain, DEFAULT_CELL_CAP)?;
    let total = constrained_polynomial(&domain, vec![ALL_MASK; domain.blue.len()]);
    let mut allowed = vec![ALL_MASK; domain.blue.len()];
    for p in sites {
        let b = p.to_su()?;
        let i = domain
            .blue_index(b)
            .ok_or_else(|| Error::OutOfRange(format!("site ({}, {}) is not a blue cell", p.xi, p.eta)))?;
        allowed[i] &= bit(Orientation::HR) | bit(Orientation::VD);
    }
    let part = constrained_polynomial(&domain, allowed);
    Ok(exact_ratio(&part, &total, spec.a))
}

/// Gap probability for sites on a single line `ξ`, given by their `η` values.
pub fn red_gap_probability(spec: &DomainSpec, xi: i64, etas: &[i64]) -> Result<f64> {
    let sites: Vec<XiEta> = etas.iter().map(|&eta| XiEta::new(xi, eta)).collect();
    red_gap_probability_sites(spec, &sites)
}

/// Admissible red-dot sites (blue-cell centres) on the line `ξ`.
pub fn red_line_sites(domain: &Domain, xi: i64) -> Vec<XiEta> {
    let mut v: Vec<XiEta> = domain
        .blue
        .iter()
        .map(|b| b.to_xi_eta())
        .filter(|p| p.xi == xi)
        .collect();
    v.sort();
    v
}

/// Weight polynomial by the line-by-line transfer recursion (no cell cap).
pub fn transfer_polynomial(spec: &DomainSpec) -> Result<WeightPolynomial> {
    let domain = Domain::new(spec)?;
    let n = spec.n;
    let width = (spec.width() + 1) as usize;
    if width > 30 {
        return Err(Error::Unsupported(format!("profile width {width} exceeds 30")));
    }
    let present = |s: i64| -> u32 {
        let (lo, _) = domain.line_range(s);
        (0..width).fold(0u32, |acc, p| {
            if domain.contains(Su::new(s, lo + p as i64)) {
                acc | (1 << p)
            } else {
                acc
            }
        })
    };
    let mut states: HashMap<u32, WeightPolynomial> = HashMap::new();
    let mut one = WeightPolynomial::zero();
    one.add_monomial(0, 1);
    states.insert(0, one);
    for s in 0..=2 * n + 1 {
        let here = present(s);
        let next_present = if s < 2 * n + 1 { present(s + 1) } else { 0 };
        // positions on line s+1 reached from position p: (horizontal, vertical)
        let targets = |p: usize| -> [(Option<usize>, usize); 2] {
            if s % 2 == 0 {
                [(Some(p), 0), (Some(p + 1), 1)]
            } else {
                [(p.checked_sub(1), 0), (Some(p), 1)]
            }
        };
        let mut next: HashMap<u32, WeightPolynomial> = HashMap::new();
        for (mask, poly) in &states {
            if mask & !here != 0 {
                continue;
            }
            let free = here & !mask;
            let mut stack = vec![(0usize, 0u32, 0usize)];
            while let Some((p, out, v)) = stack.pop() {
                if p == width {
                    next.entry(out).or_default().add_shifted(poly, v);
                    continue;
                }
                if free & (1 << p) == 0 {
                    stack.push((p + 1, out, v));
                    continue;
                }
                for (t, dv) in targets(p) {
                    if let Some(t) = t {
                        if t < width && next_present & (1 << t) != 0 && out & (1 << t) == 0 {
                            stack.push((p + 1, out | (1 << t), v + dv));
                        }
                    }
                }
            }
        }
        states = next;
    }
    Ok(states.remove(&0).unwrap_or_default())
}
