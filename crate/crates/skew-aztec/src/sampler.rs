//! Metropolis flip chain on tilings with stationary law proportional to
//! `a^(#vertical dominoes)`, started from the maximal green path family.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec, Su};
use crate::tiling::{Orientation, PathColor, Tiling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    /// Record the vertical-domino count every this many steps (`0` disables).
    pub report_every: u64,
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.burn_in > self.steps {
            return Err(Error::Domain(format!(
                "burn_in {} exceeds steps {}",
                self.burn_in, self.steps
            )));
        }
        Ok(())
    }
}

/// Positions `x_k(s)` of the `M` green paths on every line, the greatest family
/// satisfying the step, ordering and boundary constraints.
pub fn maximal_green_paths(spec: &DomainSpec) -> Result<Vec<Vec<i64>>> {
    spec.validate()?;
    let (n, big_m) = (spec.n, spec.big_m);
    let k = spec.width();
    let delta = n - spec.m;
    let lines = (2 * n + 2) as usize;
    let mm = big_m as usize;
    let var = |s: usize, j: usize| s * mm + j;
    let fixed = |s: usize, j: usize| -> Option<i64> {
        if s == 0 {
            Some(-(j as i64))
        } else if s == lines - 1 {
            Some(delta - j as i64)
        } else {
            None
        }
    };
    let mut x = vec![0i64; lines * mm];
    let mut lower = vec![0i64; lines * mm];
    for s in 0..lines {
        for j in 0..mm {
            let (lo, hi) = (s as i64 / 2 - k, s as i64 / 2);
            x[var(s, j)] = fixed(s, j).unwrap_or(hi);
            lower[var(s, j)] = fixed(s, j).unwrap_or(lo);
        }
    }
    // constraints x[i] ≤ x[j] + c
    let mut cons: Vec<(usize, usize, i64)> = Vec::new();
    for s in 0..lines - 1 {
        for j in 0..mm {
            let (a, b) = (var(s, j), var(s + 1, j));
            if s % 2 == 1 {
                cons.push((b, a, 1));
                cons.push((a, b, 0));
            } else {
                cons.push((b, a, 0));
                if j + 1 < mm {
                    cons.push((var(s, j + 1), var(s + 1, j), -1));
                }
            }
        }
    }
    for s in 0..lines {
        for j in 0..mm.saturating_sub(1) {
            cons.push((var(s, j + 1), var(s, j), -1));
        }
    }
    let mut changed = true;
    let mut passes = 0;
    while changed {
        changed = false;
        passes += 1;
        for &(i, j, c) in &cons {
            if x[i] > x[j] + c {
                x[i] = x[j] + c;
                changed = true;
            }
        }
        if passes > x.len() + 1 {
            break;
        }
    }
    let feasible = !changed
        && x.iter().zip(&lower).all(|(v, l)| v >= l)
        && cons.iter().all(|&(i, j, c)| x[i] <= x[j] + c);
    if !feasible {
        return Err(Error::NotTilable {
            n,
            m: spec.m,
            big_m,
        });
    }
    Ok((0..lines).map(|s| x[s * mm..(s + 1) * mm].to_vec()).collect())
}

/// The deterministic tiling whose green paths are the maximal family.
pub fn initial_tiling(spec: &DomainSpec) -> Result<Tiling> {
    let paths = maximal_green_paths(spec)?;
    let domain = Arc::new(Domain::new(spec)?);
    let n = spec.n;
    let mut orient = vec![Orientation::HL; domain.blue.len()];
    let set = |orient: &mut Vec<Orientation>, b: Su, o: Orientation| -> Result<()> {
        let i = domain
            .blue_index(b)
            .ok_or_else(|| Error::InvalidTiling(format!("green path leaves the domain at {b:?}")))?;
        orient[i] = o;
        Ok(())
    };
    for s in (0..=2 * n).step_by(2) {
        let here = &paths[s as usize];
        let next = &paths[s as usize + 1];
        for j in 0..here.len() {
            for u in next[j]..here[j] {
                set(&mut orient, Su::new(s, u), Orientation::VD)?;
            }
        }
    }
    for s in (1..2 * n).step_by(2) {
        let here = &paths[s as usize];
        let next = &paths[s as usize + 1];
        for j in 0..here.len() {
            let o = if next[j] == here[j] { Orientation::HR } else { Orientation::VU };
            set(&mut orient, Su::new(s + 1, next[j]), o)?;
        }
    }
    Tiling::new(domain, orient)
}

/// Mutable chain state: one orientation per blue cell.
#[derive(Debug, Clone)]
pub struct ChainState {
    domain: Arc<Domain>,
    orient: Vec<Orientation>,
    bounds: (i64, i64, i64, i64),
    a2: f64,
}

impl ChainState {
    pub fn new(t: &Tiling) -> Self {
        let domain = t.domain().clone();
        let bounds = domain.grid_bounds();
        let a = domain.spec.a;
        ChainState {
            orient: t.orientations().to_vec(),
            bounds,
            a2: a * a,
            domain,
        }
    }

    pub fn tiling(&self) -> Tiling {
        Tiling::new(self.domain.clone(), self.orient.clone()).expect("chain preserves tilings")
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orient
    }

    pub fn vertical_count(&self) -> usize {
        self.orient.iter().filter(|o| o.is_vertical()).count()
    }

    /// The flipped orientations of the two blue cells of the block with lower-left
    /// grid corner `(x, y)`, if the block holds two parallel dominoes.
    pub fn flip_at(&self, x: i64, y: i64) -> Option<[(usize, Orientation); 2]> {
        let cells = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
        let mut blues = cells
            .iter()
            .map(|&(gx, gy)| Su::from_grid(gx, gy))
            .filter(|c| c.is_blue());
        let b1 = blues.next()?;
        let b2 = blues.next()?;
        let i1 = self.domain.blue_index(b1)?;
        let i2 = self.domain.blue_index(b2)?;
        let (o1, o2) = (self.orient[i1], self.orient[i2]);
        if o1.is_vertical() != o2.is_vertical() {
            return None;
        }
        let inside = |b: Su, o: Orientation| {
            let (gx, gy) = o.partner(b).to_grid();
            (gx == x || gx == x + 1) && (gy == y || gy == y + 1)
        };
        if !inside(b1, o1) || !inside(b2, o2) {
            return None;
        }
        let turn = |b: Su, o: Orientation| {
            let (bx, by) = b.to_grid();
            if o.is_vertical() {
                if bx == x {
                    Orientation::HL
                } else {
                    Orientation::HR
                }
            } else if by == y {
                Orientation::VD
            } else {
                Orientation::VU
            }
        };
        Some([(i1, turn(b1, o1)), (i2, turn(b2, o2))])
    }

    /// One Metropolis step: uniform block, rotation accepted with `min(1, a^{±2})`.
    /// Returns whether the state changed.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> bool {
        let (x0, x1, y0, y1) = self.bounds;
        let x = rng.gen_range(x0..x1.max(x0 + 1));
        let y = rng.gen_range(y0..y1.max(y0 + 1));
        let u: f64 = rng.gen();
        let Some(flip) = self.flip_at(x, y) else {
            return false;
        };
        let to_vertical = flip[0].1.is_vertical();
        if to_vertical && u >= self.a2 {
            return false;
        }
        for (i, o) in flip {
            self.orient[i] = o;
        }
        true
    }
}

/// One chain step on an immutable tiling.
pub fn step<R: Rng>(t: &Tiling, rng: &mut R) -> Tiling {
    let mut st = ChainState::new(t);
    st.step(rng);
    st.tiling()
}

#[derive(Debug, Clone)]
pub struct SampleResult {
    pub tiling: Tiling,
    pub accepted: u64,
    /// `(ξ, red dots on that line)` for the returned tiling.
    pub red_counts: BTreeMap<i64, usize>,
    /// `(step, vertical dominoes)` every `report_every` steps.
    pub trajectory: Vec<(u64, usize)>,
}

/// Runs `burn_in + steps` flips from the initial tiling with a ChaCha8 generator.
pub fn sample(spec: &DomainSpec, cfg: &ChainConfig) -> Result<SampleResult> {
    cfg.validate()?;
    let t0 = initial_tiling(spec)?;
    let mut st = ChainState::new(&t0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut accepted = 0;
    let mut trajectory = Vec::new();
    let total = cfg.burn_in + cfg.steps;
    for k in 0..total {
        if st.step(&mut rng) {
            accepted += 1;
        }
        if cfg.report_every > 0 && (k + 1) % cfg.report_every == 0 {
            trajectory.push((k + 1, st.vertical_count()));
        }
    }
    let tiling = st.tiling();
    let red_counts = tiling.dots_of(PathColor::Red).counts_per_line();
    Ok(SampleResult {
        tiling,
        accepted,
        red_counts,
        trajectory,
    })
}
