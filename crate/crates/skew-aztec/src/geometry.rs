//! The skew-Aztec rectangle: parameters, derived integers, coordinates and cells.
//!
//! Cells are indexed by `(s, u)`. Blue cells live on even lines `s = 0, 2, .., 2n`,
//! white cells on odd lines `s = 1, 3, .., 2n+1`. Line `s` carries
//! `u ∈ [⌊s/2⌋ − K, ⌊s/2⌋]` with `K = m + M − 1`, except that the `M` blue cells
//! `u ∈ [1−M, 0]` of line `0` and the `M` white cells `u ∈ [Δ−M+1, Δ]` of
//! line `2n+1` are cut away.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The domain parameters together with the vertical-domino weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub n: i64,
    pub m: i64,
    #[serde(rename = "M")]
    pub big_m: i64,
    pub a: f64,
}

/// The integers Δ, σ, κ, ρ and 𝔯 attached to `(n, m, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub delta: i64,
    pub sigma: i64,
    pub kappa: i64,
    pub rho: i64,
    pub r: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TilingCase {
    Case1,
    Case2,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilabilityVerdict {
    pub tilable: bool,
    pub case: TilingCase,
    pub rho: i64,
    pub r: i64,
}

fn check_nm(n: i64, m: i64, big_m: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain(format!("n = {n} must be at least 1")));
    }
    if m < 0 {
        return Err(Error::Domain(format!("m = {m} must be non-negative")));
    }
    if big_m < 1 {
        return Err(Error::Domain(format!("M = {big_m} must be at least 1")));
    }
    Ok(())
}

/// Δ, σ, κ, ρ and 𝔯 for `(n, m, M)`.
pub fn derived_params(n: i64, m: i64, big_m: i64) -> Result<DerivedParams> {
    check_nm(n, m, big_m)?;
    let delta = n - m;
    let sigma = n - big_m + delta + 1;
    let rho = (m - (big_m - 1)).abs();
    let r = (n - (big_m - 1)).max(n - m);
    debug_assert_eq!(rho, (sigma - 2 * delta).abs());
    debug_assert_eq!(r, (sigma - delta).max(delta));
    Ok(DerivedParams {
        delta,
        sigma,
        kappa: (-delta).max(0),
        rho,
        r,
    })
}

/// Tilability decision from the two admissible parameter cases.
pub fn is_tilable(n: i64, m: i64, big_m: i64) -> Result<TilabilityVerdict> {
    let d = derived_params(n, m, big_m)?;
    let case = if 1 <= big_m && big_m <= m.min(n + 1) {
        TilingCase::Case1
    } else if 0 <= m && m <= (big_m - 1).min(n) {
        TilingCase::Case2
    } else {
        TilingCase::None
    };
    Ok(TilabilityVerdict {
        tilable: case != TilingCase::None,
        case,
        rho: d.rho,
        r: d.r,
    })
}

impl DomainSpec {
    pub fn new(n: i64, m: i64, big_m: i64, a: f64) -> Result<Self> {
        let spec = DomainSpec { n, m, big_m, a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_nm(self.n, self.m, self.big_m)?;
        if !(self.a > 0.0 && self.a <= 1.0) {
            return Err(Error::Domain(format!("weight a = {} must lie in (0, 1]", self.a)));
        }
        Ok(())
    }

    pub fn derived(&self) -> DerivedParams {
        derived_params(self.n, self.m, self.big_m).expect("validated spec")
    }

    pub fn verdict(&self) -> TilabilityVerdict {
        is_tilable(self.n, self.m, self.big_m).expect("validated spec")
    }

    /// `K = m + M − 1`, so that every line carries `K + 1` cell positions.
    pub fn width(&self) -> i64 {
        self.m + self.big_m - 1
    }

    /// Number of cells of either colour.
    pub fn cells_per_colour(&self) -> usize {
        ((self.n + 1) * (self.m + self.big_m) - self.big_m) as usize
    }

    /// Admissible range of the `(ξ, η)` coordinates.
    pub fn xi_range(&self) -> (i64, i64) {
        (-1, 2 * (self.m + self.big_m))
    }

    pub fn eta_range(&self) -> (i64, i64) {
        (-2, 2 * self.n + 1)
    }

    pub fn with_weight(&self, a: f64) -> Self {
        DomainSpec { a, ..*self }
    }
}

/// A point in the `(s, u)` system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Su {
    pub s: i64,
    pub u: i64,
}

/// A point in the `(ξ, η)` system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct XiEta {
    pub xi: i64,
    pub eta: i64,
}

impl Su {
    pub fn new(s: i64, u: i64) -> Self {
        Su { s, u }
    }

    pub fn is_blue(&self) -> bool {
        self.s.rem_euclid(2) == 0
    }

    /// `(ξ, η) = (s − 2u, s − 1)`.
    pub fn to_xi_eta(self) -> XiEta {
        XiEta {
            xi: self.s - 2 * self.u,
            eta: self.s - 1,
        }
    }

    /// Lower-left corner of the cell in the unrotated square grid, `(X, Y) = (s − u, u)`.
    pub fn to_grid(self) -> (i64, i64) {
        (self.s - self.u, self.u)
    }

    pub fn from_grid(x: i64, y: i64) -> Self {
        Su { s: x + y, u: y }
    }
}

impl XiEta {
    pub fn new(xi: i64, eta: i64) -> Self {
        XiEta { xi, eta }
    }

    /// `(s, u) = (η + 1, (η − ξ + 1)/2)`; requires `η − ξ` odd.
    pub fn to_su(self) -> Result<Su> {
        let d = self.eta - self.xi + 1;
        if d.rem_euclid(2) != 0 {
            return Err(Error::OutOfRange(format!(
                "(xi, eta) = ({}, {}) is not a cell centre",
                self.xi, self.eta
            )));
        }
        Ok(Su {
            s: self.eta + 1,
            u: d / 2,
        })
    }

    pub fn is_blue_centre(&self) -> bool {
        self.xi.rem_euclid(2) == 0 && self.eta.rem_euclid(2) == 1
    }
}

/// Range-checked `(ξ, η) → (s, u)`.
pub fn xi_eta_to_su(spec: &DomainSpec, c: XiEta) -> Result<Su> {
    let (x0, x1) = spec.xi_range();
    let (e0, e1) = spec.eta_range();
    if c.xi < x0 || c.xi > x1 || c.eta < e0 || c.eta > e1 {
        return Err(Error::OutOfRange(format!("(xi, eta) = ({}, {})", c.xi, c.eta)));
    }
    c.to_su()
}

/// Range-checked `(s, u) → (ξ, η)`.
pub fn su_to_xi_eta(spec: &DomainSpec, c: Su) -> Result<XiEta> {
    let p = c.to_xi_eta();
    let (x0, x1) = spec.xi_range();
    let (e0, e1) = spec.eta_range();
    if p.xi < x0 || p.xi > x1 || p.eta < e0 || p.eta > e1 {
        return Err(Error::OutOfRange(format!("(s, u) = ({}, {})", c.s, c.u)));
    }
    Ok(p)
}

/// Expected red-dot count on each line `ξ = 2k`, `k = 0..=K`.
///
/// The count is `n + 1 − min(k+1, M) + max(0, k − m)`: equal to 𝔯 inside the
/// strip and growing by one per line outside it.
pub fn red_dot_profile(spec: &DomainSpec) -> Result<Vec<(i64, usize)>> {
    let v = spec.verdict();
    if !v.tilable {
        return Err(Error::NotTilable {
            n: spec.n,
            m: spec.m,
            big_m: spec.big_m,
        });
    }
    Ok(raw_profile(spec.n, spec.m, spec.big_m)
        .into_iter()
        .map(|(xi, c)| (xi, c as usize))
        .collect())
}

fn raw_profile(n: i64, m: i64, big_m: i64) -> Vec<(i64, i64)> {
    let k_max = m + big_m - 1;
    (0..=k_max)
        .map(|k| (2 * k, n + 1 - (k + 1).min(big_m) + (k - m).max(0)))
        .collect()
}

/// The cell set of a skew-Aztec rectangle with constant-time `(s, u)` lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub spec: DomainSpec,
    pub blue: Vec<Su>,
    pub white: Vec<Su>,
    index: Vec<Vec<Option<usize>>>,
}

impl Domain {
    pub fn new(spec: &DomainSpec) -> Result<Self> {
        spec.validate()?;
        let (n, big_m) = (spec.n, spec.big_m);
        let k = spec.width();
        let delta = n - spec.m;
        let mut blue = Vec::new();
        let mut white = Vec::new();
        let mut index = Vec::with_capacity((2 * n + 2) as usize);
        for s in 0..=2 * n + 1 {
            let lo = s.div_euclid(2) - k;
            let mut row = vec![None; (k + 1) as usize];
            for u in lo..=lo + k {
                let cut = (s == 0 && (1 - big_m..=0).contains(&u))
                    || (s == 2 * n + 1 && (delta - big_m + 1..=delta).contains(&u));
                if cut {
                    continue;
                }
                let list = if s % 2 == 0 { &mut blue } else { &mut white };
                row[(u - lo) as usize] = Some(list.len());
                list.push(Su { s, u });
            }
            index.push(row);
        }
        if blue.len() != white.len() {
            return Err(Error::Domain(format!(
                "unbalanced colouring: {} blue vs {} white",
                blue.len(),
                white.len()
            )));
        }
        Ok(Domain {
            spec: *spec,
            blue,
            white,
            index,
        })
    }

    /// `u`-range `[lo, hi]` of line `s` before the cuts.
    pub fn line_range(&self, s: i64) -> (i64, i64) {
        let lo = s.div_euclid(2) - self.spec.width();
        (lo, lo + self.spec.width())
    }

    fn lookup(&self, c: Su) -> Option<usize> {
        if c.s < 0 || c.s > 2 * self.spec.n + 1 {
            return None;
        }
        let (lo, hi) = self.line_range(c.s);
        if c.u < lo || c.u > hi {
            return None;
        }
        self.index[c.s as usize][(c.u - lo) as usize]
    }

    pub fn blue_index(&self, c: Su) -> Option<usize> {
        if c.is_blue() {
            self.lookup(c)
        } else {
            None
        }
    }

    pub fn white_index(&self, c: Su) -> Option<usize> {
        if c.is_blue() {
            None
        } else {
            self.lookup(c)
        }
    }

    pub fn contains(&self, c: Su) -> bool {
        self.lookup(c).is_some()
    }

    pub fn size(&self) -> usize {
        self.blue.len()
    }

    /// Bounding box `(x_min, x_max, y_min, y_max)` of the cells in grid coordinates.
    pub fn grid_bounds(&self) -> (i64, i64, i64, i64) {
        let mut b = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for c in self.blue.iter().chain(self.white.iter()) {
            let (x, y) = c.to_grid();
            b.0 = b.0.min(x);
            b.1 = b.1.max(x);
            b.2 = b.2.min(y);
            b.3 = b.3.max(y);
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_parameter_sets() {
        let d = derived_params(8, 10, 3).unwrap();
        assert_eq!((d.delta, d.sigma, d.rho, d.r), (-2, 4, 8, 6));
        let d = derived_params(8, 5, 8).unwrap();
        assert_eq!((d.delta, d.sigma, d.rho, d.r), (3, 4, 2, 3));
        let d = derived_params(100, 150, 90).unwrap();
        assert_eq!((d.rho, d.r), (61, 11));
        let d = derived_params(190, 150, 150).unwrap();
        assert_eq!((d.rho, d.r), (1, 41));
    }

    #[test]
    fn verdicts() {
        assert_eq!(is_tilable(8, 10, 3).unwrap().case, TilingCase::Case1);
        assert_eq!(is_tilable(8, 5, 8).unwrap().case, TilingCase::Case2);
        assert!(!is_tilable(2, 5, 9).unwrap().tilable);
        assert!(derived_params(0, 1, 1).is_err());
        assert!(derived_params(1, -1, 1).is_err());
        assert!(derived_params(1, 1, 0).is_err());
    }

    #[test]
    fn coordinate_examples() {
        assert_eq!(XiEta::new(0, -1).to_su().unwrap(), Su::new(0, 0));
        assert_eq!(XiEta::new(0, 1).to_su().unwrap(), Su::new(2, 1));
        assert!(XiEta::new(0, 0).to_su().is_err());
        let spec = DomainSpec::new(8, 10, 3, 1.0).unwrap();
        assert!(xi_eta_to_su(&spec, XiEta::new(0, 40)).is_err());
    }

    #[test]
    fn figure_one_profile() {
        let spec = DomainSpec::new(8, 10, 3, 1.0).unwrap();
        let p = red_dot_profile(&spec).unwrap();
        let counts: Vec<usize> = p.iter().map(|x| x.1).collect();
        assert_eq!(counts, vec![8, 7, 6, 6, 6, 6, 6, 6, 6, 6, 6, 7, 8]);
        assert_eq!(counts.iter().filter(|&&c| c == 6).count(), 9);
    }

    #[test]
    fn degenerate_strip() {
        let spec = DomainSpec::new(5, 2, 3, 1.0).unwrap();
        let d = spec.derived();
        assert_eq!(d.rho, 0);
        let p = red_dot_profile(&spec).unwrap();
        assert_eq!(p.iter().filter(|x| x.1 as i64 == d.r).count(), 1);
    }

    #[test]
    fn balanced_cells() {
        for (n, m, big_m) in [(3, 3, 2), (2, 5, 9), (8, 10, 3), (4, 0, 2)] {
            let spec = DomainSpec::new(n, m, big_m, 1.0).unwrap();
            let d = Domain::new(&spec).unwrap();
            assert_eq!(d.blue.len(), spec.cells_per_colour());
            assert_eq!(d.white.len(), spec.cells_per_colour());
        }
    }
}
