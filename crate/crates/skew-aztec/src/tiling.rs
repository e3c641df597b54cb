//! Domino covers, height functions, level-line path systems and dot processes.
//!
//! A domino is stored on its blue cell `(s, u)` together with the direction of
//! its white partner: `HL → (s+1, u)` (right), `VD → (s+1, u+1)` (above),
//! `HR → (s−1, u)` (left) and `VU → (s−1, u−1)` (below).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec, Su, XiEta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    HL,
    HR,
    VU,
    VD,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [Orientation::HL, Orientation::HR, Orientation::VU, Orientation::VD];

    /// Offset `(ds, du)` from the blue cell to its white partner.
    pub fn offset(self) -> (i64, i64) {
        match self {
            Orientation::HL => (1, 0),
            Orientation::VD => (1, 1),
            Orientation::HR => (-1, 0),
            Orientation::VU => (-1, -1),
        }
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, Orientation::VU | Orientation::VD)
    }

    /// Label of the same domino turned by 180°.
    pub fn rotated(self) -> Orientation {
        match self {
            Orientation::HL => Orientation::HR,
            Orientation::HR => Orientation::HL,
            Orientation::VU => Orientation::VD,
            Orientation::VD => Orientation::VU,
        }
    }

    pub fn partner(self, b: Su) -> Su {
        let (ds, du) = self.offset();
        Su::new(b.s + ds, b.u + du)
    }

    pub fn label(self) -> &'static str {
        match self {
            Orientation::HL => "HL",
            Orientation::HR => "HR",
            Orientation::VU => "VU",
            Orientation::VD => "VD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domino {
    pub anchor: Su,
    pub o: Orientation,
}

impl Domino {
    pub fn new(anchor: Su, o: Orientation) -> Self {
        Domino { anchor, o }
    }

    pub fn white(&self) -> Su {
        self.o.partner(self.anchor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathColor {
    Red,
    Blue,
    Green,
}

impl PathColor {
    pub const ALL: [PathColor; 3] = [PathColor::Red, PathColor::Blue, PathColor::Green];

    /// Orientations that put a dot of this colour on the blue cell.
    pub fn dotted(self, o: Orientation) -> bool {
        match self {
            PathColor::Red => matches!(o, Orientation::HL | Orientation::VU),
            PathColor::Blue => matches!(o, Orientation::HL | Orientation::VD),
            PathColor::Green => matches!(o, Orientation::HR | Orientation::VU),
        }
    }

    fn vertex_class(self) -> i64 {
        match self {
            PathColor::Red => 0,
            PathColor::Blue | PathColor::Green => 1,
        }
    }

    fn thurston_sign(self) -> i64 {
        match self {
            PathColor::Red | PathColor::Blue => -1,
            PathColor::Green => 1,
        }
    }
}

/// Level lines of one colour; each path lists the centres of the cells it crosses.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSystem {
    pub color: PathColor,
    pub paths: Vec<Vec<XiEta>>,
}

/// Dot positions (blue-cell centres) of one colour.
#[derive(Debug, Clone, PartialEq)]
pub struct DotProcess {
    pub color: PathColor,
    pub dots: BTreeSet<XiEta>,
}

impl DotProcess {
    /// Dot count on each line `ξ = const` (red) or `η = const` (blue, green).
    pub fn counts_per_line(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for d in &self.dots {
            let key = match self.color {
                PathColor::Red => d.xi,
                _ => d.eta,
            };
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

/// Integer heights on one vertex sublattice; level lines sit at `h + 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightFunction {
    pub color: PathColor,
    pub values: BTreeMap<(i64, i64), i64>,
}

/// A complete domino cover.
#[derive(Debug, Clone, PartialEq)]
pub struct Tiling {
    domain: Arc<Domain>,
    orient: Vec<Orientation>,
}

impl Tiling {
    /// Builds a tiling from one orientation per blue cell (in `domain.blue` order).
    pub fn new(domain: Arc<Domain>, orient: Vec<Orientation>) -> Result<Self> {
        if orient.len() != domain.blue.len() {
            return Err(Error::InvalidTiling(format!(
                "{} orientations for {} blue cells",
                orient.len(),
                domain.blue.len()
            )));
        }
        let mut seen = vec![false; domain.white.len()];
        for (b, o) in domain.blue.iter().zip(&orient) {
            let w = o.partner(*b);
            let wi = domain
                .white_index(w)
                .ok_or_else(|| Error::InvalidTiling(format!("partner of {b:?} via {o:?} is outside")))?;
            if seen[wi] {
                return Err(Error::InvalidTiling(format!("white cell {w:?} covered twice")));
            }
            seen[wi] = true;
        }
        Ok(Tiling { domain, orient })
    }

    pub fn from_dominoes(spec: &DomainSpec, dominoes: &[Domino]) -> Result<Self> {
        let domain = Arc::new(Domain::new(spec)?);
        let mut orient = vec![None; domain.blue.len()];
        for d in dominoes {
            let i = domain
                .blue_index(d.anchor)
                .ok_or_else(|| Error::InvalidTiling(format!("anchor {:?} is not a blue cell", d.anchor)))?;
            if orient[i].replace(d.o).is_some() {
                return Err(Error::InvalidTiling(format!("blue cell {:?} covered twice", d.anchor)));
            }
        }
        let orient = orient
            .into_iter()
            .enumerate()
            .map(|(i, o)| o.ok_or_else(|| Error::InvalidTiling(format!("blue cell {:?} uncovered", domain.blue[i]))))
            .collect::<Result<Vec<_>>>()?;
        Tiling::new(domain, orient)
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.domain.spec
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orient
    }

    pub fn orientation_at(&self, b: Su) -> Option<Orientation> {
        self.domain.blue_index(b).map(|i| self.orient[i])
    }

    /// Dominoes in stable `(η, ξ)` order.
    pub fn dominoes(&self) -> Vec<Domino> {
        let mut v: Vec<Domino> = self
            .domain
            .blue
            .iter()
            .zip(&self.orient)
            .map(|(b, o)| Domino::new(*b, *o))
            .collect();
        v.sort_by_key(|d| {
            let p = d.anchor.to_xi_eta();
            (p.eta, p.xi)
        });
        v
    }

    pub fn vertical_count(&self) -> usize {
        self.orient.iter().filter(|o| o.is_vertical()).count()
    }

    /// `a^(#vertical dominoes)`.
    pub fn weight(&self) -> f64 {
        self.spec().a.powi(self.vertical_count() as i32)
    }

    /// The orientation labels turned by 180°.
    pub fn rotated_labels(&self) -> Vec<Orientation> {
        self.orient.iter().map(|o| o.rotated()).collect()
    }

    pub fn dots_of(&self, color: PathColor) -> DotProcess {
        dots_from_labels(&self.domain, &self.orient, color)
    }

    /// Thurston height on every corner of the region in grid coordinates.
    pub fn thurston_height(&self) -> Result<HashMap<(i64, i64), i64>> {
        let mut partner: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
        for (b, o) in self.domain.blue.iter().zip(&self.orient) {
            let bg = b.to_grid();
            let wg = o.partner(*b).to_grid();
            partner.insert(bg, wg);
            partner.insert(wg, bg);
        }
        let mut adj: HashMap<(i64, i64), Vec<((i64, i64), i64)>> = HashMap::new();
        for c in self.domain.blue.iter().chain(self.domain.white.iter()) {
            let (x, y) = c.to_grid();
            let base = if c.is_blue() { 1 } else { -1 };
            let corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)];
            let across = [(x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)];
            for k in 0..4 {
                let (v1, v2) = (corners[k], corners[(k + 1) % 4]);
                let dh = if partner.get(&(x, y)) == Some(&across[k]) { -3 * base } else { base };
                adj.entry(v1).or_default().push((v2, dh));
                adj.entry(v2).or_default().push((v1, -dh));
            }
        }
        let start = *adj.keys().min().ok_or_else(|| Error::InvalidTiling("empty region".into()))?;
        let mut h = HashMap::with_capacity(adj.len());
        h.insert(start, 0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let hv = h[&v];
            for &(w, dh) in &adj[&v] {
                match h.get(&w) {
                    None => {
                        h.insert(w, hv + dh);
                        queue.push_back(w);
                    }
                    Some(&hw) if hw != hv + dh => {
                        return Err(Error::InvalidTiling(format!("inconsistent height at {w:?}")));
                    }
                    _ => {}
                }
            }
        }
        Ok(h)
    }

    /// Height function of the given colour on its vertex sublattice.
    ///
    /// Red and blue heights are `(2Y − h_T)/4`, green is `(2Y + h_T)/4`, each shifted
    /// to vanish at the lowest corner of its sublattice. Red lives on corners with
    /// `X − Y` even, blue and green on corners with `X − Y` odd.
    pub fn height_function(&self, color: PathColor) -> Result<HeightFunction> {
        let h = self.thurston_height()?;
        let class = color.vertex_class();
        let sign = color.thurston_sign();
        let mut raw: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        for (&(x, y), &ht) in &h {
            if (x - y).rem_euclid(2) == class {
                raw.insert((x, y), 2 * y + sign * ht);
            }
        }
        let base = *raw.values().next().ok_or_else(|| Error::InvalidTiling("empty sublattice".into()))?;
        let mut values = BTreeMap::new();
        for (k, v) in raw {
            if (v - base).rem_euclid(4) != 0 {
                return Err(Error::InvalidTiling(format!("non-integral height at {k:?}")));
            }
            values.insert(k, (v - base) / 4);
        }
        Ok(HeightFunction { color, values })
    }

    /// Level lines of the height function of the given colour.
    pub fn paths_of(&self, color: PathColor) -> Result<PathSystem> {
        let hf = self.height_function(color)?;
        let class = color.vertex_class();
        let cells: Vec<Su> = self.domain.blue.iter().chain(self.domain.white.iter()).copied().collect();
        // crossing cells with their level and the two corners they link through
        let mut crossing: HashMap<(i64, i64), (i64, [(i64, i64); 2])> = HashMap::new();
        for c in &cells {
            let (x, y) = c.to_grid();
            let (p, q, faces) = if (x - y).rem_euclid(2) == class {
                ((x, y), (x + 1, y + 1), [(x + 1, y), (x, y + 1)])
            } else {
                ((x + 1, y), (x, y + 1), [(x, y), (x + 1, y + 1)])
            };
            let (hp, hq) = (hf.values[&p], hf.values[&q]);
            match (hq - hp).abs() {
                0 => {}
                1 => {
                    crossing.insert((x, y), (hp.min(hq), faces));
                }
                _ => return Err(Error::InvalidTiling(format!("height jump across cell {c:?}"))),
            }
        }
        let mut by_face: BTreeMap<((i64, i64), i64), Vec<(i64, i64)>> = BTreeMap::new();
        for (&cell, &(level, faces)) in &crossing {
            for f in faces {
                by_face.entry((f, level)).or_default().push(cell);
            }
        }
        let mut adj: HashMap<(i64, i64), Vec<(i64, i64)>> = crossing.keys().map(|&c| (c, Vec::new())).collect();
        for ((f, _), mut cs) in by_face {
            if cs.len() < 2 {
                continue;
            }
            // cyclic order around the corner f: lower-left, lower-right, upper-right, upper-left
            let order = [(f.0 - 1, f.1 - 1), (f.0, f.1 - 1), (f.0, f.1), (f.0 - 1, f.1)];
            cs.sort_by_key(|c| order.iter().position(|o| o == c));
            for pair in cs.chunks(2) {
                if pair.len() == 2 {
                    adj.get_mut(&pair[0]).unwrap().push(pair[1]);
                    adj.get_mut(&pair[1]).unwrap().push(pair[0]);
                }
            }
        }
        let centre = |g: (i64, i64)| Su::from_grid(g.0, g.1).to_xi_eta();
        let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
        let mut paths = Vec::new();
        let mut starts: Vec<(i64, i64)> = adj.iter().filter(|(_, v)| v.len() <= 1).map(|(k, _)| *k).collect();
        starts.sort();
        let loop_starts: Vec<(i64, i64)> = {
            let mut v: Vec<_> = adj.keys().copied().collect();
            v.sort();
            v
        };
        for start in starts.into_iter().chain(loop_starts) {
            if seen.contains(&start) {
                continue;
            }
            let mut path = Vec::new();
            let mut prev: Option<(i64, i64)> = None;
            let mut cur = start;
            loop {
                seen.insert(cur);
                path.push(centre(cur));
                let next = adj[&cur].iter().copied().find(|c| Some(*c) != prev && !seen.contains(c));
                match next {
                    Some(nx) => {
                        prev = Some(cur);
                        cur = nx;
                    }
                    None => break,
                }
            }
            let first = path[0];
            let last = *path.last().unwrap();
            if (last.eta, last.xi) < (first.eta, first.xi) {
                path.reverse();
            }
            paths.push(path);
        }
        paths.sort_by_key(|p| (p[0].eta, p[0].xi));
        Ok(PathSystem { color, paths })
    }
}

/// Dot set of a colour read off an arbitrary labelling of the blue cells.
pub fn dots_from_labels(domain: &Domain, labels: &[Orientation], color: PathColor) -> DotProcess {
    let dots = domain
        .blue
        .iter()
        .zip(labels)
        .filter(|(_, o)| color.dotted(**o))
        .map(|(b, _)| b.to_xi_eta())
        .collect();
    DotProcess { color, dots }
}

/// JSON record of a single domino.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominoRecord {
    pub xi: i64,
    pub eta: i64,
    pub o: Orientation,
}

impl From<Domino> for DominoRecord {
    fn from(d: Domino) -> Self {
        let p = d.anchor.to_xi_eta();
        DominoRecord { xi: p.xi, eta: p.eta, o: d.o }
    }
}

impl DominoRecord {
    pub fn to_domino(self) -> Result<Domino> {
        Ok(Domino::new(XiEta::new(self.xi, self.eta).to_su()?, self.o))
    }
}

impl Tiling {
    pub fn to_records(&self) -> Vec<DominoRecord> {
        self.dominoes().into_iter().map(DominoRecord::from).collect()
    }

    pub fn from_records(spec: &DomainSpec, recs: &[DominoRecord]) -> Result<Self> {
        let ds = recs.iter().map(|r| r.to_domino()).collect::<Result<Vec<_>>>()?;
        Tiling::from_dominoes(spec, &ds)
    }
}
