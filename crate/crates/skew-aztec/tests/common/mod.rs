//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use skew_aztec::geometry::{Domain, DomainSpec};

/// `Ai(0)` and `−Ai′(0)`.
const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = 0.258_819_403_792_806_8;

/// Airy function from its Maclaurin series `Ai = c₁ f − c₂ g`.
pub fn airy_series(x: f64) -> f64 {
    let x3 = x * x * x;
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 0..200 {
        f += tf;
        g += tg;
        let k = k as f64;
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        if tf.abs() < 1e-30 && tg.abs() < 1e-30 {
            break;
        }
    }
    AI0 * f - AIP0 * g
}

/// Weighted count of domino covers of an arbitrary set of unit squares
/// `(x, y)`, each vertical domino weighted by `a`, by plain recursion on the
/// lowest-then-leftmost uncovered square.
pub fn brute_force_weight(cells: &BTreeSet<(i64, i64)>, a: f64) -> (u64, f64) {
    fn go(free: &mut BTreeSet<(i64, i64)>, a: f64) -> (u64, f64) {
        let Some(&(x, y)) = free.iter().min_by_key(|&&(x, y)| (y, x)) else {
            return (1, 1.0);
        };
        free.remove(&(x, y));
        let mut total = (0, 0.0);
        for (nb, w) in [((x + 1, y), 1.0), ((x, y + 1), a)] {
            if free.remove(&nb) {
                let (c, z) = go(free, a);
                total.0 += c;
                total.1 += w * z;
                free.insert(nb);
            }
        }
        free.insert((x, y));
        total
    }
    go(&mut cells.clone(), a)
}

/// Grid squares of a skew-Aztec rectangle.
pub fn grid_cells(spec: &DomainSpec) -> BTreeSet<(i64, i64)> {
    let d = Domain::new(spec).unwrap();
    d.blue.iter().chain(d.white.iter()).map(|c| c.to_grid()).collect()
}

/// Small tilable specs used throughout the tests.
pub fn small_specs(a: f64) -> Vec<DomainSpec> {
    [(1, 1, 1), (2, 2, 2), (3, 3, 2), (3, 1, 3), (2, 0, 1), (4, 2, 2), (3, 4, 2), (2, 3, 3)]
        .iter()
        .map(|&(n, m, mm)| DomainSpec::new(n, m, mm, a).unwrap())
        .collect()
}

/// Chi-square threshold `dof + 3√(2 dof)`: the mean plus three standard deviations.
pub fn chi_square_threshold(dof: usize) -> f64 {
    let d = dof as f64;
    d + 3.0 * (2.0 * d).sqrt()
}
