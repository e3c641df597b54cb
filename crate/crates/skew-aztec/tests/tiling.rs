mod common;

use std::collections::{BTreeMap, BTreeSet};

use skew_aztec::geometry::*;
use skew_aztec::oracle::enumerate;
use skew_aztec::sampler::initial_tiling;
use skew_aztec::tiling::*;

fn all_tilings(spec: &DomainSpec) -> Vec<Tiling> {
    enumerate(spec, true).unwrap().tilings.unwrap()
}

#[test]
fn path_systems_on_every_enumerated_tiling() {
    for spec in common::small_specs(1.0) {
        let (n, m, big_m) = (spec.n as usize, spec.m as usize, spec.big_m as usize);
        for t in all_tilings(&spec) {
            for (color, expected) in [(PathColor::Red, n + m), (PathColor::Blue, n + m), (PathColor::Green, big_m)] {
                let ps = t.paths_of(color).unwrap();
                assert_eq!(ps.paths.len(), expected, "{spec:?} {color:?}");
                let mut seen = BTreeSet::new();
                for p in &ps.paths {
                    for c in p {
                        assert!(seen.insert(*c), "paths of {color:?} intersect at {c:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn red_counts_match_profile_on_every_tiling() {
    for spec in common::small_specs(1.0) {
        let profile: BTreeMap<i64, usize> = red_dot_profile(&spec).unwrap().into_iter().collect();
        for t in all_tilings(&spec) {
            let mut counts = t.dots_of(PathColor::Red).counts_per_line();
            for xi in profile.keys() {
                counts.entry(*xi).or_insert(0);
            }
            assert_eq!(counts, profile, "{spec:?}");
        }
    }
}

#[test]
fn red_dots_lie_on_even_lines_and_blue_green_partition_sites() {
    let spec = DomainSpec::new(3, 3, 2, 1.0).unwrap();
    let d = Domain::new(&spec).unwrap();
    let sites: BTreeSet<XiEta> = d.blue.iter().map(|b| b.to_xi_eta()).collect();
    for t in all_tilings(&spec) {
        assert!(t.dots_of(PathColor::Red).dots.iter().all(|p| p.xi % 2 == 0));
        let blue = t.dots_of(PathColor::Blue).dots;
        let green = t.dots_of(PathColor::Green).dots;
        assert!(blue.iter().chain(green.iter()).all(|p| p.eta.rem_euclid(2) == 1));
        assert!(blue.is_disjoint(&green));
        let union: BTreeSet<XiEta> = blue.union(&green).copied().collect();
        assert_eq!(union, sites);
    }
}

#[test]
fn rotation_maps_blue_dots_to_green_dots() {
    let spec = DomainSpec::new(3, 1, 3, 1.0).unwrap();
    let d = Domain::new(&spec).unwrap();
    for t in all_tilings(&spec) {
        let rotated = dots_from_labels(&d, &t.rotated_labels(), PathColor::Green);
        assert_eq!(rotated.dots, t.dots_of(PathColor::Blue).dots);
    }
}

#[test]
fn green_paths_leave_from_contiguous_cut_cells() {
    // the blue cut cells on the first line are consecutive in u, and every green
    // path has one end next to them
    for spec in common::small_specs(1.0) {
        let cut: Vec<XiEta> = (1 - spec.big_m..=0).map(|u| Su::new(0, u).to_xi_eta()).collect();
        for w in cut.windows(2) {
            assert_eq!(w[0].xi - w[1].xi, 2);
        }
        for t in all_tilings(&spec) {
            let ps = t.paths_of(PathColor::Green).unwrap();
            let mut near = 0;
            for p in &ps.paths {
                let ends = [p[0], *p.last().unwrap()];
                if ends.iter().any(|e| cut.iter().any(|c| (e.xi - c.xi).abs() <= 2 && (e.eta - c.eta).abs() <= 2)) {
                    near += 1;
                }
            }
            assert_eq!(near, spec.big_m as usize, "{spec:?}");
        }
    }
}

#[test]
fn boundary_heights_do_not_depend_on_the_tiling() {
    for spec in [DomainSpec::new(3, 3, 2, 1.0).unwrap(), DomainSpec::new(2, 3, 3, 1.0).unwrap()] {
        let ts = all_tilings(&spec);
        let d = Domain::new(&spec).unwrap();
        let cells: BTreeSet<(i64, i64)> = d.blue.iter().chain(d.white.iter()).map(|c| c.to_grid()).collect();
        // a corner is on the boundary unless all four surrounding squares are in the region
        let on_boundary = |&(x, y): &(i64, i64)| {
            ![(x - 1, y - 1), (x, y - 1), (x - 1, y), (x, y)].iter().all(|c| cells.contains(c))
        };
        for color in PathColor::ALL {
            let first = ts[0].height_function(color).unwrap();
            for t in &ts[1..] {
                let h = t.height_function(color).unwrap();
                for (k, v) in first.values.iter().filter(|(k, _)| on_boundary(k)) {
                    assert_eq!(h.values[k], *v, "{color:?} at {k:?}");
                }
            }
        }
    }
}

#[test]
fn weights() {
    let spec = DomainSpec::new(3, 0, 2, 0.5).unwrap();
    let t = initial_tiling(&spec).unwrap();
    let k = t.vertical_count() as i32;
    assert!((t.weight() - 2f64.powi(-k)).abs() < 1e-15);
    let spec = DomainSpec::new(2, 2, 2, 0.5).unwrap();
    let ts = all_tilings(&spec);
    let flat = ts.iter().find(|t| t.vertical_count() == 0).unwrap();
    assert_eq!(flat.weight(), 1.0);
    for t in &ts {
        assert_eq!(t.weight(), 0.5f64.powi(t.vertical_count() as i32));
    }
}

#[test]
fn invalid_covers_are_rejected() {
    let spec = DomainSpec::new(2, 2, 2, 1.0).unwrap();
    let t = initial_tiling(&spec).unwrap();
    let mut orient = t.orientations().to_vec();
    orient[0] = orient[0].rotated();
    assert!(Tiling::new(t.domain().clone(), orient).is_err());
    let mut ds = t.dominoes();
    ds.pop();
    assert!(Tiling::from_dominoes(&spec, &ds).is_err());
}

#[test]
fn records_round_trip_in_eta_xi_order() {
    let spec = DomainSpec::new(3, 3, 2, 1.0).unwrap();
    for t in all_tilings(&spec).iter().take(20) {
        let recs = t.to_records();
        let keys: Vec<(i64, i64)> = recs.iter().map(|r| (r.eta, r.xi)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(&Tiling::from_records(&spec, &recs).unwrap(), t);
    }
}

#[test]
fn orientation_offsets() {
    let b = Su::new(4, 1);
    assert_eq!(Orientation::HL.partner(b), Su::new(5, 1));
    assert_eq!(Orientation::VD.partner(b), Su::new(5, 2));
    assert_eq!(Orientation::HR.partner(b), Su::new(3, 1));
    assert_eq!(Orientation::VU.partner(b), Su::new(3, 0));
    for o in Orientation::ALL {
        assert_eq!(o.rotated().rotated(), o);
        assert_eq!(o.rotated().is_vertical(), o.is_vertical());
        let (bx, by) = b.to_grid();
        let (wx, wy) = o.partner(b).to_grid();
        assert_eq!((bx - wx).abs() + (by - wy).abs(), 1);
        assert_eq!(o.is_vertical(), bx == wx);
    }
}

#[test]
fn figure_three_sized_tiling_has_eighteen_red_paths() {
    let spec = DomainSpec::new(8, 10, 3, 1.0).unwrap();
    let t = initial_tiling(&spec).unwrap();
    assert_eq!(t.paths_of(PathColor::Red).unwrap().paths.len(), 18);
    let profile: BTreeMap<i64, usize> = red_dot_profile(&spec).unwrap().into_iter().collect();
    assert_eq!(t.dots_of(PathColor::Red).counts_per_line(), profile);
}
