mod common;

use proptest::prelude::*;
use skew_aztec::geometry::*;

proptest! {
    #[test]
    fn derived_identities_hold(n in 1i64..300, m in 0i64..300, big_m in 1i64..300) {
        let d = derived_params(n, m, big_m).unwrap();
        prop_assert_eq!(d.rho, (d.sigma - 2 * d.delta).abs());
        prop_assert_eq!(d.r, (d.sigma - d.delta).max(d.delta));
        prop_assert_eq!(d.kappa, (-d.delta).max(0));
    }

    #[test]
    fn verdict_matches_case_inequalities(n in 1i64..50, m in 0i64..50, big_m in 1i64..50) {
        let v = is_tilable(n, m, big_m).unwrap();
        let case1 = big_m <= m.min(n + 1);
        let case2 = m <= (big_m - 1).min(n);
        prop_assert_eq!(v.tilable, case1 || case2);
        prop_assert!(!(case1 && case2));
    }

    #[test]
    fn coordinates_round_trip(n in 1i64..12, m in 0i64..12, big_m in 1i64..12, pick in 0usize..10_000) {
        let spec = DomainSpec::new(n, m, big_m, 1.0).unwrap();
        let d = Domain::new(&spec).unwrap();
        let cells: Vec<Su> = d.blue.iter().chain(d.white.iter()).copied().collect();
        let c = cells[pick % cells.len()];
        let p = su_to_xi_eta(&spec, c).unwrap();
        prop_assert_eq!(xi_eta_to_su(&spec, p).unwrap(), c);
        prop_assert_eq!(c.is_blue(), p.is_blue_centre());
        let (x, y) = c.to_grid();
        prop_assert_eq!(Su::from_grid(x, y), c);
    }
}

#[test]
fn thousand_random_points_round_trip() {
    use rand::{Rng, SeedableRng};
    let spec = DomainSpec::new(8, 10, 3, 1.0).unwrap();
    let (x0, x1) = spec.xi_range();
    let (e0, e1) = spec.eta_range();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 1000 {
        let p = XiEta::new(rng.gen_range(x0..=x1), rng.gen_range(e0..=e1));
        if let Ok(c) = xi_eta_to_su(&spec, p) {
            assert_eq!(su_to_xi_eta(&spec, c).unwrap(), p);
            done += 1;
        }
    }
}

#[test]
fn declared_coordinate_ranges() {
    let spec = DomainSpec::new(8, 10, 3, 1.0).unwrap();
    assert_eq!(spec.xi_range(), (-1, 2 * (10 + 3)));
    assert_eq!(spec.eta_range(), (-2, 2 * 8 + 1));
    let d = Domain::new(&spec).unwrap();
    for c in d.blue.iter().chain(d.white.iter()) {
        let p = c.to_xi_eta();
        assert!(p.xi >= -1 && p.xi <= 26 && p.eta >= -2 && p.eta <= 17, "{p:?}");
    }
    for b in &d.blue {
        let p = b.to_xi_eta();
        assert!(p.xi % 2 == 0 && p.eta.rem_euclid(2) == 1);
    }
}

#[test]
fn spec_validation() {
    assert!(DomainSpec::new(1, 0, 1, 0.0).is_err());
    assert!(DomainSpec::new(1, 0, 1, 1.5).is_err());
    assert!(DomainSpec::new(1, 0, 1, f64::NAN).is_err());
    assert!(DomainSpec::new(1, 0, 1, 1.0).is_ok());
}

#[test]
fn tilability_matches_independent_brute_force() {
    for n in 1..=4i64 {
        for m in 0..=5i64 {
            for big_m in 1..=5i64 {
                if n + m + big_m > 9 {
                    continue;
                }
                let spec = DomainSpec::new(n, m, big_m, 1.0).unwrap();
                let (count, _) = common::brute_force_weight(&common::grid_cells(&spec), 1.0);
                assert_eq!(count > 0, spec.verdict().tilable, "{:?}", (n, m, big_m));
            }
        }
    }
}

#[test]
fn untilable_example_has_no_tiling() {
    let spec = DomainSpec::new(2, 5, 9, 1.0).unwrap();
    assert!(!spec.verdict().tilable);
    assert!(red_dot_profile(&spec).is_err());
    let (count, _) = common::brute_force_weight(&common::grid_cells(&spec), 1.0);
    assert_eq!(count, 0);
}

#[test]
fn profile_lengths_and_extremes() {
    for (n, m, big_m) in [(8, 10, 3), (8, 5, 8), (6, 6, 4), (5, 0, 3)] {
        let spec = DomainSpec::new(n, m, big_m, 1.0).unwrap();
        let p = red_dot_profile(&spec).unwrap();
        assert_eq!(p.len() as i64, m + big_m);
        let r = spec.derived().r as usize;
        assert_eq!(*p.iter().map(|(_, c)| c).min().unwrap(), r);
        assert!(p.iter().all(|&(_, c)| c as i64 <= n));
    }
}
