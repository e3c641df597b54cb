mod common;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use skew_aztec::finite_kernels::GreenKernel;
use skew_aztec::geometry::*;
use skew_aztec::kasteleyn::*;
use skew_aztec::linalg::DenseMatrix;
use skew_aztec::oracle;
use skew_aztec::tiling::{Domino, Orientation};

#[test]
fn determinant_modulus_is_the_partition_function() {
    for a in [1.0, 0.7, 0.3] {
        for spec in common::small_specs(a) {
            let z = oracle::enumerate(&spec, false).unwrap().partition_function(a);
            let det = KasteleynSystem::build(&spec).unwrap().det().norm();
            assert!((det - z).abs() <= 1e-10 * z.max(1.0), "{spec:?}: |det| {det} vs Z {z}");
        }
    }
}

#[test]
fn untilable_balanced_domain_has_zero_determinant() {
    let spec = DomainSpec::new(2, 5, 9, 1.0).unwrap();
    let sys = KasteleynSystem::build(&spec).unwrap();
    assert_eq!(sys.domain.blue.len(), sys.domain.white.len());
    assert!(sys.det().norm() < 1e-9);
}

#[test]
fn partition_function_ratio_across_weights() {
    let spec = DomainSpec::new(3, 3, 2, 1.0).unwrap();
    let poly = oracle::enumerate(&spec, false).unwrap().polynomial;
    let d = |a: f64| KasteleynSystem::build(&spec.with_weight(a)).unwrap().det().norm();
    let ratio = d(0.4) / d(0.9);
    assert!((ratio - poly.eval(0.4) / poly.eval(0.9)).abs() < 1e-12);
}

#[test]
fn inverse_is_a_two_sided_inverse() {
    let spec = DomainSpec::new(3, 3, 2, 0.6).unwrap();
    let sys = KasteleynSystem::build(&spec).unwrap();
    let k = sys.dense_matrix();
    let kinv = sys.kinv_dense().unwrap();
    let n = sys.size();
    assert!(k.mul(&kinv).max_abs_diff(&DenseMatrix::identity(n)) < 1e-12);
    assert!(kinv.mul(&k).max_abs_diff(&DenseMatrix::identity(n)) < 1e-12);
}

#[test]
fn kenyon_probabilities_match_enumeration() {
    for spec in [DomainSpec::new(3, 3, 2, 0.7).unwrap(), DomainSpec::new(3, 1, 3, 0.5).unwrap()] {
        let sys = KasteleynSystem::build(&spec).unwrap();
        let ds = sys.all_dominoes();
        for d in &ds {
            let k = sys.kenyon_probability(&[*d]).unwrap();
            let o = oracle::correlation(&spec, &[*d]).unwrap();
            assert!((k - o).abs() < 1e-10, "{d:?}");
            assert!((-1e-12..=1.0 + 1e-12).contains(&k));
        }
        for pair in ds.chunks(2).take(30).filter(|p| p.len() == 2) {
            let k = sys.kenyon_probability(pair).unwrap();
            let o = oracle::correlation(&spec, pair).unwrap();
            assert!((k - o).abs() < 1e-10, "{pair:?}");
        }
    }
}

#[test]
fn every_blue_cell_is_covered_with_probability_one() {
    let spec = DomainSpec::new(4, 2, 2, 0.8).unwrap();
    let sys = KasteleynSystem::build(&spec).unwrap();
    for b in &sys.domain.blue {
        let total: f64 = Orientation::ALL
            .iter()
            .map(|&o| sys.kenyon_probability(&[Domino::new(*b, o)]).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12, "{b:?}");
    }
}

#[test]
fn red_density_matches_oracle_and_trace_counts_dots() {
    let spec = DomainSpec::new(3, 3, 2, 0.7).unwrap();
    let sys = KasteleynSystem::build(&spec).unwrap();
    let sites: Vec<XiEta> = sys.domain.blue.iter().map(|b| b.to_xi_eta()).collect();
    let mut trace = 0.0;
    for p in &sites {
        let rho = sys.red_density(*p).unwrap();
        let gap = oracle::red_gap_probability_sites(&spec, &[*p]).unwrap();
        assert!((rho - (1.0 - gap)).abs() < 1e-10);
        trace += rho;
    }
    let expected: usize = red_dot_profile(&spec).unwrap().iter().map(|(_, c)| c).sum();
    assert!((trace - expected as f64).abs() < 1e-9);
}

#[test]
fn duality_on_every_interior_blue_line() {
    let spec = DomainSpec::new(4, 4, 3, 0.7).unwrap();
    for s in (2..=2 * spec.n).step_by(2) {
        let r = duality_check(&spec, s).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }
    assert!(duality_check(&spec, 3).is_err());
    assert!(duality_check(&spec, 0).is_err());
}

#[test]
fn green_kernel_density_sums_to_path_count() {
    let spec = DomainSpec::new(4, 4, 3, 0.6).unwrap();
    let d = Domain::new(&spec).unwrap();
    let green = GreenKernel::new(&spec).unwrap();
    for s in (2..=2 * spec.n).step_by(2) {
        let (lo, hi) = d.line_range(s);
        let total: f64 = (lo..=hi).map(|u| green.eval(s, u, s, u)).sum();
        assert!((total - spec.big_m as f64).abs() < 1e-9, "line {s}: {total}");
    }
}

#[test]
fn correlation_suite_is_within_tolerance() {
    let spec = DomainSpec::new(3, 3, 2, 0.7).unwrap();
    let rep = correlation_suite(&spec, 25, 7).unwrap();
    assert!(rep.max_error < 1e-8);
    assert!(rep.checks.iter().any(|c| c.kind == "gap pair"));
    let again = correlation_suite(&spec, 25, 7).unwrap();
    assert_eq!(rep, again);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conjugating_by_diagonal_phases_keeps_minors(seed in 0u64..1000) {
        // K ↦ D₁ K D₂ with unimodular diagonals leaves |det| and every Kenyon minor unchanged
        let spec = DomainSpec::new(2, 2, 2, 0.6).unwrap();
        let sys = KasteleynSystem::build(&spec).unwrap();
        let n = sys.size();
        let phase = |i: usize, salt: u64| {
            let t = ((seed.wrapping_mul(2654435761).wrapping_add(i as u64 * 40503 + salt)) % 997) as f64;
            C64::from_polar(1.0, t)
        };
        let k = sys.dense_matrix();
        let conj = DenseMatrix::from_fn(n, n, |i, j| phase(i, 1) * k[(i, j)] * phase(j, 2));
        prop_assert!((conj.det().norm() - k.det().norm()).abs() < 1e-10);
        let inv = conj.inverse().unwrap();
        for d in sys.all_dominoes() {
            let bi = sys.domain.blue_index(d.anchor).unwrap();
            let wi = sys.domain.white_index(d.white()).unwrap();
            let p = (conj[(wi, bi)] * inv[(bi, wi)]).re;
            let q = sys.kenyon_probability(&[d]).unwrap();
            prop_assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn single_and_pair_minors_are_probabilities(a in 0.2f64..1.0, i in 0usize..40, j in 0usize..40) {
        let spec = DomainSpec::new(3, 3, 2, a).unwrap();
        let sys = KasteleynSystem::build(&spec).unwrap();
        let ds = sys.all_dominoes();
        let (d1, d2) = (ds[i % ds.len()], ds[j % ds.len()]);
        for set in [vec![d1], vec![d1, d2]] {
            let p = sys.kenyon_probability(&set).unwrap();
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&p), "{p}");
        }
    }
}
