use num_complex::Complex64 as C64;
use proptest::prelude::*;
use skew_aztec::finite_kernels::*;
use skew_aztec::geometry::{Domain, DomainSpec};
use skew_aztec::quadrature::{default_ladder, integrate, ContourSpec, QuadratureConfig};

fn coefficient_by_quadrature(sp: &SymbolParams, u1: i64, u2: i64, radius: f64) -> C64 {
    let c = ContourSpec::circle(C64::new(0.0, 0.0), radius, 4096);
    integrate(&c, |z| z.powi((u1 - u2) as i32) * phi(sp, z) / z).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phi_hat_matches_contour_coefficients(s1 in 0i64..8, ds in 0i64..6, k in -6i64..5, a in 0.2f64..0.9) {
        let sp = SymbolParams { a, s1, s2: s1 + ds };
        let exact = phi_hat(&sp, 0, k);
        for r in default_ladder(a).unwrap().radii() {
            let q = coefficient_by_quadrature(&sp, 0, k, r);
            prop_assert!((q - exact).norm() < 1e-10 * exact.abs().max(1.0), "r = {r}: {q} vs {exact}");
        }
    }

    #[test]
    fn coefficients_do_not_depend_on_the_radius(s1 in 0i64..6, ds in 1i64..6, k in -4i64..4) {
        let a = 0.6;
        let sp = SymbolParams { a, s1, s2: s1 + ds };
        let l = default_ladder(a).unwrap();
        let p = l.perturbed(1.02).unwrap();
        for (r0, r1) in l.radii().iter().zip(p.radii()) {
            let d = coefficient_by_quadrature(&sp, 0, k, *r0) - coefficient_by_quadrature(&sp, 0, k, r1);
            prop_assert!(d.norm() < 1e-11);
        }
    }
}

#[test]
fn phi_hat_support_and_identity() {
    for (s1, s2) in [(0, 1), (1, 2), (2, 5), (3, 8)] {
        let sp = SymbolParams { a: 0.5, s1, s2 };
        let (p, q) = phi_hat_exponents(s1, s2);
        assert_eq!(p + q, s2 - s1);
        assert_eq!(phi_hat(&sp, 0, p + 1), 0.0);
        assert!(phi_hat(&sp, 0, p) > 0.0);
        if q == 0 {
            assert_eq!(phi_hat(&sp, 0, -1), 0.0);
        } else {
            assert!(phi_hat(&sp, 0, -3) > 0.0);
        }
    }
    for s in 0..6 {
        let sp = SymbolParams { a: 0.7, s1: s, s2: s };
        assert_eq!(phi_hat(&sp, 2, 2), 1.0);
        assert_eq!(phi_hat(&sp, 2, 3), 0.0);
        assert_eq!(phi_hat(&sp, 3, 2), 0.0);
    }
    assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-13);
}

#[test]
fn symbol_params_validate_lines() {
    let spec = DomainSpec::new(3, 3, 2, 0.5).unwrap();
    assert!(SymbolParams::new(&spec, 0, 7).is_ok());
    assert!(SymbolParams::new(&spec, 0, 8).is_err());
    assert!(SymbolParams::new(&spec, 4, 3).is_err());
    assert!(SymbolParams::new(&spec, -1, 3).is_err());
}

#[test]
fn green_kernel_basics() {
    let spec = DomainSpec::new(4, 4, 3, 0.6).unwrap();
    let d = Domain::new(&spec).unwrap();
    let g = GreenKernel::new(&spec).unwrap();
    for s in 1..=2 * spec.n {
        let (lo, hi) = d.line_range(s);
        let total: f64 = (lo..=hi).map(|u| g.eval(s, u, s, u)).sum();
        assert!((total - spec.big_m as f64).abs() < 1e-9, "line {s}");
        for u in lo..=hi {
            let rho = g.eval(s, u, s, u);
            assert!((-1e-12..=1.0 + 1e-12).contains(&rho));
        }
    }
    assert!(kgreen(&spec, 0, 0, 2, 0).is_err());
    assert!(kgreen(&spec, 2, 0, 2 * spec.n + 1, 0).is_err());
    assert_eq!(kgreen(&spec, 2, 0, 3, 1).unwrap(), g.eval(2, 0, 3, 1));
}

#[test]
fn toeplitz_of_constant_symbol_is_one() {
    for p in 0..8 {
        let d = toeplitz_det(|_| C64::new(1.0, 0.0), p, 1.0, 64).unwrap();
        assert!((d - 1.0).norm() < 1e-13);
    }
    assert!(toeplitz_det(|_| C64::new(1.0, 0.0), 13, 1.0, 64).is_err());
    // f(ζ) = 1 + cζ has a lower-triangular Toeplitz matrix with unit diagonal
    let d = toeplitz_det(|z| 1.0 + 0.3 * z, 5, 1.0, 64).unwrap();
    assert!((d - 1.0).norm() < 1e-13);
    let c = fourier_coefficients(|z| 2.0 + z * z, 1.0, 32, -2, 3);
    assert!((c[2] - 2.0).norm() < 1e-14 && (c[4] - 1.0).norm() < 1e-14 && c[3].norm() < 1e-14);
}

#[test]
fn identity_checks_hold() {
    for p in [1, 2, 3, 5] {
        let r = bo_check(4, 0.5, p).unwrap();
        assert!(r.residual < 1e-6, "{r:?}");
    }
    for kappa in [1, 2] {
        for side in [BlowupSide::Plus, BlowupSide::Minus] {
            let r = blowup_check(3, 0.5, kappa, 3, side).unwrap();
            assert!(r.residual < 1e-6, "{r:?}");
        }
    }
    for big_m in 1..=3 {
        let r = dphi_check(4, 5, big_m, 0.5).unwrap();
        assert!(r.residual < 1e-6, "{r:?}");
    }
    assert!(dphi_check(4, 6, 2, 0.5).is_err());
    assert!(bo_check(4, 1.0, 2).is_err());
    assert!(blowup_check(3, 0.5, 4, 3, BlowupSide::Plus).is_err());
}

#[test]
fn scaled_functions_and_prelimit_are_finite() {
    let f = ScaledFunctions::new(64, 0.0, 1);
    let z = C64::new(0.4, 0.2);
    assert!(f.h(z).norm().is_finite());
    let cfg = QuadratureConfig::default();
    let pre = PreLimit::new(16, 1, 1, 0.0, &cfg).unwrap();
    // with n = 16 the lattice lines sit at y = k/(2√2)
    let y = 0.25 * std::f64::consts::SQRT_2;
    let q = pre.eval_with_error(0, y, 0, -y).unwrap();
    assert!(q.value.re.is_finite());
    assert!(q.err_estimate < 1e-8, "{q:?}");
    let t = pre.terms(0, y, 0, -y).unwrap();
    assert!((t.total() - pre.eval(0, y, 0, -y).unwrap()).norm() < 1e-14);
    assert!(pre.eval(0, 0.3, 0, -y).is_err());
    assert!(PreLimit::new(16, PRELIMIT_R_CAP + 1, 1, 0.0, &cfg).is_err());
}
