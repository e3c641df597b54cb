mod common;

use proptest::prelude::*;
use skew_aztec::limit_kernels::*;
use skew_aztec::quadrature::QuadratureConfig;

#[test]
fn heaviside_examples() {
    assert_eq!(heaviside(0, 1.0), 0.0);
    assert_eq!(heaviside(-2, 1.0), 0.0);
    assert_eq!(heaviside(1, 0.0), 1.0);
    assert_eq!(heaviside(1, 3.5), 1.0);
    assert_eq!(heaviside(2, 3.5), 3.5);
    assert_eq!(heaviside(3, 2.0), 2.0);
    assert_eq!(heaviside(4, -0.1), 0.0);
}

proptest! {
    #[test]
    fn heaviside_semigroup(m in 1i64..5, k in 1i64..5, z in 0.0f64..4.0) {
        // ∫₀^z ℍ^m(z − t) ℍ^k(t) dt = ℍ^{m+k}(z)
        let rule = gauss_legendre(32);
        let conv: f64 = rule
            .iter()
            .map(|&(x, w)| {
                let t = 0.5 * z * (x + 1.0);
                0.5 * z * w * heaviside(m, z - t) * heaviside(k, t)
            })
            .sum();
        prop_assert!((conv - heaviside(m + k, z)).abs() < 1e-12 * heaviside(m + k, z).max(1.0));
    }
}

fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    gauss_quad::legendre::GaussLegendre::new(std::num::NonZeroUsize::new(n).unwrap())
        .as_node_weight_pairs()
        .to_vec()
}

#[test]
fn a0_is_the_airy_function() {
    let cfg = AiryConfig::default();
    for i in -20..=20 {
        let u = i as f64 * 0.15;
        let v = airy_like(0, u, &cfg).unwrap();
        assert!((v - common::airy_series(u)).abs() < 1e-8, "u = {u}");
    }
}

#[test]
fn airy_like_recursion() {
    // integrating by parts: A_{τ+2}(u) = u A_τ(u) + τ A_{τ−1}(u)
    let cfg = AiryConfig::default();
    for tau in [0i64, 1, 2] {
        for u in [-1.0, 0.0, 0.7] {
            let lhs = airy_like(tau + 2, u, &cfg).unwrap();
            let rhs = u * airy_like(tau, u, &cfg).unwrap() + tau as f64 * airy_like(tau - 1, u, &cfg).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "τ = {tau}, u = {u}");
        }
    }
    // A_{−1} is an antiderivative of A_0 vanishing at +∞; A_{-1}' = A_0
    let h = 1e-4;
    let d = (airy_like(-1, 0.5 + h, &cfg).unwrap() - airy_like(-1, 0.5 - h, &cfg).unwrap()) / (2.0 * h);
    assert!((d - common::airy_series(0.5)).abs() < 1e-7);
}

#[test]
fn theta_is_one_without_determinant() {
    let tac = Tacnode::new(TacnodeParams { r: 0, rho: 0, beta: 0.0 }, &QuadratureConfig::default()).unwrap();
    assert_eq!(tac.theta00().re, 1.0);
    assert_eq!(tac.theta00().im, 0.0);
}

#[test]
fn tacnode_values_are_real_and_contour_independent() {
    let p1 = TacnodePoint::new(0, 0.5);
    let p2 = TacnodePoint::new(0, -0.5);
    let base = QuadratureConfig::default();
    for (r, rho, beta) in [(1usize, 2i64, 0.0), (1, 1, 0.0), (2, 3, 0.5)] {
        let params = TacnodeParams { r, rho, beta };
        let q = Tacnode::new(params, &base).unwrap().dtac_with_error(p1, p2).unwrap();
        assert!(q.value.im.abs() <= 10.0 * q.err_estimate + 1e-12, "{params:?}: {q:?}");
        for cfg in [
            QuadratureConfig { circle_radius: 0.3, ..base },
            QuadratureConfig { circle_radius: 0.7, ..base },
            QuadratureConfig { line_abscissa: 1.5, ..base },
        ] {
            let v = Tacnode::new(params, &cfg).unwrap().dtac(p1, p2).unwrap();
            assert!((v - q.value).norm() < 1e-8, "{params:?} {cfg:?}");
        }
    }
}

#[test]
fn cusp_diagonal_is_a_density() {
    let cfg = AiryConfig::default();
    for tau in [-1i64, 0, 1] {
        for xi in [-2.0, 0.0, 1.5] {
            let q = cusp_airy(tau, xi, tau, xi, &cfg).unwrap();
            assert!((-1e-9..=1.0 + 1e-9).contains(&q.value.re), "τ = {tau}, ξ = {xi}: {}", q.value.re);
            assert!(q.err_estimate < 1e-8);
        }
    }
}

#[test]
fn cusp_unsupported_quadrant() {
    let cfg = AiryConfig::default();
    assert!(cusp_airy(0, 0.0, -1, 0.0, &cfg).is_err());
    assert!(cusp_airy(2, 0.0, -3, 0.0, &cfg).is_err());
    assert!(cusp_airy(-1, 0.0, 0, 0.0, &cfg).is_ok());
}

#[test]
fn cusp_symmetry_is_reported() {
    let cfg = AiryConfig::default();
    let a = cusp_airy(0, 0.3, 1, -0.2, &cfg).unwrap().value.re;
    let b = cusp_airy(1, -0.2, 0, 0.3, &cfg).unwrap().value.re;
    println!("cusp-Airy (0, 0.3; 1, -0.2) = {a}, (1, -0.2; 0, 0.3) = {b}");
    assert!(a.is_finite() && b.is_finite());
}

#[test]
fn tacnode_rejects_points_on_the_line_and_large_r() {
    let cfg = QuadratureConfig::default();
    assert!(Tacnode::new(TacnodeParams { r: 25, rho: 25, beta: 0.0 }, &cfg).is_err());
    let tac = Tacnode::new(TacnodeParams { r: 1, rho: 2, beta: 0.0 }, &cfg).unwrap();
    let on = num_complex::Complex64::new(cfg.line_abscissa, 0.3);
    assert!(tac.theta(on, on).is_err());
    let u = num_complex::Complex64::new(0.2, 0.1);
    assert!((tac.theta(u, u).unwrap() - tac.theta00()).norm() < 1e-12);
}
