use std::f64::consts::PI;

use idxf_core::bergman::{basis_element, kernel_closed, GammaParam};
use idxf_core::bessel::{bessel_i, bessel_k};
use idxf_core::gamma::{gamma, generalized_degree, log_gamma, pochhammer, pochhammer_real};
use idxf_core::hyper::{cdhahn_poly, CdHahnParams};
use idxf_core::report::VerificationReport;
use idxf_core::transform::{transform_apply_coeffs, Convention, EigenExpansion};
use idxf_core::Complex64;
use proptest::prelude::*;
use serde_json::json;

fn complex(half_width: f64) -> impl Strategy<Value = Complex64> {
    (-half_width..half_width, -half_width..half_width).prop_map(|(re, im)| Complex64::new(re, im))
}

fn away_from_poles(z: &Complex64) -> bool {
    !(z.im.abs() < 0.05 && z.re < 0.05 && (z.re - z.re.round()).abs() < 0.05)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gamma_recurrence(z in complex(10.0).prop_filter("pole", away_from_poles)) {
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!(rel(rhs, lhs) <= 1e-12, "z = {z}: {lhs} vs {rhs}");
    }

    #[test]
    fn log_gamma_conjugate_symmetry(z in complex(40.0).prop_filter("pole", away_from_poles)) {
        prop_assert_eq!(log_gamma(z.conj()).unwrap(), log_gamma(z).unwrap().conj());
    }

    #[test]
    fn pochhammer_splits(a in complex(5.0), m in 0usize..12, n in 0usize..12) {
        let whole = pochhammer(a, m + n);
        let split = pochhammer(a, m) * pochhammer(a + m as f64, n);
        prop_assert!((whole - split).norm() <= 1e-12 * whole.norm().max(1e-300));
    }

    #[test]
    fn generalized_degree_modulus_integer_gamma(x in 0.0f64..12.0, m in 1usize..5) {
        // |Γ(m+ix)/Γ(ix)|² = x² Π_{j<m} (j² + x²)
        let d = generalized_degree(x, m as f64).unwrap();
        let expected: f64 = x * x * (1..m).map(|j| (j * j) as f64 + x * x).product::<f64>();
        prop_assert!((d.norm_sqr() - expected).abs() <= 1e-11 * expected.max(1e-300));
    }

    #[test]
    fn generalized_degree_phase_at_small_x(g in 0.5f64..4.0) {
        // Γ(γ+ix)/Γ(ix) ≈ ix Γ(γ) near zero, so the phase tends to π(γ+1)/2
        let x = 1e-7;
        let d = generalized_degree(x, g).unwrap();
        let expected = Complex64::from_polar(x * gamma(Complex64::new(g, 0.0)).unwrap().re, 0.5 * PI * (g + 1.0));
        prop_assert!(rel(d, expected) <= 1e-5);
    }

    #[test]
    fn cdhahn_symmetric_in_parameters(
        a in 0.2f64..3.0, b in 0.2f64..3.0, c in 0.2f64..3.0,
        n in 0usize..7, xsq in 0.0f64..6.0,
    ) {
        let base = cdhahn_poly(n, xsq, CdHahnParams::new(a, b, c).unwrap()).unwrap();
        // size of the largest term bounds the rounding error of the sum
        let scale = pochhammer_real(a + b, n) * pochhammer_real(a + c, n) * (1.0 + xsq).powi(n as i32);
        for (p, q, r) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            let v = cdhahn_poly(n, xsq, CdHahnParams::new(p, q, r).unwrap()).unwrap();
            prop_assert!((v - base).abs() <= 1e-12 * base.abs().max(1e-3 * scale), "{v} vs {base}");
        }
    }

    #[test]
    fn cdhahn_has_exact_degree(g in 0.6f64..3.0, n in 0usize..8) {
        // n-th forward difference of S_n in x² with step h is (−1)^n n! hⁿ
        let p = CdHahnParams::oscillator(g).unwrap();
        let h = 0.5;
        let vals: Vec<f64> = (0..=n + 1).map(|k| cdhahn_poly(n, k as f64 * h, p).unwrap()).collect();
        let mut diff = vals.clone();
        for _ in 0..n {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let expected = if n % 2 == 0 { 1.0 } else { -1.0 } * pochhammer_real(1.0, n) * h.powi(n as i32);
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())) * 2f64.powi(n as i32);
        prop_assert!((diff[0] - expected).abs() <= 1e-12 * scale.max(1.0));
        prop_assert!((diff[1] - diff[0]).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn bessel_k_positive_and_decreasing(nu in 0.0f64..6.0, rho in 0.05f64..30.0) {
        let k0 = bessel_k(nu, rho, 1e-14).unwrap();
        let k1 = bessel_k(nu, rho * 1.01, 1e-14).unwrap();
        prop_assert!(k0 > 0.0 && k1 > 0.0 && k1 < k0);
    }

    #[test]
    fn bessel_i_positive_on_positive_axis(nu in 0.0f64..6.0, zeta in 0.01f64..50.0) {
        let v = bessel_i(nu, Complex64::new(zeta, 0.0), 1e-16).unwrap();
        prop_assert!(v.re > 0.0 && v.im == 0.0);
    }

    #[test]
    fn kernel_is_hermitian(z in complex(3.0), w in complex(3.0), two_g in 1usize..7) {
        let gp = GammaParam::strict(0.5 * two_g as f64).unwrap();
        let kzw = kernel_closed(z, w, &gp).unwrap();
        let kwz = kernel_closed(w, z, &gp).unwrap();
        prop_assert!((kzw - kwz.conj()).norm() <= 1e-12 * kzw.norm());
    }

    #[test]
    fn basis_commutes_with_conjugation(z in complex(10.0), n in 0usize..40) {
        let gp = GammaParam::strict(2.5).unwrap();
        let a = basis_element(n, &gp, z.conj());
        let b = basis_element(n, &gp, z).conj();
        prop_assert!((a - b).norm() <= 1e-13 * b.norm());
    }

    #[test]
    fn transform_is_conjugate_linear(
        u in prop::collection::vec(complex(1.0), 1..8),
        v in prop::collection::vec(complex(1.0), 1..8),
        a in complex(2.0), b in complex(2.0), z in complex(3.0),
    ) {
        let gp = GammaParam::strict(2.0).unwrap();
        let len = u.len().max(v.len());
        let pad = |c: &[Complex64]| { let mut c = c.to_vec(); c.resize(len, Complex64::new(0.0, 0.0)); c };
        let (u, v) = (pad(&u), pad(&v));
        let w: Vec<Complex64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        let f = |c: Vec<Complex64>, conv| {
            transform_apply_coeffs(&EigenExpansion::new(gp, c).unwrap(), &[z], conv).unwrap().values[0].1
        };
        let conj_lin = a.conj() * f(u.clone(), Convention::ConjugateLinear) + b.conj() * f(v.clone(), Convention::ConjugateLinear);
        let got = f(w.clone(), Convention::ConjugateLinear);
        prop_assert!((got - conj_lin).norm() <= 1e-10 * conj_lin.norm().max(1.0));
        let lin = a * f(u, Convention::Linear) + b * f(v, Convention::Linear);
        let got = f(w, Convention::Linear);
        prop_assert!((got - lin).norm() <= 1e-10 * lin.norm().max(1.0));
    }

    #[test]
    fn report_passes_iff_errors_within_tolerance(errors in prop::collection::vec(0.0f64..2e-6, 1..20), tol in 1e-7f64..2e-6) {
        let mut b = VerificationReport::builder("property", json!({}), tol);
        for e in &errors {
            b.real(json!({}), 0.0, *e, false);
        }
        let r = b.finish();
        let max = errors.iter().cloned().fold(0.0f64, f64::max);
        prop_assert_eq!(r.max_abs_error, max);
        prop_assert_eq!(r.pass, max <= tol);
    }
}
