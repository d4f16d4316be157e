//! Reference values from 40-digit mpmath evaluations and closed forms.

use std::f64::consts::PI;

use idxf_core::bergman::{
    basis_element, bergman_inner, kernel_closed, kernel_diagonal, kernel_series, measure_density, BergmanFunction,
    GammaParam,
};
use idxf_core::bessel::{bessel_i, bessel_k};
use idxf_core::gamma::{abs_gamma_sq, generalized_degree, log_gamma, pochhammer};
use idxf_core::hyper::{cdhahn_genfun_lhs, cdhahn_genfun_series, pfq_series, CdHahnParams, HyperSeriesSpec};
use idxf_core::oscillator::{
    alpha_pm, eigenfunction_eval, normalization_const, omega0_of_gamma, AlphaPair, PhysicalConfig,
};
use idxf_core::quadrature::{gauss_legendre_rule, integrate_disk_polar, integrate_halfline, DecayEnvelope, QuadratureSpec};
use idxf_core::transform::{
    cs_closed, cs_series_auto, transform_apply_coeffs, transform_apply_sampled, CoherentStateLabel, Convention,
    EigenExpansion,
};
use idxf_core::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn assert_close(got: Complex64, expected: Complex64, rel: f64) {
    let err = (got - expected).norm() / expected.norm();
    assert!(err <= rel, "got {got}, expected {expected}, relative error {err:e}");
}

fn g(v: f64) -> GammaParam {
    GammaParam::strict(v).unwrap()
}

#[test]
fn log_gamma_reference_values() {
    assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
    assert!((log_gamma(c(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-14);
    assert_close(log_gamma(c(3.0, 4.0)).unwrap(), c(-1.7566267846037841105, 4.7426644380346579282), 1e-14);
    // analytic continuation across the negative axis
    assert_close(log_gamma(c(-2.5, 0.1)).unwrap(), c(-0.10314924404281920289, -9.314444268359838115), 1e-13);
    let modulus = log_gamma(c(1.0, 1.0)).unwrap().re.exp();
    assert!((modulus - 0.5215640468649398).abs() < 1e-14);
}

#[test]
fn pochhammer_against_gamma_ratio() {
    assert_eq!(pochhammer(c(2.0, 0.0), 3), c(24.0, 0.0));
    assert_eq!(pochhammer(c(0.3, 7.0), 0), c(1.0, 0.0));
    let ratio = (log_gamma(c(6.0, 1.0)).unwrap() - log_gamma(c(2.0, 1.0)).unwrap()).exp();
    assert_close(pochhammer(c(2.0, 1.0), 4), ratio, 1e-13);
}

#[test]
fn gamma_modulus_identities() {
    assert!((abs_gamma_sq(1.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((abs_gamma_sq(0.0, 1.0).unwrap() - 0.27202905498213316).abs() < 1e-14);
    assert!((abs_gamma_sq(0.5, 1.0).unwrap() - PI / PI.cosh()).abs() < 1e-14);
    assert!((abs_gamma_sq(0.5, 1.0).unwrap() - 0.2710149513994183).abs() < 1e-14);
}

#[test]
fn generalized_degree_values() {
    assert_eq!(generalized_degree(0.0, 2.5).unwrap(), c(0.0, 0.0));
    for &x in &[0.1, 1.0, 7.5] {
        assert_close(generalized_degree(x, 1.0).unwrap(), c(-x, 0.0), 1e-13);
    }
    // |Γ(2+i)/Γ(i)|² = |Γ(2+i)|² sinh π / π = 2
    assert!((generalized_degree(1.0, 2.0).unwrap().norm_sqr() - 2.0).abs() < 1e-13);
}

#[test]
fn hypergeometric_reference_values() {
    let spec = HyperSeriesSpec::new(vec![c(2.0, 1.0), c(2.0, -1.0)], vec![c(4.0, 0.0), c(2.5, 0.0)], c(-1.0, -0.5));
    assert_close(pfq_series(&spec).unwrap(), c(0.59814475747727415401, -0.14163635507739607033), 1e-13);
    let p = CdHahnParams::oscillator(2.0).unwrap();
    let xi = c(1.0, 0.5);
    let lhs = cdhahn_genfun_lhs(1.0, xi, p, 1e-16).unwrap();
    let (rhs, _) = cdhahn_genfun_series(1.0, xi, p).unwrap();
    assert_close(lhs, rhs, 1e-12);
    let real = cdhahn_genfun_lhs(1.0, c(2.0, 0.0), p, 1e-16).unwrap();
    assert!(real.im.abs() <= 1e-12 * real.norm());
}

#[test]
fn bessel_reference_values() {
    assert_eq!(bessel_i(0.0, c(0.0, 0.0), 1e-16).unwrap(), c(1.0, 0.0));
    assert_eq!(bessel_i(1.5, c(0.0, 0.0), 1e-16).unwrap(), c(0.0, 0.0));
    assert_close(bessel_i(0.5, c(1.0, 0.0), 1e-16).unwrap(), c(0.9376748882454876467, 0.0), 1e-14);
    assert_close(bessel_i(1.0, c(2.0, 0.0), 1e-16).unwrap(), c(1.5906368546373290634, 0.0), 1e-14);
    assert_close(bessel_i(3.0, c(2.0, 0.0), 1e-16).unwrap(), c(0.21273995923985265527, 0.0), 1e-14);
    assert!((bessel_k(0.5, 1.0, 1e-14).unwrap() / 0.46106850444789455844 - 1.0).abs() < 1e-12);
    assert!((bessel_k(0.0, 10.0, 1e-14).unwrap() / 1.7780062316167651811e-5 - 1.0).abs() < 1e-12);
    let (p, m) = (bessel_k(2.3, 0.7, 1e-14).unwrap(), bessel_k(-2.3, 0.7, 1e-14).unwrap());
    assert!((p / m - 1.0).abs() < 1e-11);
}

#[test]
fn gauss_legendre_exactness() {
    let r2 = gauss_legendre_rule(2).unwrap();
    assert!((r2.integrate(-1.0, 1.0, |x| x * x) - 2.0 / 3.0).abs() < 1e-15);
    let r5 = gauss_legendre_rule(5).unwrap();
    assert!((r5.integrate(-1.0, 1.0, |x| x.powi(8)) - 2.0 / 9.0).abs() < 1e-14);
    assert!((r5.integrate(-1.0, 1.0, |_| 1.0) - 2.0).abs() < 1e-14);
}

#[test]
fn half_line_and_polar_integrals() {
    let spec = QuadratureSpec::default().with_tol(1e-13);
    let env = DecayEnvelope::exponential(1.0, 1.0, 0.0);
    let v = integrate_halfline(|x| c((-x).exp(), 0.0), &env, &spec).unwrap();
    assert!((v.re - 1.0).abs() < 1e-12);
    // x³ e^{−x/2} ≤ 216 e^{−3}
    let env = DecayEnvelope::exponential(216.0 * (-3.0f64).exp(), 0.5, 0.0);
    let v = integrate_halfline(|x| c(x.powi(3) * (-x).exp(), 0.0), &env, &spec).unwrap();
    assert!((v.re - 6.0).abs() < 1e-11);
    let v = integrate_disk_polar(|_, _| c(1.0, 0.0), 1.0, None, &spec).unwrap();
    assert!((v.re - PI).abs() < 1e-10);
    let v = integrate_disk_polar(|rho, _| c(rho * rho * (-rho * rho).exp(), 0.0), 12.0, None, &spec).unwrap();
    assert!((v.re - PI).abs() < 1e-10);
}

#[test]
fn measure_density_and_total_mass() {
    // at γ = ½ the density is (2/π) K_0(2ρ)
    let d = measure_density(c(0.8, 0.0), &g(0.5)).unwrap();
    assert!((d / 0.11965571141412154233 - 1.0).abs() < 1e-12);
    for gamma in [1.0, 2.0] {
        let one = BergmanFunction::basis(0, &g(gamma)).unwrap();
        let mass = bergman_inner(&one, &one, &g(gamma), &QuadratureSpec::default()).unwrap();
        assert!((mass - c(1.0, 0.0)).norm() < 1e-9, "γ = {gamma}: {mass}");
    }
}

#[test]
fn basis_and_kernel_values() {
    let z = c(0.3, -2.0);
    assert_eq!(basis_element(0, &g(2.0), z), c(1.0, 0.0));
    assert!((basis_element(2, &g(1.0), c(1.0, 0.0)).re - 1.0 / 12f64.sqrt()).abs() < 1e-15);
    assert_eq!(kernel_series(z, c(0.0, 0.0), &g(1.5), 1e-16).unwrap(), c(1.0, 0.0));
    assert_eq!(kernel_closed(z, c(0.0, 0.0), &g(1.5)).unwrap(), c(1.0, 0.0));
    let one = c(1.0, 0.0);
    assert_close(kernel_series(one, one, &g(1.0), 1e-16).unwrap(), c(1.5906368546373290634, 0.0), 1e-14);
    assert!((kernel_diagonal(c(0.6, 0.8), &g(2.0)).unwrap() - 1.2764397554391159316).abs() < 1e-13);
    assert!((kernel_diagonal(c(0.0, 2.0), &g(2.5)).unwrap() - 2.1244135614803834848).abs() < 1e-13);
}

#[test]
fn bergman_inner_products() {
    let spec = QuadratureSpec::default();
    let gp = g(1.5);
    let p1 = BergmanFunction::basis(1, &gp).unwrap();
    let p3 = BergmanFunction::basis(3, &gp).unwrap();
    assert!(bergman_inner(&p1, &p3, &gp, &spec).unwrap().norm() < 1e-10);
    let p5 = BergmanFunction::basis(5, &gp).unwrap();
    assert!((bergman_inner(&p5, &p5, &gp, &spec).unwrap().re - 1.0).abs() < 1e-8);
    let gp = g(1.0);
    let p1 = BergmanFunction::basis(1, &gp).unwrap();
    let k = BergmanFunction::kernel_section(c(0.5, 0.0), &gp).unwrap();
    let v = bergman_inner(&p1, &k, &gp, &spec).unwrap();
    assert!((v - c(0.5 / 2f64.sqrt(), 0.0)).norm() < 1e-8);
}

#[test]
fn oscillator_reference_values() {
    let cfg = PhysicalConfig::new(1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
    let ap = alpha_pm(&cfg).unwrap();
    assert!((ap.plus - 0.5 * (1.0 + 5f64.sqrt())).abs() < 1e-15);
    assert!((ap.minus - 1.0).abs() < 1e-15);
    let bad = PhysicalConfig::new(1.0, 1.0, 1.2 / 8.0, 1.0, 1.0).unwrap();
    assert!(alpha_pm(&bad).is_err());

    assert_eq!(omega0_of_gamma(&g(2.0)).unwrap(), 0.25);
    assert!((omega0_of_gamma(&g(1.5)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!(omega0_of_gamma(&g(1.0)).is_err());

    assert!((normalization_const(0, &AlphaPair::equal(1.5)).unwrap() - 1.0).abs() < 1e-14);
    assert!((normalization_const(0, &AlphaPair::equal(2.0)).unwrap() - 0.4343133439137066).abs() < 1e-14);

    let gp = g(2.0);
    assert_eq!(eigenfunction_eval(0, &gp, 0.0).unwrap(), c(0.0, 0.0));
    assert_close(eigenfunction_eval(0, &gp, 1.0).unwrap(), c(-0.052947601644315057822, -0.44993980222404349998), 1e-13);
    assert!((eigenfunction_eval(0, &gp, 1.0).unwrap().norm_sqr() - 0.20524927414529645470).abs() < 1e-14);
    assert_close(
        eigenfunction_eval(3, &g(2.5), 0.8).unwrap(),
        c(0.17841276408255264838, -0.23890165687908684184),
        1e-12,
    );
}

#[test]
fn coherent_state_reference_values() {
    let cases = [
        (1.3, c(2.0, -1.0), 2.0, c(-0.49669072786852753935, -0.61028886565880090766)),
        (0.7, c(1.0, 2.0), 1.5, c(0.20862676661609937172, -0.34328300916991997509)),
        (2.0, c(0.5, 0.5), 2.5, c(0.067969567928893196154, -0.65157110928214781535)),
    ];
    for (x, z, gamma, expected) in cases {
        let label = CoherentStateLabel::new(z, g(gamma)).unwrap();
        assert_close(cs_closed(x, &label).unwrap(), expected, 1e-12);
        assert_close(cs_series_auto(x, &label).unwrap().0, expected, 1e-12);
    }
}

#[test]
fn transform_reference_values() {
    let gp = g(2.0);
    let spec = QuadratureSpec::default();
    let z = c(1.0, 1.0);
    let phi3 = EigenExpansion::unit(gp, 3).unwrap().to_sampled().unwrap();
    let r = transform_apply_sampled(&phi3, &[z], &gp, &spec, Convention::ConjugateLinear).unwrap();
    assert_close(r.values[0].1, z.powu(3) / 720f64.sqrt(), 1e-6);

    let e = EigenExpansion::new(gp, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let r = transform_apply_coeffs(&e, &[c(2.0, 0.0)], Convention::ConjugateLinear).unwrap();
    assert!((r.values[0].1 - c(1.0, 0.0)).norm() < 1e-15);

    // scaling φ by 2i scales F by −2i
    let e = EigenExpansion::new(gp, vec![c(0.3, 0.1), c(-0.5, 0.2)]).unwrap();
    let scaled = EigenExpansion::new(gp, e.coefficients.iter().map(|v| v * c(0.0, 2.0)).collect()).unwrap();
    let a = transform_apply_sampled(&e.to_sampled().unwrap(), &[z], &gp, &spec, Convention::ConjugateLinear).unwrap();
    let b = transform_apply_sampled(&scaled.to_sampled().unwrap(), &[z], &gp, &spec, Convention::ConjugateLinear).unwrap();
    assert_close(b.values[0].1, a.values[0].1 * c(0.0, -2.0), 1e-12);

    // on the real axis the linear variant is the conjugate of the default
    let e = EigenExpansion::new(gp, vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
    let grid = [c(0.7, 0.0), c(-1.4, 0.0)];
    let d = transform_apply_coeffs(&e, &grid, Convention::ConjugateLinear).unwrap();
    let l = transform_apply_coeffs(&e, &grid, Convention::Linear).unwrap();
    for (u, v) in d.values.iter().zip(&l.values) {
        assert!((u.1.conj() - v.1).norm() < 1e-15);
    }
}
