//! Named verification suites.
//!
//! Every check compares an implementation path with an independent oracle
//! and returns a [`VerificationReport`]. A check's threshold is the larger of
//! its pinned accuracy and the tolerance requested in [`VerifyConfig`].
//! Random inputs come from a ChaCha stream seeded by [`VerifyConfig::seed`],
//! so reports are reproducible bit for bit.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bergman::{
    basis_element, bergman_gram_with, bergman_inner, kernel_closed, kernel_series, predicted_norm_sq, BergmanFunction,
    GammaParam, MeasureIndex,
};
use crate::bessel::{bessel_i, bessel_k};
use crate::gamma::{gamma, log_gamma};
use crate::hyper::{cdhahn_genfun_lhs, cdhahn_genfun_series, cdhahn_normalized_sequence, cdhahn_poly, CdHahnParams};
use crate::oscillator::{eigen_gram, eigenfunction_eval, energy_level, energy_level_tuned, gamma_from_physical, omega0_of_gamma, PhysicalConfig};
use crate::quadrature::QuadratureSpec;
use crate::report::{cval, VerificationReport};
use crate::transform::{
    cs_norm_sq, cs_series_auto, isometry_report, transform_apply_coeffs, transform_apply_sampled, CoherentState,
    CoherentStateLabel, Convention, EigenExpansion,
};
use crate::{Error, Result};

pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Pinned accuracies of the individual checks.
pub mod pinned {
    pub const GAMMA: f64 = 1e-12;
    pub const BESSEL_K: f64 = 1e-10;
    pub const BESSEL_I: f64 = 1e-11;
    pub const BESSEL_K_SYMMETRY: f64 = 1e-11;
    pub const GENERATING_FUNCTION: f64 = 1e-10;
    pub const CDHAHN_RECURRENCE: f64 = 1e-11;
    pub const ORTHONORMALITY: f64 = 1e-8;
    pub const PRINTED_MEASURE: f64 = 1e-8;
    pub const KERNEL_CLOSED: f64 = 1e-10;
    pub const REPRODUCING: f64 = 1e-8;
    pub const OMEGA0: f64 = 1e-12;
    pub const ENERGY: f64 = 1e-12;
    pub const CS_SERIES: f64 = 1e-9;
    pub const CS_NORM: f64 = 1e-6;
    pub const TRANSFORM: f64 = 1e-6;
    pub const ISOMETRY: f64 = 1e-6;
    pub const LINEARITY_EXACT: f64 = 1e-10;
    pub const LINEARITY_SAMPLED: f64 = 1e-6;
}

/// Points at which transforms are compared.
pub const TRANSFORM_GRID: [Complex64; 5] = [
    Complex64::new(1.0, 1.0),
    Complex64::new(2.0, 0.0),
    Complex64::new(0.0, -1.5),
    Complex64::new(0.5, -1.2),
    Complex64::new(-2.0, 0.5),
];

/// Labels for the coherent-state checks.
pub const CS_LABELS: [Complex64; 5] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(1.0, 2.0),
    Complex64::new(2.0, -1.0),
    Complex64::new(3.0, 0.0),
];

pub const CS_POINTS: [f64; 4] = [0.3, 0.7, 1.3, 2.7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gamma,
    Bessel,
    Hyper,
    Bergman,
    Oscillator,
    Transform,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Gamma,
        Suite::Bessel,
        Suite::Hyper,
        Suite::Bergman,
        Suite::Oscillator,
        Suite::Transform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gamma => "gamma",
            Suite::Bessel => "bessel",
            Suite::Hyper => "hyper",
            Suite::Bergman => "bergman",
            Suite::Oscillator => "oscillator",
            Suite::Transform => "transform",
            Suite::All => "all",
        }
    }

    /// Whether the suite needs `γ > 1`.
    pub fn needs_oscillator(self) -> bool {
        matches!(self, Suite::Oscillator | Suite::Transform | Suite::All)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub gamma: GammaParam,
    pub tol: f64,
    pub seed: u64,
    pub quadrature: QuadratureSpec,
}

impl VerifyConfig {
    pub fn new(gamma: GammaParam, tol: f64) -> Result<Self> {
        if !(MIN_TOL..=MAX_TOL).contains(&tol) {
            return Err(Error::Domain(format!("tolerance must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol:e}")));
        }
        Ok(Self { gamma, tol, seed: DEFAULT_SEED, quadrature: QuadratureSpec::default() })
    }

    pub fn threshold(&self, pinned: f64) -> f64 {
        pinned.max(self.tol)
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Runs `suite`; `All` runs every suite in order.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    if suite.needs_oscillator() {
        cfg.gamma.require_oscillator()?;
    }
    let gp = &cfg.gamma;
    let q = &cfg.quadrature;
    match suite {
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
        Suite::Gamma => Ok(vec![
            gamma_recurrence(&mut cfg.rng(1), 1000, cfg.threshold(pinned::GAMMA))?,
            gamma_imaginary_modulus(cfg.threshold(pinned::GAMMA))?,
        ]),
        Suite::Bessel => Ok(vec![
            bessel_k_half(cfg.threshold(pinned::BESSEL_K))?,
            bessel_i_half(cfg.threshold(pinned::BESSEL_I))?,
            bessel_k_symmetry(&[0.3, 1.7, 2.0 * gp.gamma - 1.0], cfg.threshold(pinned::BESSEL_K_SYMMETRY))?,
        ]),
        Suite::Hyper => Ok(vec![
            generating_function(gp.gamma, cfg.threshold(pinned::GENERATING_FUNCTION))?,
            cdhahn_recurrence(gp.gamma, cfg.threshold(pinned::CDHAHN_RECURRENCE))?,
        ]),
        Suite::Bergman => Ok(vec![
            bergman_orthonormality(gp, 12, MeasureIndex::Corrected, q, cfg.threshold(pinned::ORTHONORMALITY))?,
            printed_measure_regression(gp, 12, q, cfg.threshold(pinned::PRINTED_MEASURE))?,
            kernel_closed_form(gp, cfg.threshold(pinned::KERNEL_CLOSED))?,
            reproducing_property(gp, &mut cfg.rng(2), q, cfg.threshold(pinned::REPRODUCING))?,
        ]),
        Suite::Oscillator => Ok(vec![
            oscillator_orthonormality(gp, 8, q, cfg.threshold(pinned::ORTHONORMALITY))?,
            omega0_consistency(gp, cfg.threshold(pinned::OMEGA0))?,
            energy_spectrum(gp, cfg.threshold(pinned::ENERGY))?,
        ]),
        Suite::Transform => {
            let (exact, sampled) = conjugate_linearity(
                gp,
                &mut cfg.rng(5),
                q,
                cfg.threshold(pinned::LINEARITY_EXACT),
                cfg.threshold(pinned::LINEARITY_SAMPLED),
            )?;
            Ok(vec![
                cs_series_vs_closed(gp, cfg.threshold(pinned::CS_SERIES))?,
                cs_normalization(gp, false, q, cfg.threshold(pinned::CS_NORM))?,
                cs_normalization(gp, true, q, cfg.threshold(pinned::CS_NORM))?,
                transform_identity(gp, 6, q, cfg.threshold(pinned::TRANSFORM))?,
                norm_isometry(gp, 20, &mut cfg.rng(3), q, cfg.threshold(pinned::ISOMETRY))?,
                sampled_vs_coefficients(gp, &mut cfg.rng(4), q, cfg.threshold(pinned::TRANSFORM))?,
                exact,
                sampled,
            ])
        }
    }
}

fn random_complex(rng: &mut ChaCha8Rng, half_width: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-half_width..half_width), rng.gen_range(-half_width..half_width))
}

/// Random unit-norm coefficient vector of length `1..=max_len`.
pub fn random_unit_coefficients(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Complex64> {
    let len = rng.gen_range(1..=max_len);
    loop {
        let c: Vec<Complex64> = (0..len).map(|_| random_complex(rng, 1.0)).collect();
        let norm = c.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return c.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// Error relative to `max(1, |expected|)`.
fn scaled_error(expected: Complex64, got: Complex64) -> f64 {
    (got - expected).norm() / expected.norm().max(1.0)
}

pub fn gamma_recurrence(rng: &mut ChaCha8Rng, count: usize, tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder(
        "gamma-recurrence",
        json!({ "points": count, "strip": "|Re z| <= 10, |Im z| <= 10", "min_pole_distance": 0.05 }),
        tol,
    );
    let mut drawn = 0;
    while drawn < count {
        let z = random_complex(rng, 10.0);
        let near_pole = z.im.abs() < 0.05 && z.re < 0.05 && (z.re - z.re.round()).abs() < 0.05;
        if near_pole {
            continue;
        }
        drawn += 1;
        let g1 = gamma(z + 1.0)?;
        let gz = gamma(z)?;
        b.complex(json!({ "z": cval(z) }), g1, z * gz, true);
    }
    Ok(b.finish())
}

/// `|Γ(ix)|² = π / (x sinh πx)` for `x = 0.05, 0.10, …, 30`.
pub fn gamma_imaginary_modulus(tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder("gamma-imaginary-modulus", json!({ "x": "0.05..=30 step 0.05" }), tol);
    for k in 1..=600 {
        let x = 0.05 * k as f64;
        let got = (2.0 * log_gamma(Complex64::new(0.0, x))?.re).exp();
        // x sinh πx = x e^{πx}(1 − e^{−2πx})/2
        let expected = 2.0 * PI * (-PI * x).exp() / (x * (-(-2.0 * PI * x).exp_m1()));
        b.real(json!({ "x": x }), 1.0, got / expected, true);
    }
    Ok(b.finish())
}

/// `K_{1/2}(ρ) = √(π/2ρ) e^{−ρ}` on `ρ ∈ [0.1, 20]`.
pub fn bessel_k_half(tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder("bessel-k-half", json!({ "rho": "0.1..=20 step 0.1" }), tol);
    for k in 1..=200 {
        let rho = 0.1 * k as f64;
        let expected = (PI / (2.0 * rho)).sqrt() * (-rho).exp();
        let got = bessel_k(0.5, rho, 1e-14)?;
        b.real(json!({ "rho": rho }), 1.0, got / expected, true);
    }
    Ok(b.finish())
}

/// `I_{1/2}(ζ) = √(2/πζ) sinh ζ` on `ζ ∈ [0.1, 10]`.
pub fn bessel_i_half(tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder("bessel-i-half", json!({ "zeta": "0.1..=10 step 0.1" }), tol);
    for k in 1..=100 {
        let zeta = 0.1 * k as f64;
        let expected = (2.0 / (PI * zeta)).sqrt() * zeta.sinh();
        let got = bessel_i(0.5, Complex64::new(zeta, 0.0), 1e-16)?;
        b.complex(json!({ "zeta": zeta }), Complex64::new(expected, 0.0), got, true);
    }
    Ok(b.finish())
}

/// `K_ν(ρ) = K_{−ν}(ρ)`; the MacDonald integrand is not symmetric in `ν`.
pub fn bessel_k_symmetry(orders: &[f64], tol: f64) -> Result<VerificationReport> {
    let rhos = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
    let mut b = VerificationReport::builder("bessel-k-symmetry", json!({ "nu": orders, "rho": rhos }), tol);
    for &nu in orders {
        for &rho in &rhos {
            let p = bessel_k(nu, rho, 1e-14)?;
            let m = bessel_k(-nu, rho, 1e-14)?;
            b.real(json!({ "nu": nu, "rho": rho }), 1.0, m / p, true);
        }
    }
    Ok(b.finish())
}

/// `e^ξ ₂F₂(γ+ix, γ−ix; 2γ, γ+½; −ξ) = Σ S_n ξⁿ / ((2γ)_n (γ+½)_n n!)`.
pub fn generating_function(gamma: f64, tol: f64) -> Result<VerificationReport> {
    let xs = [0.3, 1.0, 2.7];
    let xis = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.0, -2.0),
        Complex64::new(1.0, 0.5),
        Complex64::new(3.0, 0.0),
    ];
    let p = CdHahnParams::oscillator(gamma)?;
    let mut b = VerificationReport::builder(
        "cdhahn-generating-function",
        json!({ "gamma": gamma, "x": xs, "xi": xis.iter().map(|z| cval(*z)).collect::<Vec<_>>() }),
        tol,
    );
    for &x in &xs {
        for &xi in &xis {
            let lhs = cdhahn_genfun_lhs(x, xi, p, 1e-16)?;
            let (rhs, terms) = cdhahn_genfun_series(x, xi, p)?;
            b.complex(json!({ "x": x, "xi": cval(xi), "terms": terms }), lhs, rhs, true);
        }
    }
    Ok(b.finish())
}

/// The three-term recurrence against the terminating sum, `n ≤ 8`.
pub fn cdhahn_recurrence(gamma: f64, tol: f64) -> Result<VerificationReport> {
    let p = CdHahnParams::oscillator(gamma)?;
    let xs = [0.0, 0.4, 1.7, 4.0];
    let mut b = VerificationReport::builder("cdhahn-recurrence", json!({ "gamma": gamma, "x": xs, "n_max": 8 }), tol);
    for &x in &xs {
        let seq = cdhahn_normalized_sequence(8, x * x, p)?;
        let mut scale = 1.0;
        for (n, v) in seq.iter().enumerate() {
            if n > 0 {
                scale *= (p.a + p.b + (n - 1) as f64) * (p.a + p.c + (n - 1) as f64);
            }
            let direct = cdhahn_poly(n, x * x, p)? / scale;
            b.real(json!({ "n": n, "x": x }), direct, *v, true);
        }
    }
    Ok(b.finish())
}

/// `|⟨ψ_m, ψ_n⟩_γ − δ_mn|` for `m, n ≤ n_max`. With the printed measure
/// index this fails for `γ ≠ ½`.
pub fn bergman_orthonormality(
    gp: &GammaParam,
    n_max: usize,
    index: MeasureIndex,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let fns = (0..=n_max).map(|n| BergmanFunction::basis(n, gp)).collect::<Result<Vec<_>>>()?;
    let gram = bergman_gram_with(&fns, gp, index, spec)?;
    let name = match index {
        MeasureIndex::Corrected => "bergman-orthonormality",
        MeasureIndex::Printed => "bergman-orthonormality-printed-index",
    };
    let mut b = VerificationReport::builder(
        name,
        json!({ "gamma": gp.gamma, "n_max": n_max, "bessel_index": index.order(gp.gamma) }),
        tol,
    );
    for (m, row) in gram.iter().enumerate() {
        for (n, g) in row.iter().enumerate() {
            let delta = Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0);
            b.case(json!({ "m": m, "n": n }), cval(delta), cval(*g), (g - delta).norm());
        }
    }
    if index == MeasureIndex::Printed {
        b.note(format!("measure uses the printed Bessel index {}", index.order(gp.gamma)));
    }
    Ok(b.finish())
}

/// With the printed index the basis stays orthogonal but `‖ψ_n‖²` follows the
/// Γ-ratio moment formula instead of one; this check pins those values.
pub fn printed_measure_regression(gp: &GammaParam, n_max: usize, spec: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let fns = (0..=n_max).map(|n| BergmanFunction::basis(n, gp)).collect::<Result<Vec<_>>>()?;
    let gram = bergman_gram_with(&fns, gp, MeasureIndex::Printed, spec)?;
    let mut b = VerificationReport::builder(
        "erratum-printed-measure-index",
        json!({ "gamma": gp.gamma, "n_max": n_max, "bessel_index": MeasureIndex::Printed.order(gp.gamma) }),
        tol,
    );
    for (n, row) in gram.iter().enumerate() {
        let expected = predicted_norm_sq(n, gp, MeasureIndex::Printed)?;
        b.real(json!({ "n": n }), expected, row[n].re, true);
    }
    b.note(format!(
        "printed index {} in place of {}; norms deviate from one unless gamma = 1/2",
        MeasureIndex::Printed.order(gp.gamma),
        MeasureIndex::Corrected.order(gp.gamma)
    ));
    Ok(b.finish())
}

/// Seven points in the disk of radius 5 with varied phases.
pub fn kernel_grid() -> [Complex64; 7] {
    [
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(0.5, 0.3),
        Complex64::from_polar(1.2, 2.1),
        Complex64::from_polar(2.0, -1.0),
        Complex64::from_polar(3.0, PI),
        Complex64::from_polar(4.0, 0.9),
        Complex64::from_polar(5.0, -2.6),
    ]
}

/// Closed form of the kernel against its power series on a 7×7 grid.
pub fn kernel_closed_form(gp: &GammaParam, tol: f64) -> Result<VerificationReport> {
    let grid = kernel_grid();
    let mut b = VerificationReport::builder(
        "kernel-closed-form",
        json!({ "gamma": gp.gamma, "grid": grid.iter().map(|z| cval(*z)).collect::<Vec<_>>() }),
        tol,
    );
    for &z in &grid {
        for &w in &grid {
            let series = kernel_series(z, w, gp, 1e-16)?;
            let closed = kernel_closed(z, w, gp)?;
            b.complex(json!({ "z": cval(z), "w": cval(w) }), series, closed, true);
        }
    }
    Ok(b.finish())
}

/// `⟨f, K_w⟩_γ = f(w)` for a random expansion `f` and `⟨K_w, K_w⟩ = K(w, w)`.
pub fn reproducing_property(gp: &GammaParam, rng: &mut ChaCha8Rng, spec: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let coeffs: Vec<Complex64> = (0..6).map(|_| random_complex(rng, 1.0)).collect();
    let f = BergmanFunction::expansion(&coeffs, gp)?;
    let ws = [Complex64::new(0.7, -0.4), Complex64::new(-1.5, 1.0), Complex64::new(0.0, 2.5)];
    let mut b = VerificationReport::builder(
        "reproducing-property",
        json!({ "gamma": gp.gamma, "coefficients": coeffs.iter().map(|c| cval(*c)).collect::<Vec<_>>() }),
        tol,
    );
    for &w in &ws {
        let kw = BergmanFunction::kernel_section(w, gp)?;
        let got = bergman_inner(&f, &kw, gp, spec)?;
        let expected = f.eval(w);
        b.case(json!({ "w": cval(w), "f": "expansion" }), cval(expected), cval(got), scaled_error(expected, got));
        let got = bergman_inner(&kw, &kw, gp, spec)?;
        let expected = kernel_series(w, w, gp, 1e-16)?;
        b.complex(json!({ "w": cval(w), "f": "kernel section" }), expected, got, true);
    }
    Ok(b.finish())
}

pub fn oscillator_orthonormality(gp: &GammaParam, n_max: usize, spec: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let gram = eigen_gram(gp, n_max, spec)?;
    let mut b = VerificationReport::builder("oscillator-orthonormality", json!({ "gamma": gp.gamma, "n_max": n_max }), tol);
    for (m, row) in gram.iter().enumerate() {
        for (n, g) in row.iter().enumerate() {
            let delta = Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0);
            b.case(json!({ "m": m, "n": n }), cval(delta), cval(*g), (g - delta).norm());
        }
    }
    for n in 0..=n_max {
        let v = eigenfunction_eval(n, gp, 0.0)?;
        b.case(json!({ "n": n, "x": 0.0 }), cval(Complex64::new(0.0, 0.0)), cval(v), v.norm());
    }
    Ok(b.finish())
}

/// Tuned configurations for a few `(m, ħ, c)`.
pub fn tuned_configs(gp: &GammaParam) -> Result<Vec<PhysicalConfig>> {
    [(1.0, 1.0, 1.0), (0.511, 0.658, 2.998), (938.3, 1.0546, 1.0), (2.5e-3, 3.0, 40.0)]
        .iter()
        .map(|&(m, h, c)| PhysicalConfig::tuned(gp, m, h, c))
        .collect()
}

/// `ħω/(mc²) = 1/(2γ(γ−1))` with `γ` recovered from the physical parameters.
pub fn omega0_consistency(gp: &GammaParam, tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder("omega0-consistency", json!({ "gamma": gp.gamma }), tol);
    for cfg in tuned_configs(gp)? {
        let recovered = gamma_from_physical(&cfg)?;
        let inputs = json!({ "mass": cfg.mass, "omega": cfg.omega, "coupling": cfg.coupling, "hbar": cfg.hbar, "c": cfg.c });
        b.real(inputs.clone(), 1.0, cfg.omega0() / omega0_of_gamma(&recovered)?, true);
        b.real(json!({ "recovered_gamma": inputs }), gp.gamma, recovered.gamma, true);
    }
    b.note("omega0 = 1/(2 gamma (gamma - 1))");
    Ok(b.finish())
}

/// `ε_n/ħω` from the physical exponents against `2n + 2γ`.
pub fn energy_spectrum(gp: &GammaParam, tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder("energy-spectrum", json!({ "gamma": gp.gamma, "n": "0..=8" }), tol);
    for cfg in tuned_configs(gp)? {
        for n in 0..=8 {
            let got = energy_level(n, &cfg)? / (cfg.hbar * cfg.omega);
            b.real(json!({ "n": n, "mass": cfg.mass }), energy_level_tuned(n, gp), got, true);
        }
    }
    Ok(b.finish())
}

pub fn cs_series_vs_closed(gp: &GammaParam, tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder(
        "coherent-state-series-vs-closed",
        json!({ "gamma": gp.gamma, "x": CS_POINTS, "z": CS_LABELS.iter().map(|z| cval(*z)).collect::<Vec<_>>() }),
        tol,
    );
    for &z in &CS_LABELS {
        let label = CoherentStateLabel::new(z, *gp)?;
        let cs = CoherentState::new(label)?;
        for &x in &CS_POINTS {
            let (series, n) = cs_series_auto(x, &label)?;
            let closed = cs.eval_closed_form(x)?;
            b.complex(json!({ "z": cval(z), "x": x, "terms": n + 1 }), series, closed, true);
        }
    }
    Ok(b.finish())
}

/// `∫|⟨x|z;γ⟩|² dx = 1`, or `½` for the printed closed form without `√2`.
pub fn cs_normalization(gp: &GammaParam, printed: bool, spec: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let (name, expected) = if printed {
        ("erratum-printed-coherent-state-normalization", 0.5)
    } else {
        ("coherent-state-normalization", 1.0)
    };
    let mut b = VerificationReport::builder(name, json!({ "gamma": gp.gamma, "tol": spec.tol }), tol);
    for &z in &CS_LABELS {
        let label = CoherentStateLabel::new(z, *gp)?;
        let cs = if printed { CoherentState::printed(label)? } else { CoherentState::new(label)? };
        let got = cs_norm_sq(&cs, gp, spec)?;
        b.real(json!({ "z": cval(z) }), expected, got, false);
    }
    if printed {
        b.note("closed form without the factor sqrt(2) normalizes to 1/2");
    }
    Ok(b.finish())
}

/// `F[φ_n] = ψ_n` on [`TRANSFORM_GRID`] by quadrature.
pub fn transform_identity(gp: &GammaParam, n_max: usize, spec: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder(
        "transform-eigenstate-to-monomial",
        json!({ "gamma": gp.gamma, "n_max": n_max, "grid": TRANSFORM_GRID.iter().map(|z| cval(*z)).collect::<Vec<_>>() }),
        tol,
    );
    for n in 0..=n_max {
        let phi = EigenExpansion::unit(*gp, n)?.to_sampled()?;
        let r = transform_apply_sampled(&phi, &TRANSFORM_GRID, gp, spec, Convention::ConjugateLinear)?;
        for (z, f) in r.values {
            b.complex(json!({ "n": n, "z": cval(z) }), basis_element(n, gp, z), f, true);
        }
    }
    Ok(b.finish())
}

/// `‖F[φ]‖²_γ = ‖φ‖² = 1` for random unit-norm expansions of length `≤ 8`.
pub fn norm_isometry(gp: &GammaParam, count: usize, rng: &mut ChaCha8Rng, spec: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let mut b = VerificationReport::builder("transform-norm-isometry", json!({ "gamma": gp.gamma, "expansions": count, "max_len": 8 }), tol);
    for k in 0..count {
        let coeffs = random_unit_coefficients(rng, 8);
        let exp = EigenExpansion::new(*gp, coeffs)?;
        let r = isometry_report(&exp, spec, tol)?;
        for c in r.cases {
            let mut inputs = c.inputs;
            inputs["expansion"] = json!(k);
            inputs["coefficients"] = r.parameters["coefficients"].clone();
            b.case(inputs, c.expected, c.got, c.error);
        }
    }
    Ok(b.finish())
}

/// Quadrature and coefficient paths of the transform agree.
pub fn sampled_vs_coefficients(gp: &GammaParam, rng: &mut ChaCha8Rng, spec: &QuadratureSpec, tol: f64) -> Result<VerificationReport> {
    let coeffs = random_unit_coefficients(rng, 8);
    let exp = EigenExpansion::new(*gp, coeffs.clone())?;
    let mut b = VerificationReport::builder(
        "transform-sampled-vs-coefficients",
        json!({ "gamma": gp.gamma, "coefficients": coeffs.iter().map(|c| cval(*c)).collect::<Vec<_>>() }),
        tol,
    );
    for conv in [Convention::ConjugateLinear, Convention::Linear] {
        let exact = transform_apply_coeffs(&exp, &TRANSFORM_GRID, conv)?;
        let quad = transform_apply_sampled(&exp.to_sampled()?, &TRANSFORM_GRID, gp, spec, conv)?;
        for ((z, e), (_, q)) in exact.values.iter().zip(&quad.values) {
            b.case(json!({ "z": cval(*z), "convention": conv.name() }), cval(*e), cval(*q), scaled_error(*e, *q));
        }
    }
    Ok(b.finish())
}

/// `F[aφ + bχ] = conj(a) F[φ] + conj(b) F[χ]` on the coefficient path and on
/// the quadrature path, one report each.
pub fn conjugate_linearity(
    gp: &GammaParam,
    rng: &mut ChaCha8Rng,
    spec: &QuadratureSpec,
    tol_exact: f64,
    tol_sampled: f64,
) -> Result<(VerificationReport, VerificationReport)> {
    let a = random_complex(rng, 2.0);
    let bb = random_complex(rng, 2.0);
    let u: Vec<Complex64> = (0..5).map(|_| random_complex(rng, 1.0)).collect();
    let v: Vec<Complex64> = (0..5).map(|_| random_complex(rng, 1.0)).collect();
    let w: Vec<Complex64> = u.iter().zip(&v).map(|(x, y)| a * x + bb * y).collect();
    let exps = [EigenExpansion::new(*gp, u)?, EigenExpansion::new(*gp, v)?, EigenExpansion::new(*gp, w)?];
    let params = json!({ "gamma": gp.gamma, "a": cval(a), "b": cval(bb) });

    let exact = |e: &EigenExpansion| -> Result<Vec<Complex64>> {
        let r = transform_apply_coeffs(e, &TRANSFORM_GRID, Convention::ConjugateLinear)?;
        Ok(r.values.into_iter().map(|(_, f)| f).collect())
    };
    let sampled = |e: &EigenExpansion| -> Result<Vec<Complex64>> {
        let r = transform_apply_sampled(&e.to_sampled()?, &TRANSFORM_GRID, gp, spec, Convention::ConjugateLinear)?;
        Ok(r.values.into_iter().map(|(_, f)| f).collect())
    };
    let mut out = Vec::new();
    for (name, tol, path) in [
        ("transform-conjugate-linearity-coefficients", tol_exact, &exact as &dyn Fn(&EigenExpansion) -> Result<Vec<Complex64>>),
        ("transform-conjugate-linearity-quadrature", tol_sampled, &sampled),
    ] {
        let f = exps.iter().map(path).collect::<Result<Vec<_>>>()?;
        let mut b = VerificationReport::builder(name, params.clone(), tol);
        for (i, z) in TRANSFORM_GRID.iter().enumerate() {
            let expected = a.conj() * f[0][i] + bb.conj() * f[1][i];
            b.case(json!({ "z": cval(*z) }), cval(expected), cval(f[2][i]), scaled_error(expected, f[2][i]));
        }
        out.push(b.finish());
    }
    let sampled = out.pop().expect("two reports");
    let exact = out.pop().expect("two reports");
    Ok((exact, sampled))
}
