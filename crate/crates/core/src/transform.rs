//! Coherent states and the index ₂F₂ transform.
//!
//! The coherent state labelled by `z ∈ ℂ` is
//! `⟨x|z; γ⟩ = K(z,z)^{−1/2} Σ_n ψ_n(z) φ_n(x)`, which sums to
//!
//! `√2 i^γ ω₀^{ix} Γ(γ+ix)² e^z ₂F₂(γ+ix, γ−ix; 2γ, γ+½; −z)
//!   / (√K(z,z) √Γ(2γ) Γ(γ+½) Γ(ix))`.
//!
//! The transform is
//! `F[φ](z) = √K(z,z) ∫₀^∞ ⟨x|z; γ⟩ conj(φ(x)) dx = Σ_n conj(c_n) ψ_n(z)`
//! for `φ = Σ c_n φ_n`. It is conjugate-linear in `φ`, holomorphic in `z`
//! and sends `φ_n` to `ψ_n`. The linear variant is
//! `F_lin[φ](z) = conj(F[φ](z̄)) = Σ c_n ψ_n(z)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bergman::{basis_element, bergman_inner, ln_basis_norm, ln_kernel_diagonal, BergmanFunction, GammaParam};
use crate::gamma::{ln_gamma_real, log_gamma};
use crate::hyper::{pfq_series_with_condition, HyperSeriesSpec};
use crate::oscillator::{default_cutoff, omega0_of_gamma, Eigenbasis};
use crate::quadrature::{integrate_halfline, integrate_interval_checked, DecayEnvelope, QuadratureSpec};
use crate::report::{cval, VerificationReport};
use crate::{Error, Result};

/// Largest `|z|` accepted as a coherent-state label.
pub const MAX_LABEL_MODULUS: f64 = 25.0;

/// Largest truncation index used by [`cs_series_auto`].
pub const MAX_SERIES_TERMS: usize = 400;

/// Relative coefficient tail at which [`cs_series_auto`] truncates.
const SERIES_TAIL: f64 = 1e-13;

/// Cancellation ratio of the ₂F₂ sum above which [`CoherentState::eval`]
/// switches from the closed form to the eigenfunction series.
pub const MAX_CLOSED_FORM_CANCELLATION: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentStateLabel {
    pub z: Complex64,
    pub gamma: GammaParam,
}

impl CoherentStateLabel {
    pub fn new(z: Complex64, gamma: GammaParam) -> Result<Self> {
        gamma.require_oscillator()?;
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > MAX_LABEL_MODULUS {
            return Err(Error::Domain(format!(
                "coherent-state label must satisfy |z| ≤ {MAX_LABEL_MODULUS}, got {z}"
            )));
        }
        Ok(Self { z, gamma })
    }
}

/// `⟨x|z; γ⟩` truncated after `n_terms`: `K^{−1/2} Σ_{n≤N} ψ_n(z) φ_n(x)`.
pub fn cs_series(x: f64, label: &CoherentStateLabel, n_terms: usize) -> Result<Complex64> {
    let gp = label.gamma;
    let basis = Eigenbasis::new(&gp, n_terms)?;
    let mut phi = vec![Complex64::new(0.0, 0.0); n_terms + 1];
    basis.eval_into(x, &mut phi)?;
    let mut sum = crate::sum::ComplexSum::new();
    for (n, p) in phi.iter().enumerate() {
        sum.add(basis_element(n, &gp, label.z) * p);
    }
    Ok(sum.value() * (-0.5 * ln_kernel_diagonal(label.z, &gp)?).exp())
}

/// Smallest `N` with `|z|^{N+1} / √((N+1)! (2γ)_{N+1}) < 1e-13 √K(z,z)`.
pub fn series_truncation(label: &CoherentStateLabel) -> Result<usize> {
    let gp = label.gamma;
    let r = label.z.norm();
    if r == 0.0 {
        return Ok(0);
    }
    let target = SERIES_TAIL.ln() + 0.5 * ln_kernel_diagonal(label.z, &gp)?;
    for n in 0..MAX_SERIES_TERMS {
        let m = n + 1;
        if m as f64 * r.ln() - ln_basis_norm(m, &gp)? < target {
            return Ok(n);
        }
    }
    Err(Error::NoConvergence { terms: MAX_SERIES_TERMS })
}

/// [`cs_series`] with the truncation of [`series_truncation`]; returns the
/// value and the index `N` used.
pub fn cs_series_auto(x: f64, label: &CoherentStateLabel) -> Result<(Complex64, usize)> {
    let n = series_truncation(label)?;
    Ok((cs_series(x, label, n)?, n))
}

/// A coherent state prepared for repeated evaluation in `x`.
///
/// [`eval`](Self::eval) uses the closed form unless its ₂F₂ sum cancels by
/// more than [`MAX_CLOSED_FORM_CANCELLATION`] (large `|z|`, or large `x`),
/// where it falls back to the truncated eigenfunction series whose terms do
/// not cancel.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub label: CoherentStateLabel,
    ln_kernel: f64,
    ln_const: f64,
    ln_omega0: f64,
    factor: f64,
    basis: Eigenbasis,
    coeffs: Vec<Complex64>,
    envelope: DecayEnvelope,
}

/// Decay rate and degree of the coherent-state envelope shape.
const CS_RATE: f64 = FRAC_PI_2 - FRAC_PI_8;

impl CoherentState {
    pub fn new(label: CoherentStateLabel) -> Result<Self> {
        Self::with_factor(label, (2.0f64).ln())
    }

    /// The closed form without the factor `√2`, i.e. normalized to ½.
    pub fn printed(label: CoherentStateLabel) -> Result<Self> {
        Self::with_factor(label, 0.0)
    }

    fn with_factor(label: CoherentStateLabel, ln_factor_sq: f64) -> Result<Self> {
        let g = label.gamma.gamma;
        let ln_kernel = ln_kernel_diagonal(label.z, &label.gamma)?;
        let ln_const = 0.5 * ln_factor_sq - 0.5 * ln_gamma_real(2.0 * g)? - ln_gamma_real(g + 0.5)?;
        let ln_omega0 = omega0_of_gamma(&label.gamma)?.ln();
        let n = series_truncation(&label)?;
        let basis = Eigenbasis::new(&label.gamma, n)?;
        let coeffs = (0..=n).map(|k| basis_element(k, &label.gamma, label.z)).collect();
        let mut cs = Self {
            label,
            ln_kernel,
            ln_const,
            ln_omega0,
            factor: (0.5 * ln_factor_sq - 0.5 * (2.0f64).ln()).exp(),
            basis,
            coeffs,
            envelope: DecayEnvelope::zero(),
        };
        cs.envelope = cs.calibrate_envelope()?;
        Ok(cs)
    }

    pub fn ln_kernel_diagonal(&self) -> f64 {
        self.ln_kernel
    }

    /// `⟨x|z; γ⟩`, zero at `x = 0`.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(self.eval_kernel(x)? * (-0.5 * self.ln_kernel).exp())
    }

    /// `√K(z,z) ⟨x|z; γ⟩`, the transform kernel.
    pub fn eval_kernel(&self, x: f64) -> Result<Complex64> {
        let (v, cancellation) = self.closed_kernel(x)?;
        if cancellation <= MAX_CLOSED_FORM_CANCELLATION {
            return Ok(v);
        }
        let mut phi = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        self.basis.eval_into(x, &mut phi)?;
        let mut sum = crate::sum::ComplexSum::new();
        for (c, p) in self.coeffs.iter().zip(&phi) {
            sum.add(c * p);
        }
        Ok(sum.value() * self.factor)
    }

    /// `⟨x|z; γ⟩` from the closed form only.
    pub fn eval_closed_form(&self, x: f64) -> Result<Complex64> {
        Ok(self.closed_kernel(x)?.0 * (-0.5 * self.ln_kernel).exp())
    }

    /// Closed-form kernel and the cancellation ratio of its ₂F₂ sum.
    fn closed_kernel(&self, x: f64) -> Result<(Complex64, f64)> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("coherent states need x ≥ 0, got {x}")));
        }
        if x == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 1.0));
        }
        let g = self.label.gamma.gamma;
        let z = self.label.z;
        let spec = HyperSeriesSpec::new(
            vec![Complex64::new(g, x), Complex64::new(g, -x)],
            vec![Complex64::new(2.0 * g, 0.0), Complex64::new(g + 0.5, 0.0)],
            -z,
        )
        .with_tol(1e-16);
        let (f, cancellation) = pfq_series_with_condition(&spec)?;
        let ln = log_gamma(Complex64::new(g, x))? * 2.0 - log_gamma(Complex64::new(0.0, x))?
            + Complex64::new(self.ln_const, 0.5 * PI * g + x * self.ln_omega0)
            + z;
        let v = ln.exp() * f;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Ok((v, f64::INFINITY));
        }
        Ok((v, cancellation))
    }

    /// Envelope of `|⟨x|z; γ⟩|` of the form `s (1+x)^{2γ+½} e^{−3πx/8}`.
    ///
    /// The scale is calibrated: twice the largest ratio of `|⟨x|z; γ⟩|` to the
    /// shape on the probe grid `x = 0.25 j ≤ min(20 + 20|z|, 300)`. It is not
    /// a proof; every quadrature node re-checks it and a violation aborts the
    /// integration.
    pub fn envelope(&self) -> DecayEnvelope {
        self.envelope
    }

    fn calibrate_envelope(&self) -> Result<DecayEnvelope> {
        let degree = 2.0 * self.label.gamma.gamma + 0.5;
        let shape = DecayEnvelope::exponential(1.0, CS_RATE, degree);
        let end = (20.0 + 20.0 * self.label.z.norm()).min(300.0);
        let steps = (end / 0.25).ceil() as usize;
        let mut worst = 0.0f64;
        for j in 1..=steps {
            let x = 0.25 * j as f64;
            let ratio = self.eval(x)?.norm() / shape.bound(x);
            worst = worst.max(ratio);
        }
        Ok(shape.scaled(2.0 * worst.max(f64::MIN_POSITIVE)))
    }
}

/// `⟨x|z; γ⟩` from the closed form.
pub fn cs_closed(x: f64, label: &CoherentStateLabel) -> Result<Complex64> {
    CoherentState::new(*label)?.eval_closed_form(x)
}

/// The closed form without `√2`.
pub fn cs_closed_printed(x: f64, label: &CoherentStateLabel) -> Result<Complex64> {
    CoherentState::printed(*label)?.eval_closed_form(x)
}

/// `∫₀^∞ |⟨x|z; γ⟩|² dx`.
pub fn cs_norm_sq(cs: &CoherentState, gp: &GammaParam, spec: &QuadratureSpec) -> Result<f64> {
    let spec = spec.with_cutoff(spec.cutoff.max(default_cutoff(gp)));
    let env = cs.envelope().squared();
    // the integrand is checked against the envelope at every node
    let failure = std::sync::Mutex::new(None);
    let v = integrate_halfline(
        |x| match cs.eval(x) {
            Ok(v) => Complex64::new(v.norm_sqr(), 0.0),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &env,
        &spec,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(v?.re)
}

/// Which of the two transforms to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `F[φ](z) = Σ conj(c_n) ψ_n(z)`.
    #[default]
    ConjugateLinear,
    /// `F_lin[φ](z) = conj(F[φ](z̄)) = Σ c_n ψ_n(z)`.
    Linear,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::ConjugateLinear => "conjugate-linear",
            Convention::Linear => "linear",
        }
    }
}

/// A finite expansion `φ = Σ c_n φ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenExpansion {
    pub gamma: GammaParam,
    pub coefficients: Vec<Complex64>,
}

impl EigenExpansion {
    pub fn new(gamma: GammaParam, coefficients: Vec<Complex64>) -> Result<Self> {
        gamma.require_oscillator()?;
        if coefficients.is_empty() {
            return Err(Error::Domain("an expansion needs at least one coefficient".into()));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("expansion coefficients must be finite".into()));
        }
        Ok(Self { gamma, coefficients })
    }

    /// `φ_n`.
    pub fn unit(gamma: GammaParam, n: usize) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::new(gamma, c)
    }

    /// `Σ |c_n|²`.
    pub fn norm_sq(&self) -> f64 {
        self.coefficients.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn basis(&self) -> Result<Eigenbasis> {
        Eigenbasis::new(&self.gamma, self.coefficients.len() - 1)
    }

    /// `Σ |c_n| s_n (1+x)^{max d_n} e^{−πx/2}` from the eigenfunction envelopes.
    pub fn envelope(&self) -> Result<DecayEnvelope> {
        let basis = self.basis()?;
        let envs = basis.envelopes()?;
        let scale: f64 = self.coefficients.iter().zip(envs).map(|(c, e)| c.norm() * e.scale).sum();
        let degree = envs.iter().fold(0.0f64, |m, e| m.max(e.degree));
        Ok(DecayEnvelope::exponential(scale, FRAC_PI_2, degree))
    }

    pub fn to_sampled(&self) -> Result<SampledFunction> {
        let basis = Arc::new(self.basis()?);
        let coeffs = self.coefficients.clone();
        let envelope = self.envelope()?;
        Ok(SampledFunction::new(
            move |x| {
                let mut phi = vec![Complex64::new(0.0, 0.0); coeffs.len()];
                basis.eval_into(x, &mut phi)?;
                Ok(coeffs.iter().zip(&phi).map(|(c, p)| c * p).sum())
            },
            envelope,
            None,
            format!("eigen-expansion of length {}", self.coefficients.len()),
        ))
    }

    /// `F[φ]` as an element of the Bergman space.
    pub fn image(&self, convention: Convention) -> Result<BergmanFunction> {
        let coeffs: Vec<Complex64> = match convention {
            Convention::ConjugateLinear => self.coefficients.iter().map(Complex64::conj).collect(),
            Convention::Linear => self.coefficients.clone(),
        };
        BergmanFunction::expansion(&coeffs, &self.gamma)
    }
}

type SampleEvaluator = Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>;

/// A function on `[0, X]` (or the whole half-line) with a declared envelope.
#[derive(Clone)]
pub struct SampledFunction {
    evaluator: SampleEvaluator,
    pub envelope: DecayEnvelope,
    /// Last abscissa where the function is known; `None` for the half-line.
    pub domain_end: Option<f64>,
    pub descriptor: String,
}

impl std::fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SampledFunction")
            .field("envelope", &self.envelope)
            .field("domain_end", &self.domain_end)
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

impl SampledFunction {
    pub fn new<F>(evaluator: F, envelope: DecayEnvelope, domain_end: Option<f64>, descriptor: String) -> Self
    where
        F: Fn(f64) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self { evaluator: Arc::new(evaluator), envelope, domain_end, descriptor }
    }

    /// Tabulated values, interpolated by local cubic Lagrange polynomials on
    /// the four nearest samples. Abscissae must be strictly increasing and
    /// nonnegative; if the first one is positive the point `(0, 0)` is
    /// prepended, matching the boundary condition `φ(0) = 0`.
    pub fn tabulated(xs: Vec<f64>, values: Vec<Complex64>, envelope: DecayEnvelope) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::Domain(format!("{} abscissae but {} values", xs.len(), values.len())));
        }
        envelope.validate()?;
        let (mut xs, mut values) = (xs, values);
        if xs.first().is_some_and(|&x0| x0 > 0.0) {
            xs.insert(0, 0.0);
            values.insert(0, Complex64::new(0.0, 0.0));
        }
        if xs.len() < 4 {
            return Err(Error::Domain("at least four samples are needed".into()));
        }
        if xs[0] < 0.0 || xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("sample abscissae must be finite, nonnegative and strictly increasing".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("sample values must be finite".into()));
        }
        let end = *xs.last().unwrap_or(&0.0);
        let descriptor = format!("{} samples on [0, {end}]", xs.len());
        let evaluator = move |x: f64| -> Result<Complex64> {
            if !(x >= 0.0) || x > end {
                return Err(Error::Domain(format!("x = {x} lies outside the sampled range [0, {end}]")));
            }
            let i = xs.partition_point(|&t| t <= x);
            let start = i.saturating_sub(2).min(xs.len() - 4);
            let (px, pv) = (&xs[start..start + 4], &values[start..start + 4]);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..4 {
                let mut l = 1.0;
                for k in 0..4 {
                    if k != j {
                        l *= (x - px[k]) / (px[j] - px[k]);
                    }
                }
                acc += pv[j] * l;
            }
            Ok(acc)
        };
        Ok(Self::new(evaluator, envelope, Some(end), descriptor))
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        (self.evaluator)(x)
    }
}

/// Values of a transform on a grid, in request order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformResult {
    pub values: Vec<(Complex64, Complex64)>,
    pub gamma: GammaParam,
    pub convention: Convention,
    pub input: String,
}

/// `F[φ](z)` on `grid` by quadrature against the closed-form coherent states.
pub fn transform_apply_sampled(
    phi: &SampledFunction,
    grid: &[Complex64],
    gp: &GammaParam,
    spec: &QuadratureSpec,
    convention: Convention,
) -> Result<TransformResult> {
    gp.require_oscillator()?;
    phi.envelope.validate()?;
    let values = grid
        .par_iter()
        .map(|&z| {
            let f = match convention {
                Convention::ConjugateLinear => transform_point(phi, z, gp, spec)?,
                Convention::Linear => transform_point(phi, z.conj(), gp, spec)?.conj(),
            };
            Ok((z, f))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransformResult { values, gamma: *gp, convention, input: phi.descriptor.clone() })
}

fn transform_point(phi: &SampledFunction, z: Complex64, gp: &GammaParam, spec: &QuadratureSpec) -> Result<Complex64> {
    let cs = CoherentState::new(CoherentStateLabel::new(z, *gp)?)?;
    let kernel_env = cs.envelope().scaled((0.5 * cs.ln_kernel_diagonal()).exp());
    let env = kernel_env.product(&phi.envelope)?;
    let spec = spec.with_cutoff(spec.cutoff.max(default_cutoff(gp)));
    let mut end = spec.certified_cutoff(std::slice::from_ref(&env))?;
    if let Some(domain_end) = phi.domain_end {
        if domain_end < end {
            let tail = env.tail(domain_end);
            if !(tail <= 0.1 * spec.tol) {
                return Err(Error::TailNotCovered { end: domain_end, tail });
            }
            end = domain_end;
        }
    }
    let f = |x: f64, out: &mut [Complex64]| -> Result<()> {
        out[0] = cs.eval_kernel(x)? * phi.eval(x)?.conj();
        Ok(())
    };
    Ok(integrate_interval_checked(1, &f, std::slice::from_ref(&env), end, &spec)?[0])
}

/// `F[φ](z)` on `grid` from the expansion coefficients, without quadrature.
pub fn transform_apply_coeffs(
    expansion: &EigenExpansion,
    grid: &[Complex64],
    convention: Convention,
) -> Result<TransformResult> {
    let gp = expansion.gamma;
    gp.require_oscillator()?;
    let values = grid
        .iter()
        .map(|&z| {
            let f: Complex64 = expansion
                .coefficients
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let c = match convention {
                        Convention::ConjugateLinear => c.conj(),
                        Convention::Linear => *c,
                    };
                    c * basis_element(n, &gp, z)
                })
                .sum();
            (z, f)
        })
        .collect();
    Ok(TransformResult {
        values,
        gamma: gp,
        convention,
        input: format!("coefficients ({} terms)", expansion.coefficients.len()),
    })
}

/// Compares `‖φ‖²` on the half-line with `‖F[φ]‖²` in the Bergman space.
pub fn isometry_report(expansion: &EigenExpansion, spec: &QuadratureSpec, tolerance: f64) -> Result<VerificationReport> {
    let gp = expansion.gamma;
    let sampled = expansion.to_sampled()?;
    let env = sampled.envelope.squared();
    let hspec = spec.with_cutoff(spec.cutoff.max(default_cutoff(&gp)));
    let failure = std::sync::Mutex::new(None);
    let phi_norm = integrate_halfline(
        |x| match sampled.eval(x) {
            Ok(v) => Complex64::new(v.norm_sqr(), 0.0),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &env,
        &hspec,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let phi_norm = phi_norm?.re;
    let image = expansion.image(Convention::ConjugateLinear)?;
    let f_norm = bergman_inner(&image, &image, &gp, spec)?.re;
    let coeff_norm = expansion.norm_sq();

    let coeffs: Vec<_> = expansion.coefficients.iter().map(|c| cval(*c)).collect();
    let mut b = VerificationReport::builder(
        "transform-isometry",
        json!({ "gamma": gp.gamma, "coefficients": coeffs, "tol": spec.tol }),
        tolerance,
    );
    b.real(json!({ "quantity": "|F[phi]|^2 vs |phi|^2" }), phi_norm, f_norm, true);
    b.real(json!({ "quantity": "|phi|^2 vs sum |c_n|^2" }), coeff_norm, phi_norm, true);
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn label(z: Complex64, g: f64) -> CoherentStateLabel {
        CoherentStateLabel::new(z, GammaParam::strict(g).unwrap()).unwrap()
    }

    #[test]
    fn label_validation() {
        let g1 = GammaParam::strict(1.0).unwrap();
        assert!(CoherentStateLabel::new(c(1.0, 0.0), g1).is_err());
        let g2 = GammaParam::strict(2.0).unwrap();
        assert!(CoherentStateLabel::new(c(30.0, 0.0), g2).is_err());
        assert!(CoherentStateLabel::new(c(3.0, 4.0), g2).is_ok());
    }

    #[test]
    fn zero_label_reduces_to_ground_state() {
        let gp = GammaParam::strict(2.0).unwrap();
        let l = label(c(0.0, 0.0), 2.0);
        for &x in &[0.0, 0.4, 2.0, 7.5] {
            let phi0 = crate::oscillator::eigenfunction_eval(0, &gp, x).unwrap();
            assert!((cs_series(x, &l, 0).unwrap() - phi0).norm() < 1e-15);
            assert!((cs_closed(x, &l).unwrap() - phi0).norm() < 1e-13 * phi0.norm().max(1e-300));
        }
        assert_eq!(series_truncation(&l).unwrap(), 0);
    }

    #[test]
    fn series_and_closed_form_agree() {
        for &(x, z, g) in &[(1.3, c(2.0, -1.0), 2.0), (0.7, c(1.0, 2.0), 1.5), (2.7, c(3.0, 0.0), 3.0)] {
            let l = label(z, g);
            let (s, _) = cs_series_auto(x, &l).unwrap();
            let closed = cs_closed(x, &l).unwrap();
            assert!((s - closed).norm() < 1e-9 * s.norm(), "x = {x}, z = {z}: {s} vs {closed}");
        }
    }

    #[test]
    fn printed_form_is_smaller_by_root_two() {
        let l = label(c(1.0, 1.0), 2.0);
        let a = cs_closed(1.1, &l).unwrap();
        let b = cs_closed_printed(1.1, &l).unwrap();
        assert!((a - b * std::f64::consts::SQRT_2).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn coherent_state_is_normalized() {
        let gp = GammaParam::strict(2.0).unwrap();
        let cs = CoherentState::new(label(c(1.0, 1.0), 2.0)).unwrap();
        let n = cs_norm_sq(&cs, &gp, &QuadratureSpec::default()).unwrap();
        assert!((n - 1.0).abs() < 1e-8, "{n}");
    }

    #[test]
    fn coefficient_path_examples() {
        let gp = GammaParam::strict(2.0).unwrap();
        let e = EigenExpansion::new(gp, vec![c(1.0, 0.0)]).unwrap();
        let r = transform_apply_coeffs(&e, &[c(0.3, 1.0), c(-2.0, 0.5)], Convention::ConjugateLinear).unwrap();
        assert!(r.values.iter().all(|(_, f)| *f == c(1.0, 0.0)));
        let e = EigenExpansion::new(gp, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = transform_apply_coeffs(&e, &[c(2.0, 0.0)], Convention::ConjugateLinear).unwrap();
        assert!((r.values[0].1 - c(1.0, 0.0)).norm() < 1e-15);
        let e = EigenExpansion::new(gp, vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        let grid = [c(0.5, 0.0), c(-1.5, 0.0)];
        let a = transform_apply_coeffs(&e, &grid, Convention::ConjugateLinear).unwrap();
        let b = transform_apply_coeffs(&e, &grid, Convention::Linear).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_eq!(x.1.conj(), y.1);
        }
    }

    #[test]
    fn sampled_path_maps_ground_state_to_one() {
        let gp = GammaParam::strict(2.0).unwrap();
        let phi = EigenExpansion::unit(gp, 0).unwrap().to_sampled().unwrap();
        let grid = [c(1.0, 1.0), c(-0.5, 2.0)];
        let r = transform_apply_sampled(&phi, &grid, &gp, &QuadratureSpec::default(), Convention::ConjugateLinear).unwrap();
        for (z, f) in &r.values {
            assert!((f - c(1.0, 0.0)).norm() < 1e-8, "z = {z}: {f}");
        }
        assert_eq!(r.values[1].0, grid[1]);
    }

    #[test]
    fn tabulated_interpolation_is_cubic_exact() {
        let xs: Vec<f64> = (0..20).map(|i| 0.5 * i as f64).collect();
        let vals: Vec<Complex64> = xs.iter().map(|x| c(x * x * x - x, 2.0 * x)).collect();
        let f = SampledFunction::tabulated(xs, vals, DecayEnvelope::exponential(1.0, 1.0, 0.0)).unwrap();
        for &x in &[0.1, 3.33, 9.4] {
            assert!((f.eval(x).unwrap() - c(x * x * x - x, 2.0 * x)).norm() < 1e-12);
        }
        assert!(f.eval(9.6).is_err());
        assert_eq!(f.domain_end, Some(9.5));
    }

    #[test]
    fn short_tables_are_rejected_when_the_tail_matters() {
        let gp = GammaParam::strict(2.0).unwrap();
        let xs: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
        let vals = vec![c(0.1, 0.0); 20];
        let f = SampledFunction::tabulated(xs, vals, DecayEnvelope::exponential(1.0, 0.1, 0.0)).unwrap();
        let r = transform_apply_sampled(&f, &[c(1.0, 0.0)], &gp, &QuadratureSpec::default(), Convention::ConjugateLinear);
        assert!(matches!(r, Err(Error::TailNotCovered { .. })));
    }

    #[test]
    fn isometry_for_simple_expansions() {
        let gp = GammaParam::strict(2.0).unwrap();
        let s = 0.5f64.sqrt();
        for coeffs in [vec![c(1.0, 0.0)], vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, 0.0)]] {
            let e = EigenExpansion::new(gp, coeffs).unwrap();
            let r = isometry_report(&e, &QuadratureSpec::default(), 1e-6).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
