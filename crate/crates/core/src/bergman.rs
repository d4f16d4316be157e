//! The weighted Bergman space of entire functions on `ℂ` with measure
//! `dμ_γ(z) = (2/(π Γ(2γ))) ρ^{2γ−1} K_{2γ−1}(2ρ) ρ dρ dθ`, `ρ = |z|`.
//!
//! The orthonormal basis is `ψ_n(z) = z^n / √(n! (2γ)_n)` and the
//! reproducing kernel is `K(z, w) = ₀F₁(; 2γ; z w̄)
//! = Γ(2γ) (z w̄)^{(1−2γ)/2} I_{2γ−1}(2√(z w̄))`.
//!
//! The Bessel index of the measure is `2γ − 1`. The index `½ − γ` that also
//! circulates for this measure gives `⟨ψ_n, ψ_n⟩ ≠ 1` whenever `γ ≠ ½`
//! (see [`predicted_norm_sq`]); it is kept as [`MeasureIndex::Printed`] so
//! the discrepancy can be reproduced.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_i, bessel_k, ln_bessel_k};
use crate::gamma::{ln_gamma_real, pochhammer_real};
use crate::hyper::{pfq_series, HyperSeriesSpec};
use crate::quadrature::{integrate_disk_polar_batch, DecayEnvelope, QuadratureSpec};
use crate::{Error, Result};

const GROWTH_SLACK: f64 = 1e-8;

/// Accuracy requested from `K_ν` inside the measure.
const DENSITY_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMode {
    /// `2γ ∈ {1, 2, 3, …}`.
    #[default]
    Strict,
    /// Any real `γ ≥ ½`.
    Extended,
}

/// The parameter `γ` labelling the space, the oscillator and the transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParam {
    pub gamma: f64,
    pub mode: GammaMode,
}

impl GammaParam {
    pub fn new(gamma: f64, mode: GammaMode) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.5 {
            return Err(Error::Domain(format!("γ must be a finite real ≥ 1/2, got {gamma}")));
        }
        if mode == GammaMode::Strict && !is_integer(2.0 * gamma) {
            return Err(Error::Domain(format!(
                "strict mode needs 2γ to be a positive integer, got γ = {gamma}"
            )));
        }
        Ok(Self { gamma, mode })
    }

    pub fn strict(gamma: f64) -> Result<Self> {
        Self::new(gamma, GammaMode::Strict)
    }

    pub fn extended(gamma: f64) -> Result<Self> {
        Self::new(gamma, GammaMode::Extended)
    }

    /// Oscillator and transform features need `γ > 1`.
    pub fn require_oscillator(&self) -> Result<()> {
        if self.gamma > 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "oscillator-linked features need γ > 1, got {}",
                self.gamma
            )))
        }
    }

    /// `2γ` rounded, when it is an integer.
    pub fn two_gamma_int(&self) -> Option<i32> {
        let t = 2.0 * self.gamma;
        is_integer(t).then(|| t.round() as i32)
    }
}

fn is_integer(t: f64) -> bool {
    t > 0.0 && (t - t.round()).abs() <= 1e-12
}

/// Which Bessel index the measure density uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureIndex {
    /// `K_{2γ−1}`, the index that normalizes the basis.
    #[default]
    Corrected,
    /// `K_{½−γ}`.
    Printed,
}

impl MeasureIndex {
    pub fn order(self, gamma: f64) -> f64 {
        match self {
            MeasureIndex::Corrected => 2.0 * gamma - 1.0,
            MeasureIndex::Printed => 0.5 - gamma,
        }
    }
}

/// `ln` of the density at radius `rho > 0`.
pub fn ln_measure_density_radial(rho: f64, gp: &GammaParam, index: MeasureIndex) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("measure density is evaluated at ρ > 0, got {rho}")));
    }
    let g = gp.gamma;
    Ok((2.0 / PI).ln() - ln_gamma_real(2.0 * g)?
        + (2.0 * g - 1.0) * rho.ln()
        + ln_bessel_k(index.order(g), 2.0 * rho, DENSITY_TOL)?)
}

/// `(2/(π Γ(2γ))) ρ^{2γ−1} K_{2γ−1}(2ρ)` with `ρ = |z|`. The area element
/// `ρ dρ dθ` is not included.
pub fn measure_density(z: Complex64, gp: &GammaParam) -> Result<f64> {
    measure_density_with(z, gp, MeasureIndex::Corrected)
}

pub fn measure_density_with(z: Complex64, gp: &GammaParam, index: MeasureIndex) -> Result<f64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("measure density is not evaluated at z = 0".into()));
    }
    Ok(ln_measure_density_radial(z.norm(), gp, index)?.exp())
}

/// Closed-form value of `⟨ψ_n, ψ_n⟩` under the measure with the given index,
/// from `∫₀^∞ x^{μ−1} K_ν(x) dx = 2^{μ−2} Γ((μ+ν)/2) Γ((μ−ν)/2)` with
/// `μ = 2n + 2γ + 1`:
/// `Γ((μ+ν)/2) Γ((μ−ν)/2) / (Γ(2γ) n! (2γ)_n)`. Equal to 1 for every `n`
/// exactly when `ν = ±(2γ − 1)`.
pub fn predicted_norm_sq(n: usize, gp: &GammaParam, index: MeasureIndex) -> Result<f64> {
    let g = gp.gamma;
    let nu = index.order(g);
    let mu = 2.0 * n as f64 + 2.0 * g + 1.0;
    let ln = ln_gamma_real(0.5 * (mu + nu))? + ln_gamma_real(0.5 * (mu - nu))?
        - ln_gamma_real(2.0 * g)?
        - ln_gamma_real(n as f64 + 1.0)?
        - (ln_gamma_real(2.0 * g + n as f64)? - ln_gamma_real(2.0 * g)?);
    Ok(ln.exp())
}

/// `ln √(n! (2γ)_n)`.
pub fn ln_basis_norm(n: usize, gp: &GammaParam) -> Result<f64> {
    let g2 = 2.0 * gp.gamma;
    Ok(0.5 * (ln_gamma_real(n as f64 + 1.0)? + ln_gamma_real(g2 + n as f64)? - ln_gamma_real(g2)?))
}

/// `ψ_n(z) = z^n / √(n! (2γ)_n)`.
pub fn basis_element(n: usize, gp: &GammaParam, z: Complex64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if n <= 30 {
        let norm = (pochhammer_real(1.0, n) * pochhammer_real(2.0 * gp.gamma, n)).sqrt();
        return z.powu(n as u32) / norm;
    }
    // GammaParam guarantees 2γ ≥ 1, so the log-gamma calls cannot fail
    let ln_norm = ln_basis_norm(n, gp).unwrap_or(f64::INFINITY);
    Complex64::from_polar((n as f64 * z.norm().ln() - ln_norm).exp(), n as f64 * z.arg())
}

/// `Σ (z w̄)^n / ((2γ)_n n!)` summed to relative accuracy `tol`.
pub fn kernel_series(z: Complex64, w: Complex64, gp: &GammaParam, tol: f64) -> Result<Complex64> {
    let spec = HyperSeriesSpec::new(vec![], vec![Complex64::new(2.0 * gp.gamma, 0.0)], z * w.conj())
        .with_tol(tol);
    pfq_series(&spec)
}

/// Closed form `Γ(2γ) (z w̄)^{(1−2γ)/2} I_{2γ−1}(2√(z w̄))`, principal root.
pub fn kernel_closed(z: Complex64, w: Complex64, gp: &GammaParam) -> Result<Complex64> {
    kernel_closed_with_root(z, w, gp, false)
}

/// [`kernel_closed`] evaluated with the root `−√(z w̄)` when `negate_root`.
/// For integer `2γ` both choices give the same value.
pub fn kernel_closed_with_root(
    z: Complex64,
    w: Complex64,
    gp: &GammaParam,
    negate_root: bool,
) -> Result<Complex64> {
    let u = z * w.conj();
    if u == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut s = u.sqrt();
    if negate_root {
        s = -s;
    }
    let nu = 2.0 * gp.gamma - 1.0;
    let i_val = bessel_i(nu, 2.0 * s, 1e-16)?;
    let power = match gp.two_gamma_int() {
        Some(k) => s.powi(1 - k),
        None => (s.ln() * (-nu)).exp(),
    };
    Ok(i_val * power * ln_gamma_real(2.0 * gp.gamma)?.exp())
}

/// `ln K(z, z) = ln Γ(2γ) + (1−2γ) ln|z| + ln I_{2γ−1}(2|z|)`.
pub fn ln_kernel_diagonal(z: Complex64, gp: &GammaParam) -> Result<f64> {
    let r = z.norm();
    if r == 0.0 {
        return Ok(0.0);
    }
    let nu = 2.0 * gp.gamma - 1.0;
    let i_val = bessel_i(nu, Complex64::new(2.0 * r, 0.0), 1e-16)?.re;
    Ok(ln_gamma_real(2.0 * gp.gamma)? - nu * r.ln() + i_val.ln())
}

/// `K(z, z)`, real and `≥ 1`.
pub fn kernel_diagonal(z: Complex64, gp: &GammaParam) -> Result<f64> {
    let v = ln_kernel_diagonal(z, gp)?.exp();
    if !v.is_finite() {
        return Err(Error::Overflow(z));
    }
    Ok(v)
}

/// `|f(z)| ≤ scale (1+ρ)^degree e^{exp_rate ρ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialBound {
    pub scale: f64,
    pub degree: f64,
    pub exp_rate: f64,
}

impl RadialBound {
    pub fn bound(&self, rho: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        (self.scale.ln() + self.degree * rho.ln_1p() + self.exp_rate * rho).exp()
    }
}

type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// An entire function together with a radial growth bound that is checked
/// at every quadrature node.
#[derive(Clone)]
pub struct BergmanFunction {
    evaluator: Evaluator,
    pub growth: RadialBound,
}

impl std::fmt::Debug for BergmanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BergmanFunction").field("growth", &self.growth).finish()
    }
}

impl BergmanFunction {
    pub fn new<F>(evaluator: F, growth: RadialBound) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let ok = growth.scale.is_finite()
            && growth.scale >= 0.0
            && growth.degree.is_finite()
            && growth.degree >= 0.0
            && growth.exp_rate.is_finite()
            && growth.exp_rate >= 0.0;
        if !ok {
            return Err(Error::Domain(format!("invalid growth bound {growth:?}")));
        }
        Ok(Self { evaluator: Arc::new(evaluator), growth })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    /// `ψ_n`.
    pub fn basis(n: usize, gp: &GammaParam) -> Result<Self> {
        let scale = (-ln_basis_norm(n, gp)?).exp();
        let gp = *gp;
        Self::new(
            move |z| basis_element(n, &gp, z),
            RadialBound { scale, degree: n as f64, exp_rate: 0.0 },
        )
    }

    /// The kernel section `z ↦ K(z, w)`. Its growth bound follows from
    /// `|K(z, w)| ≤ I₀(2√(ρ|w|)) ≤ e^{2√(ρ|w|)} ≤ e^{2|w|} e^{ρ/2}`.
    pub fn kernel_section(w: Complex64, gp: &GammaParam) -> Result<Self> {
        let gp = *gp;
        Self::new(
            move |z| kernel_series(z, w, &gp, 1e-16).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
            RadialBound { scale: (2.0 * w.norm()).exp(), degree: 0.0, exp_rate: 0.5 },
        )
    }

    /// `Σ a_n ψ_n`.
    pub fn expansion(coeffs: &[Complex64], gp: &GammaParam) -> Result<Self> {
        let mut scale = 0.0;
        let mut norms = Vec::with_capacity(coeffs.len());
        for (n, c) in coeffs.iter().enumerate() {
            let inv = (-ln_basis_norm(n, gp)?).exp();
            scale += c.norm() * inv;
            norms.push(inv);
        }
        let degree = coeffs.len().saturating_sub(1) as f64;
        let coeffs = coeffs.to_vec();
        Self::new(
            move |z| {
                // Horner in z on the scaled coefficients
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, inv) in coeffs.iter().zip(&norms).rev() {
                    acc = acc * z + c * inv;
                }
                acc
            },
            RadialBound { scale, degree, exp_rate: 0.0 },
        )
    }
}

/// Upper bound of `√x eˣ K_ν(x)` on `x ≥ 2`. The function is monotone in `x`
/// with limit `√(π/2)`, so the larger of the two endpoint values bounds it.
fn k_tail_constant(nu: f64) -> Result<f64> {
    Ok((PI / 2.0).sqrt().max(SQRT_2 * 2f64.exp() * bessel_k(nu, 2.0, DENSITY_TOL)?))
}

/// Envelope of `2πρ |f| |g| D(ρ)` valid for `ρ ≥ 1`.
fn pair_tail(f: &RadialBound, g: &RadialBound, gp: &GammaParam, index: MeasureIndex) -> Result<DecayEnvelope> {
    let rate = 2.0 - f.exp_rate - g.exp_rate;
    if !(rate > 0.0) {
        return Err(Error::Domain(format!(
            "growth rates {} + {} are not integrable against the measure",
            f.exp_rate, g.exp_rate
        )));
    }
    let gamma = gp.gamma;
    let b = k_tail_constant(index.order(gamma))?;
    let scale = 2.0 * PI * 2.0 / (PI * ln_gamma_real(2.0 * gamma)?.exp()) * b / SQRT_2 * f.scale * g.scale;
    let degree = f.degree + g.degree + 2.0 * gamma - 0.5;
    Ok(DecayEnvelope::exponential(scale, rate, degree))
}

fn check_growth(z: Complex64, value: Complex64, bound: &RadialBound) -> Result<()> {
    let b = bound.bound(z.norm());
    let m = value.norm();
    if !m.is_finite() || m > b * (1.0 + GROWTH_SLACK) + f64::MIN_POSITIVE {
        return Err(Error::Envelope { x: z.norm(), value: m, bound: b });
    }
    Ok(())
}

/// Default starting radius for Bergman integrals.
pub const DEFAULT_RHO_MAX: f64 = 25.0;

/// `⟨f, g⟩_γ = ∫ f(z) conj(g(z)) dμ_γ(z)`.
pub fn bergman_inner(
    f: &BergmanFunction,
    g: &BergmanFunction,
    gp: &GammaParam,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    bergman_inner_with(f, g, gp, MeasureIndex::Corrected, spec)
}

pub fn bergman_inner_with(
    f: &BergmanFunction,
    g: &BergmanFunction,
    gp: &GammaParam,
    index: MeasureIndex,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let gram = gram_pairs(&[f.clone(), g.clone()], &[(0, 1)], gp, index, spec)?;
    Ok(gram[0])
}

/// Full Gram matrix `G[i][j] = ⟨f_i, f_j⟩_γ`, computed in one pass.
pub fn bergman_gram(
    fns: &[BergmanFunction],
    gp: &GammaParam,
    spec: &QuadratureSpec,
) -> Result<Vec<Vec<Complex64>>> {
    bergman_gram_with(fns, gp, MeasureIndex::Corrected, spec)
}

pub fn bergman_gram_with(
    fns: &[BergmanFunction],
    gp: &GammaParam,
    index: MeasureIndex,
    spec: &QuadratureSpec,
) -> Result<Vec<Vec<Complex64>>> {
    let k = fns.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let flat = gram_pairs(fns, &pairs, gp, index, spec)?;
    Ok(flat.chunks(k.max(1)).map(<[Complex64]>::to_vec).collect())
}

fn gram_pairs(
    fns: &[BergmanFunction],
    pairs: &[(usize, usize)],
    gp: &GammaParam,
    index: MeasureIndex,
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>> {
    if pairs.is_empty() {
        return Ok(vec![]);
    }
    let tails = pairs
        .iter()
        .map(|&(i, j)| pair_tail(&fns[i].growth, &fns[j].growth, gp, index))
        .collect::<Result<Vec<_>>>()?;
    let end = spec.with_cutoff(spec.cutoff.max(DEFAULT_RHO_MAX)).certified_cutoff(&tails)?;
    let gp = *gp;
    integrate_disk_polar_batch(
        pairs.len(),
        |rho| Ok(ln_measure_density_radial(rho, &gp, index)?.exp()),
        |rho, theta, out| {
            let z = Complex64::from_polar(rho, theta);
            let mut vals = Vec::with_capacity(fns.len());
            for f in fns {
                let v = f.eval(z);
                check_growth(z, v, &f.growth)?;
                vals.push(v);
            }
            for (o, &(i, j)) in out.iter_mut().zip(pairs) {
                *o = vals[i] * vals[j].conj();
            }
            Ok(())
        },
        end,
        None,
        spec,
    )
}
