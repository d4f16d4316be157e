//! Eigendata of the relativistic pseudoharmonic oscillator.
//!
//! With the tuning `8gω² = mc⁴` both exponents coincide, `α₊ = α₋ = γ`, and
//! the orthonormal eigenfunctions on `L²(ℝ₊, dx)` are
//!
//! `φ_n(x) = c_n · i^γ Γ(γ+ix)/Γ(ix) · ω₀^{ix} · Γ(γ+ix) · S_n(x²; γ, γ, ½)`
//!
//! with `c_n = √2 (n! Γ(n+2γ))^{−1/2} Γ(n+γ+½)^{−1}` and
//! `ω₀ = 1/(2γ(γ−1))`.
//!
//! Normalization follows from the modulus identity
//! `|φ_n|² = c_n² |Γ(γ+ix)|⁴ (x sinh πx/π) S_n² = ½ c_n² w(x) S_n²`, where
//! `w(x) = |Γ(γ+ix)|⁴ · 2x sinh(πx)/π` is the continuous dual Hahn weight
//! for `(γ, γ, ½)` (use `|Γ(½+ix)|² = π/cosh πx` and
//! `|Γ(2ix)|² = π/(2x sinh 2πx)`), whose orthogonality norm is
//! `n! Γ(n+2γ) Γ(n+γ+½)²`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bergman::GammaParam;
use crate::gamma::{ln_gamma_real, log_gamma};
use crate::hyper::{cdhahn_normalized_sequence, cdhahn_poly_scaled, CdHahnParams};
use crate::quadrature::{integrate_halfline_batch, DecayEnvelope, QuadratureSpec};
use crate::{Error, Result};

/// Highest degree evaluated by the terminating ₃F₂ sum; above it the
/// eigenbasis switches to the three-term recurrence.
pub const SUM_MAX_DEGREE: usize = 8;

/// Relative tolerance of the tuning condition `8gω² = mc⁴`.
pub const TUNING_TOL: f64 = 1e-12;

/// Physical parameters of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig {
    pub mass: f64,
    pub omega: f64,
    pub coupling: f64,
    pub hbar: f64,
    pub c: f64,
}

impl PhysicalConfig {
    pub fn new(mass: f64, omega: f64, coupling: f64, hbar: f64, c: f64) -> Result<Self> {
        let positive = [mass, omega, hbar, c].iter().all(|v| v.is_finite() && *v > 0.0);
        if !positive || !(coupling.is_finite() && coupling >= 0.0) {
            return Err(Error::Domain(format!(
                "physical parameters must be positive (coupling ≥ 0): m={mass}, ω={omega}, g={coupling}, ħ={hbar}, c={c}"
            )));
        }
        Ok(Self { mass, omega, coupling, hbar, c })
    }

    /// The tuned configuration with `α₊ = α₋ = γ` for given `m, ħ, c`:
    /// `ω = mc²/(2ħγ(γ−1))` and `g = mc⁴/(8ω²)`.
    pub fn tuned(gp: &GammaParam, mass: f64, hbar: f64, c: f64) -> Result<Self> {
        gp.require_oscillator()?;
        let g = gp.gamma;
        let omega = mass * c * c / (2.0 * hbar * g * (g - 1.0));
        let coupling = mass * c.powi(4) / (8.0 * omega * omega);
        Self::new(mass, omega, coupling, hbar, c)
    }

    /// `ω₀ = ħω/(mc²)`.
    pub fn omega0(&self) -> f64 {
        self.hbar * self.omega / (self.mass * self.c * self.c)
    }

    /// `g₀ = mg/ħ²`.
    pub fn g0(&self) -> f64 {
        self.mass * self.coupling / (self.hbar * self.hbar)
    }

    /// `λ = ħ/(mc)`.
    pub fn compton_wavelength(&self) -> f64 {
        self.hbar / (self.mass * self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaPair {
    pub plus: f64,
    pub minus: f64,
}

impl AlphaPair {
    pub fn equal(gamma: f64) -> Self {
        Self { plus: gamma, minus: gamma }
    }
}

/// `α± = ½ + ½√(1 + (2/ω₀)(1 ± √(1 − 8g₀ω₀²)))`.
pub fn alpha_pm(cfg: &PhysicalConfig) -> Result<AlphaPair> {
    let w0 = cfg.omega0();
    let disc = 1.0 - 8.0 * cfg.g0() * w0 * w0;
    if disc < -TUNING_TOL {
        return Err(Error::Domain(format!(
            "8 g₀ ω₀² = {} exceeds 1, the exponents are complex",
            1.0 - disc
        )));
    }
    // a tuned configuration sits at disc = 0 up to rounding
    let root = disc.max(0.0).sqrt();
    let branch = |s: f64| 0.5 + 0.5 * (1.0 + 2.0 / w0 * (1.0 + s * root)).sqrt();
    Ok(AlphaPair { plus: branch(1.0), minus: branch(-1.0) })
}

/// `ε_n = ħω (2n + α₊ + α₋)`.
pub fn energy_level(n: usize, cfg: &PhysicalConfig) -> Result<f64> {
    let ap = alpha_pm(cfg)?;
    Ok(cfg.hbar * cfg.omega * (2.0 * n as f64 + ap.plus + ap.minus))
}

/// `ε_n / ħω = 2n + 2γ` in the tuned case.
pub fn energy_level_tuned(n: usize, gp: &GammaParam) -> f64 {
    2.0 * n as f64 + 2.0 * gp.gamma
}

/// `γ` from a tuned configuration: `2γ − 1 = √(1 + 2mc²/(ħω))`.
///
/// The result is generally not a half-integer and is returned in extended
/// mode.
pub fn gamma_from_physical(cfg: &PhysicalConfig) -> Result<GammaParam> {
    let lhs = 8.0 * cfg.coupling * cfg.omega * cfg.omega;
    let rhs = cfg.mass * cfg.c.powi(4);
    if (lhs - rhs).abs() > TUNING_TOL * rhs {
        return Err(Error::Tuning(format!(
            "8gω² = {lhs:e} differs from mc⁴ = {rhs:e}"
        )));
    }
    let two_gamma_minus_one = (1.0 + 2.0 / cfg.omega0()).sqrt();
    GammaParam::extended(0.5 * (two_gamma_minus_one + 1.0))
}

/// `ω₀ = 1/(2γ(γ−1))`.
pub fn omega0_of_gamma(gp: &GammaParam) -> Result<f64> {
    gp.require_oscillator()?;
    Ok(1.0 / (2.0 * gp.gamma * (gp.gamma - 1.0)))
}

/// `ln c_n` with `c_n = (½ n! Γ(n+α₊+α₋) Γ(n+α₊+½) Γ(n+α₋+½))^{−1/2}`.
pub fn ln_normalization_const(n: usize, ap: &AlphaPair) -> Result<f64> {
    let nf = n as f64;
    Ok(-0.5
        * ((0.5f64).ln()
            + ln_gamma_real(nf + 1.0)?
            + ln_gamma_real(nf + ap.plus + ap.minus)?
            + ln_gamma_real(nf + ap.plus + 0.5)?
            + ln_gamma_real(nf + ap.minus + 0.5)?))
}

pub fn normalization_const(n: usize, ap: &AlphaPair) -> Result<f64> {
    Ok(ln_normalization_const(n, ap)?.exp())
}

/// `φ_n(x)`, exactly zero at `x = 0`.
pub fn eigenfunction_eval(n: usize, gp: &GammaParam, x: f64) -> Result<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    Eigenbasis::new(gp, n)?.eval_into(x, &mut out)?;
    Ok(out[n])
}

/// `φ_0, …, φ_N` sharing their `x`-dependent prefactor.
#[derive(Debug, Clone)]
pub struct Eigenbasis {
    gamma: f64,
    ln_omega0: f64,
    params: CdHahnParams,
    ln_c: Vec<f64>,
    /// `ln ((2γ)_n (γ+½)_n)`
    ln_poch: Vec<f64>,
    envelopes: OnceLock<Vec<DecayEnvelope>>,
}

impl Eigenbasis {
    pub fn new(gp: &GammaParam, n_max: usize) -> Result<Self> {
        let ln_omega0 = omega0_of_gamma(gp)?.ln();
        let g = gp.gamma;
        let params = CdHahnParams::oscillator(g)?;
        let ap = AlphaPair::equal(g);
        let ln_c = (0..=n_max).map(|n| ln_normalization_const(n, &ap)).collect::<Result<Vec<_>>>()?;
        let ln_poch = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                Ok(ln_gamma_real(2.0 * g + nf)? - ln_gamma_real(2.0 * g)? + ln_gamma_real(g + 0.5 + nf)?
                    - ln_gamma_real(g + 0.5)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { gamma: g, ln_omega0, params, ln_c, ln_poch, envelopes: OnceLock::new() })
    }

    pub fn n_max(&self) -> usize {
        self.ln_c.len() - 1
    }

    /// Envelopes of `|φ_n|`, computed on first use.
    pub fn envelopes(&self) -> Result<&[DecayEnvelope]> {
        if let Some(e) = self.envelopes.get() {
            return Ok(e);
        }
        let computed = self
            .ln_c
            .iter()
            .enumerate()
            .map(|(n, &ln_c)| eigenfunction_envelope_with(n, self.gamma, ln_c))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.envelopes.get_or_init(|| computed))
    }

    /// Writes `φ_n(x)` for `n = 0..out.len()` (at most `n_max + 1` values).
    pub fn eval_into(&self, x: f64, out: &mut [Complex64]) -> Result<()> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("eigenfunctions need x ≥ 0, got {x}")));
        }
        if out.len() > self.ln_c.len() {
            return Err(Error::Domain(format!(
                "{} eigenfunctions requested from a basis of {}",
                out.len(),
                self.ln_c.len()
            )));
        }
        if x == 0.0 {
            out.fill(Complex64::new(0.0, 0.0));
            return Ok(());
        }
        let g = self.gamma;
        let l = log_gamma(Complex64::new(g, x))? * 2.0 - log_gamma(Complex64::new(0.0, x))?;
        let phase = Complex64::from_polar(1.0, 0.5 * PI * g + l.im + x * self.ln_omega0);
        let high = if out.len() > SUM_MAX_DEGREE + 1 {
            cdhahn_normalized_sequence(out.len() - 1, x * x, self.params)?
        } else {
            Vec::new()
        };
        for (n, o) in out.iter_mut().enumerate() {
            let s = if n <= SUM_MAX_DEGREE {
                cdhahn_poly_scaled(n, x * x, self.params, self.ln_c[n] + l.re)?
            } else {
                high[n] * (self.ln_c[n] + l.re + self.ln_poch[n]).exp()
            };
            *o = phase * s;
        }
        Ok(())
    }
}

/// Envelope of `|φ_n|`:
/// `√(2π) c_n Π_{j<m} max((β+j)², 1) Q_n β^{−2} (1+x)^{3/2+2m+2n} e^{−πx/2}`,
/// where `γ = β + m` with `β ∈ (0, 1]` and
/// `Q_n = Σ_k C(n,k) Π_{j<k} max((γ+j)², 1) (2γ+k)_{n−k} (γ+½+k)_{n−k}`.
///
/// It follows from `|S_n| ≤ Q_n (1+x)^{2n}`,
/// `|Γ(β+ix)|² ≤ πx/(β² sinh πx)` (log-convexity of `|Γ(s+ix)|/Γ(s)` in
/// the product formula, compared at `s = 2`) and
/// `x/sinh(πx) ≤ 2(1+x) e^{−πx}`.
pub fn eigenfunction_envelope(n: usize, gp: &GammaParam) -> Result<DecayEnvelope> {
    gp.require_oscillator()?;
    let ln_c = ln_normalization_const(n, &AlphaPair::equal(gp.gamma))?;
    eigenfunction_envelope_with(n, gp.gamma, ln_c)
}

fn eigenfunction_envelope_with(n: usize, g: f64, ln_c: f64) -> Result<DecayEnvelope> {
    let m = (g.ceil() - 1.0).max(0.0);
    let beta = g - m;
    let ln_p: f64 = (0..m as usize).map(|j| ((beta + j as f64).powi(2)).max(1.0).ln()).sum();
    let ln_q = ln_cdhahn_majorant(n, g)?;
    let ln_scale = 0.5 * (2.0 * PI).ln() + ln_c + ln_p + ln_q - 2.0 * beta.ln();
    Ok(DecayEnvelope::exponential(ln_scale.exp(), 0.5 * PI, 1.5 + 2.0 * m + 2.0 * n as f64))
}

/// `ln Q_n` for `(a, b, c) = (γ, γ, ½)`.
fn ln_cdhahn_majorant(n: usize, g: f64) -> Result<f64> {
    let (ab, ac) = (2.0 * g, g + 0.5);
    let nf = n as f64;
    let mut terms = Vec::with_capacity(n + 1);
    let mut ln_prod = 0.0;
    for k in 0..=n {
        let kf = k as f64;
        if k > 0 {
            ln_prod += ((g + kf - 1.0).powi(2)).max(1.0).ln();
        }
        let ln_binom = ln_gamma_real(nf + 1.0)? - ln_gamma_real(kf + 1.0)? - ln_gamma_real(nf - kf + 1.0)?;
        let ln_tail = ln_gamma_real(ab + nf)? - ln_gamma_real(ab + kf)? + ln_gamma_real(ac + nf)?
            - ln_gamma_real(ac + kf)?;
        terms.push(ln_binom + ln_prod + ln_tail);
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln())
}

/// Starting cutoff for oscillator-weight integrands,
/// `(4γ−1) ln(4γ+20)/π + 40/π`.
pub fn default_cutoff(gp: &GammaParam) -> f64 {
    let g = gp.gamma;
    (4.0 * g - 1.0) * (4.0 * g + 20.0).ln() / PI + 40.0 / PI
}

/// `G[m][n] = ∫₀^∞ φ_m(x) conj(φ_n(x)) dx` for `m, n ≤ n_max`.
pub fn eigen_gram(gp: &GammaParam, n_max: usize, spec: &QuadratureSpec) -> Result<Vec<Vec<Complex64>>> {
    let basis = Eigenbasis::new(gp, n_max)?;
    let k = n_max + 1;
    let env = basis.envelopes()?;
    let envs = (0..k * k)
        .map(|idx| env[idx / k].product(&env[idx % k]))
        .collect::<Result<Vec<_>>>()?;
    let spec = spec.with_cutoff(spec.cutoff.max(default_cutoff(gp)));
    let flat = integrate_halfline_batch(
        k * k,
        |x, out| {
            let mut phi = vec![Complex64::new(0.0, 0.0); k];
            basis.eval_into(x, &mut phi)?;
            for (idx, o) in out.iter_mut().enumerate() {
                *o = phi[idx / k] * phi[idx % k].conj();
            }
            Ok(())
        },
        &envs,
        &spec,
    )?;
    Ok(flat.chunks(k).map(<[Complex64]>::to_vec).collect())
}
