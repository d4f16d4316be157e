//! Complex log-gamma and the helpers built on it.
//!
//! `log_gamma` uses upward recurrence into the half plane `Re w ≥ 15`
//! followed by a ten-term Stirling series. The recurrence products are
//! accumulated as (log-modulus, summed argument) so the result is the
//! analytic continuation of `ln Γ` on `ℂ \ (-∞, 0]`, i.e. the same branch as
//! the usual `loggamma` of scientific libraries. On the positive real axis it
//! coincides with the real logarithm of `Γ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::sum::NeumaierSum;
use crate::{Error, Result};

/// Pole detection tolerance on both components.
pub const POLE_TOL: f64 = 1e-12;

/// Largest `|Re z|` accepted by [`log_gamma`]. Beyond it the recurrence
/// would need more than `1e5` steps.
pub const MAX_ABS_RE: f64 = 1.0e5;

const STIRLING_MIN_RE: f64 = 15.0;

/// `½ ln(2π)`.
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

/// `B_{2k} / (2k (2k − 1))` for `k = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn is_pole(z: Complex64) -> bool {
    z.im.abs() <= POLE_TOL && z.re <= POLE_TOL && (z.re - z.re.round()).abs() <= POLE_TOL
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series * inv
}

/// Principal-branch `ln Γ(z)`.
///
/// Accurate to about `1e-14` relative in `exp(result)` for `|z| ≤ 50`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re.abs() > MAX_ABS_RE {
        return Err(Error::Overflow(z));
    }
    if z.re >= STIRLING_MIN_RE {
        return Ok(stirling(z));
    }

    // ln Γ(z) = ln Γ(z + N) − Σ_{k<N} ln(z + k)
    let shift = (STIRLING_MIN_RE - z.re).ceil() as usize;
    let mut ln_modulus = 0.0;
    let mut modulus = 1.0;
    let mut arg = NeumaierSum::new();
    for k in 0..shift {
        let w = z + k as f64;
        modulus *= w.norm();
        if !(1e-200..=1e200).contains(&modulus) {
            ln_modulus += modulus.ln();
            modulus = 1.0;
        }
        arg.add(w.arg());
    }
    ln_modulus += modulus.ln();
    let head = stirling(z + shift as f64);
    Ok(Complex64::new(head.re - ln_modulus, head.im - arg.value()))
}

/// `Γ(z)` as `exp(log_gamma(z))`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma_real needs x > 0, got {x}")));
    }
    log_gamma(Complex64::new(x, 0.0)).map(|l| l.re)
}

/// Rising factorial `(a)_n = a (a+1) ⋯ (a+n−1)`, by running product.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// Real rising factorial.
pub fn pochhammer_real(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// `ln (a)_n` for `a > 0`, through log-gamma.
pub fn ln_pochhammer_real(a: f64, n: usize) -> Result<f64> {
    Ok(ln_gamma_real(a + n as f64)? - ln_gamma_real(a)?)
}

/// `i^γ` on the principal branch, `exp(iπγ/2)`.
pub fn i_power(gamma: f64) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * PI * gamma)
}

/// The generalized degree `(−x)^{(γ)} = i^γ Γ(γ + ix) / Γ(ix)`.
///
/// Exactly zero at `x = 0`.
pub fn generalized_degree(x: f64, gamma: f64) -> Result<Complex64> {
    Ok(ln_generalized_degree(x, gamma)?.map_or(Complex64::new(0.0, 0.0), |l| l.exp()))
}

/// Logarithm of [`generalized_degree`], `None` at `x = 0`.
pub fn ln_generalized_degree(x: f64, gamma: f64) -> Result<Option<Complex64>> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("generalized degree needs x ≥ 0, got {x}")));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("generalized degree needs γ > 0, got {gamma}")));
    }
    if x == 0.0 {
        return Ok(None);
    }
    let num = log_gamma(Complex64::new(gamma, x))?;
    let den = log_gamma(Complex64::new(0.0, x))?;
    Ok(Some(num - den + Complex64::new(0.0, 0.5 * PI * gamma)))
}

/// `|Γ(a + ix)|²` computed as `exp(2 Re ln Γ(a + ix))`.
pub fn abs_gamma_sq(a: f64, x: f64) -> Result<f64> {
    if a < 0.0 {
        return Err(Error::Domain(format!("abs_gamma_sq needs a ≥ 0, got {a}")));
    }
    if a == 0.0 && x == 0.0 {
        return Err(Error::Pole(Complex64::new(0.0, 0.0)));
    }
    Ok((2.0 * log_gamma(Complex64::new(a, x))?.re).exp())
}
