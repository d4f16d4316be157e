//! Modified Bessel functions.
//!
//! `I_ν` is summed from its power series
//! `I_ν(ζ) = Σ (ζ/2)^{ν+2n} / (n! Γ(ν+n+1))`, restricted to `|ζ| ≤ 60`.
//!
//! `K_ν` is evaluated from the MacDonald integral
//! `K_ν(ρ) = ½ (ρ/2)^ν ∫₀^∞ t^{−ν−1} exp(−t − ρ²/4t) dt`.
//! After `t = e^u` the exponent `g(u) = −νu − e^u − (ρ²/4)e^{−u}` is strictly
//! concave with a single maximum, so the integrand is rescaled by its peak
//! and the two tails are cut where the concavity bound
//! `∫_{u₁}^∞ e^{g} ≤ e^{g(u₁)} / |g'(u₁)|` is negligible. Everything is kept
//! in log space, which keeps large orders and small arguments finite.

use num_complex::Complex64;

use crate::gamma::ln_gamma_real;
use crate::quadrature::gauss_legendre_rule;
use crate::sum::{ComplexSum, NeumaierSum};
use crate::{Error, Result};

/// Series cap on `|ζ|` for [`bessel_i`].
pub const I_SERIES_MAX_ARG: f64 = 60.0;

/// Validated order range for [`bessel_k`].
pub const K_MAX_ORDER: f64 = 200.0;

/// Accuracy floor for the `K_ν` quadrature.
const K_TOL_FLOOR: f64 = 1e-14;

/// `I_ν(ζ)` for `ν ≥ 0` and complex `ζ`, principal branch of `(ζ/2)^ν`.
pub fn bessel_i(nu: f64, zeta: Complex64, tol: f64) -> Result<Complex64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_i needs a finite order ν ≥ 0, got {nu}")));
    }
    if !zeta.re.is_finite() || !zeta.im.is_finite() {
        return Err(Error::Domain(format!("non-finite Bessel argument {zeta}")));
    }
    if zeta.norm() > I_SERIES_MAX_ARG {
        return Err(Error::Range(format!(
            "|ζ| = {} exceeds the series limit {I_SERIES_MAX_ARG}",
            zeta.norm()
        )));
    }
    if zeta == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(if nu == 0.0 { 1.0 } else { 0.0 }, 0.0));
    }
    let half = zeta * 0.5;
    let lead = if nu == 0.0 {
        Complex64::new((-ln_gamma_real(nu + 1.0)?).exp(), 0.0)
    } else {
        (half.ln() * nu - ln_gamma_real(nu + 1.0)?).exp()
    };
    let w = half * half;
    let mut term = lead;
    let mut sum = ComplexSum::new();
    sum.add(term);
    let peak = half.norm();
    let mut small_run = 0;
    for n in 0..10_000usize {
        let nf = n as f64;
        term *= w / ((nf + 1.0) * (nu + nf + 1.0));
        sum.add(term);
        if nf > peak && term.norm() <= tol * sum.value().norm() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum.value());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NoConvergence { terms: 10_000 })
}

/// `K_ν(ρ)` for real order and `ρ > 0`, relative accuracy `max(tol, 1e-14)`
/// targeted (validated to `1e-11`).
pub fn bessel_k(nu: f64, rho: f64, tol: f64) -> Result<f64> {
    let ln_k = ln_bessel_k(nu, rho, tol)?;
    let k = ln_k.exp();
    if !k.is_finite() || k == 0.0 {
        return Err(Error::Overflow(Complex64::new(rho, 0.0)));
    }
    Ok(k)
}

/// `ln K_ν(ρ)`.
pub(crate) fn ln_bessel_k(nu: f64, rho: f64, tol: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("bessel_k needs ρ > 0, got {rho}")));
    }
    if !nu.is_finite() || nu.abs() > K_MAX_ORDER {
        return Err(Error::Domain(format!("bessel_k order |ν| ≤ {K_MAX_ORDER} required, got {nu}")));
    }
    let tol = tol.max(K_TOL_FLOOR);
    let q = 0.25 * rho * rho;
    let g = |u: f64| -nu * u - u.exp() - q * (-u).exp();
    let dg = |u: f64| -nu - u.exp() + q * (-u).exp();

    // peak: t² + νt − ρ²/4 = 0, positive root written without cancellation
    let root = (nu * nu + rho * rho).sqrt();
    let t_star = if nu > 0.0 { 0.5 * rho * rho / (nu + root) } else { 0.5 * (root - nu) };
    let u_star = t_star.ln();
    let g_star = g(u_star);

    // cut each side where the rescaled exponent and the concavity tail are tiny
    let drop = (10.0 / tol).ln() + 8.0;
    let find_edge = |dir: f64| -> f64 {
        let mut h = 0.25;
        loop {
            let u = u_star + dir * h;
            let tail = (g(u) - g_star) - dg(u).abs().ln();
            if g(u) - g_star < -drop && tail < -drop {
                return u;
            }
            h *= 1.5;
        }
    };
    let lo = find_edge(-1.0);
    let hi = find_edge(1.0);

    let curvature = t_star + q / t_star;
    let width = (1.0 / curvature.sqrt()).clamp(0.05, 1.0);
    let panels = (((hi - lo) / width).ceil() as usize).max(4);
    let h = (hi - lo) / panels as f64;

    let integrate = |points: usize| -> Result<f64> {
        let rule = gauss_legendre_rule(points)?;
        let mut total = NeumaierSum::new();
        for p in 0..panels {
            let a = lo + p as f64 * h;
            let mid = a + 0.5 * h;
            let mut panel = 0.0;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                panel += w * (g(mid + 0.5 * h * x) - g_star).exp();
            }
            total.add(0.5 * h * panel);
        }
        Ok(total.value())
    };

    let mut points = 16;
    let mut prev = integrate(points)?;
    loop {
        points *= 2;
        let cur = integrate(points)?;
        if (cur - prev).abs() <= tol * cur.abs() {
            return Ok((0.5f64).ln() + nu * (0.5 * rho).ln() + g_star + cur.ln());
        }
        if points >= 128 {
            return Err(Error::QuadratureFailure(format!(
                "K_{nu}({rho}) did not settle: {prev} vs {cur}"
            )));
        }
        prev = cur;
    }
}
