//! Deterministic quadrature: Gauss–Legendre rules, composite half-line
//! integration with certified tails, and polar integration over ℂ.
//!
//! Panels start small at the origin and grow geometrically up to a maximal
//! width. Every refinement doubles the points per panel; panel sums are
//! computed independently (possibly in parallel) and reduced in panel order,
//! so results are bit-reproducible regardless of thread count.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sum::ComplexSum;
use crate::{Error, Result};

pub const MAX_RULE_POINTS: usize = 512;

/// Relative slack allowed when checking an integrand against its envelope.
const ENVELOPE_SLACK: f64 = 1e-8;

/// Nodes and weights on `[−1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for iter in 0..100 {
                let (p, p_prev) = legendre_pair(n, x);
                dp = nf * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) || iter == 99 {
                    let (p, p_prev) = legendre_pair(n, x);
                    dp = nf * (x * p - p_prev) / (x * x - 1.0);
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// `∫_a^b f` with this rule mapped affinely.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

/// `(P_n(x), P_{n−1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// The `n`-point Gauss–Legendre rule, `2 ≤ n ≤ 512`. Rules are cached.
pub fn gauss_legendre_rule(n: usize) -> Result<Arc<GaussLegendre>> {
    if !(2..=MAX_RULE_POINTS).contains(&n) {
        return Err(Error::Range(format!(
            "Gauss–Legendre rule size must be in 2..={MAX_RULE_POINTS}, got {n}"
        )));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(guard
        .entry(n)
        .or_insert_with(|| Arc::new(GaussLegendre::compute(n)))
        .clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayKind {
    /// `scale · (1+x)^degree · e^{−rate·x}`
    ExponentialRate,
    /// `scale · (1+x)^degree · e^{−rate·x²}`
    SuperExponential,
}

/// Upper bound on the modulus of an integrand on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub kind: DecayKind,
    pub scale: f64,
    pub rate: f64,
    pub degree: f64,
}

impl DecayEnvelope {
    pub fn exponential(scale: f64, rate: f64, degree: f64) -> Self {
        Self { kind: DecayKind::ExponentialRate, scale, rate, degree }
    }

    pub fn super_exponential(scale: f64, rate: f64, degree: f64) -> Self {
        Self { kind: DecayKind::SuperExponential, scale, rate, degree }
    }

    pub fn zero() -> Self {
        Self::exponential(0.0, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.scale.is_finite()
            && self.scale >= 0.0
            && self.rate.is_finite()
            && self.degree.is_finite()
            && (self.rate > 0.0 || self.scale == 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid decay envelope {self:?}")))
        }
    }

    fn decay(&self, x: f64) -> f64 {
        match self.kind {
            DecayKind::ExponentialRate => self.rate * x,
            DecayKind::SuperExponential => self.rate * x * x,
        }
    }

    pub fn ln_bound(&self, x: f64) -> f64 {
        self.scale.ln() + self.degree * x.ln_1p() - self.decay(x)
    }

    pub fn bound(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        self.ln_bound(x).exp()
    }

    /// Upper bound on `∫_X^∞ bound(x) dx`, from concavity of the log-bound.
    pub fn tail(&self, from: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        let d = self.degree.max(0.0);
        let slope = d / (1.0 + from)
            - match self.kind {
                DecayKind::ExponentialRate => self.rate,
                DecayKind::SuperExponential => 2.0 * self.rate * from,
            };
        if slope >= 0.0 {
            return f64::INFINITY;
        }
        let h = self.scale.ln() + d * from.ln_1p() - self.decay(from);
        h.exp() / -slope
    }

    /// Envelope of the product of two functions bounded by `self` and `other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::Domain("cannot multiply envelopes of different kinds".into()));
        }
        Ok(Self {
            kind: self.kind,
            scale: self.scale * other.scale,
            rate: self.rate + other.rate,
            degree: self.degree + other.degree,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { scale: self.scale * factor.abs(), ..*self }
    }

    /// Envelope of `|f|²` given the envelope of `|f|`.
    pub fn squared(&self) -> Self {
        Self {
            kind: self.kind,
            scale: self.scale * self.scale,
            rate: 2.0 * self.rate,
            degree: 2.0 * self.degree,
        }
    }
}

/// Controls every composite integration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Initial Gauss–Legendre points per panel; doubled on refinement.
    pub points_per_panel: usize,
    /// Ratio between consecutive panel widths near the origin.
    pub panel_growth: f64,
    /// Starting cutoff; extended until the envelope tail is below `tol/10`.
    pub cutoff: f64,
    pub tol: f64,
    /// Trapezoid points in θ for polar integrals.
    pub angular_points: usize,
    pub first_panel: f64,
    pub max_panel_width: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            points_per_panel: 16,
            panel_growth: 1.5,
            cutoff: 25.0,
            tol: 1e-10,
            angular_points: 64,
            first_panel: 1e-3,
            max_panel_width: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.points_per_panel >= 4
            && self.points_per_panel <= MAX_RULE_POINTS
            && self.panel_growth >= 1.0
            && self.cutoff > 0.0
            && self.tol > 0.0
            && self.angular_points >= 1
            && self.first_panel > 0.0
            && self.max_panel_width >= self.first_panel;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid quadrature spec {self:?}")))
        }
    }

    /// Panel partition of `[0, end]`.
    pub fn panels(&self, end: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut a = 0.0;
        let mut w = self.first_panel.min(self.max_panel_width);
        while a < end {
            let mut b = (a + w).min(end);
            if end - b < 0.25 * w {
                b = end;
            }
            out.push((a, b));
            a = b;
            w = (w * self.panel_growth).min(self.max_panel_width);
        }
        out
    }

    /// Smallest cutoff of the form `cutoff · 1.1^k` whose envelope tails are
    /// all below `tol / 10`.
    pub fn certified_cutoff(&self, envs: &[DecayEnvelope]) -> Result<f64> {
        let mut x = self.cutoff;
        for _ in 0..400 {
            if envs.iter().all(|e| e.tail(x) <= 0.1 * self.tol) {
                return Ok(x);
            }
            x *= 1.1;
        }
        Err(Error::QuadratureFailure(format!(
            "no cutoff below {x:e} makes the envelope tail smaller than {:e}",
            0.1 * self.tol
        )))
    }
}

/// Doubles the points per panel until two successive results agree to
/// `tol · max(1, |I|)` componentwise.
fn refine<F>(spec: &QuadratureSpec, mut run: F) -> Result<Vec<Complex64>>
where
    F: FnMut(usize) -> Result<Vec<Complex64>>,
{
    let mut points = spec.points_per_panel;
    let mut prev = run(points)?;
    loop {
        if points * 2 > MAX_RULE_POINTS {
            return Err(Error::QuadratureFailure(format!(
                "no agreement to {:e} after refining to {points} points per panel",
                spec.tol
            )));
        }
        points *= 2;
        let cur = run(points)?;
        let scale = cur.iter().fold(1.0f64, |m, v| m.max(v.norm()));
        let diff = cur
            .iter()
            .zip(&prev)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        if diff <= spec.tol * scale {
            return Ok(cur);
        }
        prev = cur;
    }
}

fn reduce(dim: usize, partials: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let mut sums = vec![ComplexSum::new(); dim];
    for part in &partials {
        for (s, v) in sums.iter_mut().zip(part) {
            s.add(*v);
        }
    }
    sums.iter().map(ComplexSum::value).collect()
}

/// Composite rule over `panels`; `eval(x, out)` writes the integrand values.
fn composite_line<F>(
    panels: &[(f64, f64)],
    points: usize,
    dim: usize,
    eval: &F,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &mut [Complex64]) -> Result<()> + Sync,
{
    let rule = gauss_legendre_rule(points)?;
    let partials = panels
        .par_iter()
        .map(|&(a, b)| {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut acc = vec![Complex64::new(0.0, 0.0); dim];
            let mut vals = vec![Complex64::new(0.0, 0.0); dim];
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                eval(mid + half * x, &mut vals)?;
                for (s, v) in acc.iter_mut().zip(&vals) {
                    *s += v * (w * half);
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(dim, partials))
}

fn check_envelope(x: f64, value: Complex64, env: &DecayEnvelope) -> Result<()> {
    let bound = env.bound(x);
    let m = value.norm();
    if !m.is_finite() || m > bound * (1.0 + ENVELOPE_SLACK) + f64::MIN_POSITIVE {
        return Err(Error::Envelope { x, value: m, bound });
    }
    Ok(())
}

/// `∫₀^∞ f(x) dx` for an integrand bounded by `env`.
pub fn integrate_halfline<F>(f: F, env: &DecayEnvelope, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let out = integrate_halfline_batch(
        1,
        |x, vals| {
            vals[0] = f(x);
            Ok(())
        },
        std::slice::from_ref(env),
        spec,
    )?;
    Ok(out[0])
}

/// Vector-valued half-line integration; component `i` is checked against
/// `envs[i]` at every node.
pub fn integrate_halfline_batch<F>(
    dim: usize,
    f: F,
    envs: &[DecayEnvelope],
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &mut [Complex64]) -> Result<()> + Sync,
{
    spec.validate()?;
    if envs.len() != dim {
        return Err(Error::Domain(format!("{dim} components but {} envelopes", envs.len())));
    }
    for e in envs {
        e.validate()?;
    }
    let end = spec.certified_cutoff(envs)?;
    integrate_interval_checked(dim, &f, envs, end, spec)
}

/// Integrates over `[0, end]` only, with envelope checks. The caller is
/// responsible for the tail beyond `end`.
pub(crate) fn integrate_interval_checked<F>(
    dim: usize,
    f: &F,
    envs: &[DecayEnvelope],
    end: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &mut [Complex64]) -> Result<()> + Sync,
{
    let panels = spec.panels(end);
    let checked = |x: f64, vals: &mut [Complex64]| -> Result<()> {
        f(x, vals)?;
        for (v, e) in vals.iter().zip(envs) {
            check_envelope(x, *v, e)?;
        }
        Ok(())
    };
    refine(spec, |points| composite_line(&panels, points, dim, &checked))
}

/// `∫₀^{2π} ∫₀^{R} g(ρ, θ) ρ dρ dθ`: trapezoid in θ, composite Gauss–Legendre
/// in ρ.
///
/// When `tail` is given it must bound `2πρ · max_θ |g(ρ, θ)|`; the radius
/// is then extended until its tail is below `tol/10` and `g` is checked
/// against it at every node.
pub fn integrate_disk_polar<G>(
    g: G,
    rho_max: f64,
    tail: Option<&DecayEnvelope>,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    G: Fn(f64, f64) -> Complex64 + Sync,
{
    let out = integrate_disk_polar_batch(
        1,
        |_| Ok(1.0),
        |rho, theta, vals| {
            let v = g(rho, theta);
            if let Some(env) = tail {
                check_envelope(rho, v * (2.0 * PI * rho), env)?;
            }
            vals[0] = v;
            Ok(())
        },
        rho_max,
        tail,
        spec,
    )?;
    Ok(out[0])
}

/// Vector-valued polar integration with a radial weight evaluated once per
/// radial node: `∫∫ weight(ρ) g(ρ, θ) ρ dρ dθ`.
pub fn integrate_disk_polar_batch<W, G>(
    dim: usize,
    weight: W,
    g: G,
    rho_max: f64,
    tail: Option<&DecayEnvelope>,
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>>
where
    W: Fn(f64) -> Result<f64> + Sync,
    G: Fn(f64, f64, &mut [Complex64]) -> Result<()> + Sync,
{
    spec.validate()?;
    if !(rho_max > 0.0) {
        return Err(Error::Domain(format!("polar radius must be positive, got {rho_max}")));
    }
    let end = match tail {
        Some(env) => {
            env.validate()?;
            spec.with_cutoff(rho_max).certified_cutoff(std::slice::from_ref(env))?
        }
        None => rho_max,
    };
    let panels = spec.panels(end);
    let m = spec.angular_points;
    let angles: Vec<f64> = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
    let dtheta = 2.0 * PI / m as f64;
    let radial = |rho: f64, vals: &mut [Complex64]| -> Result<()> {
        let w = weight(rho)? * rho * dtheta;
        let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
        let mut acc = vec![ComplexSum::new(); dim];
        for &theta in &angles {
            g(rho, theta, &mut scratch)?;
            for (s, v) in acc.iter_mut().zip(&scratch) {
                s.add(*v);
            }
        }
        for (out, s) in vals.iter_mut().zip(&acc) {
            *out = s.value() * w;
        }
        Ok(())
    };
    refine(spec, |points| composite_line(&panels, points, dim, &radial))
}
