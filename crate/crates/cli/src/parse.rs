//! Text formats accepted on the command line and in input files.

use std::f64::consts::PI;

use idxf_core::quadrature::DecayEnvelope;
use idxf_core::Complex64;

use crate::error::CliError;

/// Parses `3`, `-1.5i`, `i`, `0.5-1.2i`, `1e-3+2e1i`.
pub fn complex(s: &str) -> Result<Complex64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Config(format!("malformed complex number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return real(&t).map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading one
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k]).map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => real(v).map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn real(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::Config(format!("malformed number {s:?}")))?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("non-finite number {s:?}")));
    }
    Ok(v)
}

fn count(s: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| CliError::Config(format!("malformed count {s:?}")))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Label grids:
///
/// - `a+bi;c+di;…` explicit list,
/// - `lattice:re0:re1:nre:im0:im1:nim` rectangular lattice, row-major in `im`,
/// - `|z|=r` the point `r`, or `|z|=r:k` for `k` equally spaced points on the
///   circle starting at angle 0.
pub fn grid(s: &str) -> Result<Vec<Complex64>, CliError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("lattice:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 6 {
            return Err(CliError::Config(format!("lattice grid needs 6 fields, got {s:?}")));
        }
        let (re0, re1, nre) = (real(parts[0])?, real(parts[1])?, count(parts[2])?);
        let (im0, im1, nim) = (real(parts[3])?, real(parts[4])?, count(parts[5])?);
        if nre == 0 || nim == 0 {
            return Err(CliError::Config("lattice counts must be positive".into()));
        }
        let (res, ims) = (linspace(re0, re1, nre), linspace(im0, im1, nim));
        return Ok(ims.iter().flat_map(|&im| res.iter().map(move |&re| Complex64::new(re, im))).collect());
    }
    if let Some(rest) = s.strip_prefix("|z|=") {
        let (r, k) = match rest.split_once(':') {
            Some((r, k)) => (real(r)?, count(k)?),
            None => (real(rest)?, 1),
        };
        if r < 0.0 || k == 0 {
            return Err(CliError::Config(format!("circle grid needs r ≥ 0 and a positive count, got {s:?}")));
        }
        return Ok((0..k).map(|j| Complex64::from_polar(r, 2.0 * PI * j as f64 / k as f64)).collect());
    }
    let pts = s.split(';').map(complex).collect::<Result<Vec<_>, _>>()?;
    if pts.is_empty() {
        return Err(CliError::Config("empty grid".into()));
    }
    Ok(pts)
}

/// Degrees: `3`, `0..3` (inclusive), or `0,2,5`.
pub fn degrees(s: &str) -> Result<Vec<usize>, CliError> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (count(a)?, count(b.trim_start_matches('='))?);
        if b < a {
            return Err(CliError::Config(format!("empty degree range {s:?}")));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(count).collect()
}

/// Abscissae: `0.5`, `0,0.5,1`, or `a:b:count`.
pub fn abscissae(s: &str) -> Result<Vec<f64>, CliError> {
    let s = s.trim();
    let parts: Vec<&str> = s.split(':').collect();
    let xs = if parts.len() == 3 {
        let n = count(parts[2])?;
        if n == 0 {
            return Err(CliError::Config("abscissa count must be positive".into()));
        }
        linspace(real(parts[0])?, real(parts[1])?, n)
    } else {
        s.split(',').map(real).collect::<Result<Vec<_>, _>>()?
    };
    if xs.iter().any(|&x| x < 0.0) {
        return Err(CliError::Config("abscissae must be nonnegative".into()));
    }
    Ok(xs)
}

/// Coefficients separated by commas, semicolons or newlines; `#` starts a
/// comment.
pub fn coefficients(text: &str) -> Result<Vec<Complex64>, CliError> {
    let c: Vec<Complex64> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split([',', ';']))
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(complex)
        .collect::<Result<_, _>>()?;
    if c.is_empty() {
        return Err(CliError::Config("no coefficients given".into()));
    }
    Ok(c)
}

/// A sampled function: `x, re, im` rows and an envelope line
/// `# envelope: scale=S rate=R degree=D [kind=exponential|gaussian]`
/// declaring `|φ(x)| ≤ S (1+x)^D e^{−R x}` (or `e^{−R x²}`).
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub envelope: DecayEnvelope,
}

pub fn is_sampled(text: &str) -> bool {
    text.lines().any(|l| envelope_line(l).is_some())
}

fn envelope_line(line: &str) -> Option<&str> {
    line.trim().strip_prefix('#')?.trim().strip_prefix("envelope:")
}

pub fn samples(text: &str) -> Result<Samples, CliError> {
    let mut envelope = None;
    let (mut xs, mut values) = (Vec::new(), Vec::new());
    for (k, line) in text.lines().enumerate() {
        if let Some(spec) = envelope_line(line) {
            if envelope.is_some() {
                return Err(CliError::Config("more than one envelope line".into()));
            }
            envelope = Some(parse_envelope(spec)?);
            continue;
        }
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split([',', ' ', '\t']).filter(|f| !f.is_empty()).collect();
        if fields.len() != 3 {
            return Err(CliError::Config(format!("line {}: expected `x, re, im`, got {body:?}", k + 1)));
        }
        xs.push(real(fields[0])?);
        values.push(Complex64::new(real(fields[1])?, real(fields[2])?));
    }
    let envelope = envelope.ok_or_else(|| CliError::Config("sampled input lacks an envelope line".into()))?;
    Ok(Samples { xs, values, envelope })
}

fn parse_envelope(spec: &str) -> Result<DecayEnvelope, CliError> {
    let (mut scale, mut rate, mut degree, mut kind) = (None, None, 0.0, "exponential");
    for field in spec.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("envelope field {field:?} is not key=value")))?;
        match k {
            "scale" => scale = Some(real(v)?),
            "rate" => rate = Some(real(v)?),
            "degree" => degree = real(v)?,
            "kind" => kind = v,
            _ => return Err(CliError::Config(format!("unknown envelope field {k:?}"))),
        }
    }
    let (scale, rate) = match (scale, rate) {
        (Some(s), Some(r)) => (s, r),
        _ => return Err(CliError::Config("envelope needs scale= and rate=".into())),
    };
    let env = match kind {
        "exponential" => DecayEnvelope::exponential(scale, rate, degree),
        "gaussian" => DecayEnvelope::super_exponential(scale, rate, degree),
        _ => return Err(CliError::Config(format!("unknown envelope kind {kind:?}"))),
    };
    env.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(env)
}
