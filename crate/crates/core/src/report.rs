//! Machine-readable verification reports.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
    pub error: f64,
}

/// Outcome of one named check. `pass` holds exactly when every case error is
/// finite and `max_abs_error ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: Value,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub cases: Vec<CaseRecord>,
    pub errata_notes: Vec<String>,
}

impl VerificationReport {
    pub fn builder(check: impl Into<String>, parameters: Value, tolerance: f64) -> ReportBuilder {
        ReportBuilder {
            check: check.into(),
            parameters,
            tolerance,
            cases: Vec::new(),
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportBuilder {
    check: String,
    parameters: Value,
    tolerance: f64,
    cases: Vec<CaseRecord>,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn case(&mut self, inputs: Value, expected: Value, got: Value, error: f64) -> &mut Self {
        self.cases.push(CaseRecord { inputs, expected, got, error });
        self
    }

    /// Records a real comparison with error `|got − expected| / max(1, |expected|)`
    /// when `relative`, else `|got − expected|`.
    pub fn real(&mut self, inputs: Value, expected: f64, got: f64, relative: bool) -> &mut Self {
        let diff = (got - expected).abs();
        let error = if relative { diff / expected.abs().max(1.0) } else { diff };
        self.case(inputs, json!(expected), json!(got), error)
    }

    /// Records a complex comparison; relative errors are taken against
    /// `|expected|` (no floor).
    pub fn complex(&mut self, inputs: Value, expected: Complex64, got: Complex64, relative: bool) -> &mut Self {
        let diff = (got - expected).norm();
        let error = if relative { diff / expected.norm() } else { diff };
        self.case(inputs, cval(expected), cval(got), error)
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn finish(&self) -> VerificationReport {
        let all_finite = self.cases.iter().all(|c| c.error.is_finite());
        let max = self.cases.iter().fold(0.0f64, |m, c| if c.error.is_nan() { f64::NAN } else { m.max(c.error) });
        let pass = all_finite && !self.cases.is_empty() && max <= self.tolerance;
        VerificationReport {
            check: self.check.clone(),
            parameters: self.parameters.clone(),
            max_abs_error: max,
            tolerance: self.tolerance,
            pass,
            cases: self.cases.clone(),
            errata_notes: self.notes.clone(),
        }
    }
}

/// `[re, im]`.
pub fn cval(z: Complex64) -> Value {
    json!([z.re, z.im])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_within_tolerance() {
        let mut b = VerificationReport::builder("demo", json!({"gamma": 2.0}), 1e-6);
        b.real(json!({"n": 0}), 1.0, 1.0 + 1e-7, true);
        assert!(b.finish().pass);
        b.real(json!({"n": 1}), 0.0, 2e-6, false);
        let r = b.finish();
        assert!(!r.pass);
        assert_eq!(r.max_abs_error, 2e-6);
        b.note("printed convention");
        assert_eq!(b.finish().errata_notes.len(), 1);
    }

    #[test]
    fn nan_and_empty_fail() {
        let b = VerificationReport::builder("empty", json!({}), 1.0);
        assert!(!b.finish().pass);
        let mut b = VerificationReport::builder("nan", json!({}), 1.0);
        b.case(json!(null), json!(0.0), json!(null), f64::NAN);
        assert!(!b.finish().pass);
    }

    #[test]
    fn complex_cases_serialize_as_pairs() {
        let mut b = VerificationReport::builder("c", json!({}), 1e-12);
        b.complex(json!({}), Complex64::new(1.0, -2.0), Complex64::new(1.0, -2.0), true);
        let r = b.finish();
        assert_eq!(r.cases[0].got, json!([1.0, -2.0]));
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
