//! One inequality check and its serialized form.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::constants::LogNumber;
use crate::error::Error;

/// Relative slack in `lhs ≤ rhs·(1 + PASS_TOLERANCE)`.
pub const PASS_TOLERANCE: f64 = 1e-6;

/// A parameter value; serialized bare.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Num(f64),
    Text(String),
}

macro_rules! int_param {
    ($($t:ty),*) => {$(
        impl From<$t> for Param {
            fn from(v: $t) -> Self {
                Param::Int(v as i64)
            }
        }
    )*};
}
int_param!(i32, i64, u32, u64, usize);

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Num(v)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}

/// `lhs / rhs` when the right side is representable, otherwise
/// `log10 rhs − log10 lhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Ratio {
    Linear(f64),
    LogGap(f64),
}

/// Whether a failing report fails the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// The inequality is proved; a failure is a real failure.
    Pass,
    /// Recorded for comparison only, never gates.
    Informational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub estimate_id: String,
    pub params: BTreeMap<String, Param>,
    pub lhs: f64,
    pub rhs: LogNumber,
    pub ratio: Ratio,
    pub pass: bool,
    pub expectation: Expectation,
    pub samples: u64,
    pub quadrature_level: Option<u32>,
    pub notes: Vec<String>,
    pub error: Option<String>,
}

impl VerificationReport {
    pub fn new(estimate_id: &str) -> Self {
        Self {
            estimate_id: estimate_id.to_string(),
            params: BTreeMap::new(),
            lhs: 0.0,
            rhs: LogNumber::ZERO,
            ratio: Ratio::Linear(0.0),
            pass: false,
            expectation: Expectation::Pass,
            samples: 0,
            quadrature_level: None,
            notes: Vec::new(),
            error: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Param>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn level(mut self, level: u32) -> Self {
        self.quadrature_level = Some(level);
        self
    }

    pub fn informational(mut self) -> Self {
        self.expectation = Expectation::Informational;
        self
    }

    /// Records `lhs ≤ rhs` and decides the pass flag in log space, so an
    /// overflowing right side is never converted.
    pub fn compare(mut self, lhs: f64, rhs: LogNumber, samples: u64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.samples = samples;
        self.pass = if lhs <= 0.0 {
            true
        } else if rhs.is_zero() {
            false
        } else {
            lhs.ln() <= rhs.ln() + PASS_TOLERANCE.ln_1p()
        };
        self.ratio = match (lhs > 0.0, rhs.to_f64()) {
            (false, _) => Ratio::Linear(0.0),
            (true, Ok(r)) if r > 0.0 && (lhs / r).is_finite() => Ratio::Linear(lhs / r),
            _ => Ratio::LogGap(rhs.log10() - lhs.log10()),
        };
        self
    }

    /// Marks the check as unable to run.
    pub fn fail(mut self, error: &Error) -> Self {
        self.pass = false;
        self.error = Some(error.to_string());
        self
    }

    pub fn finish(self, outcome: crate::Result<(f64, LogNumber, u64)>) -> Self {
        match outcome {
            Ok((lhs, rhs, samples)) => self.compare(lhs, rhs, samples),
            Err(e) => self.fail(&e),
        }
    }

    /// `lhs / rhs` as a plain number (`0` when the gap underflows).
    pub fn ratio_value(&self) -> f64 {
        match self.ratio {
            Ratio::Linear(r) => r,
            Ratio::LogGap(g) => 10f64.powf(-g),
        }
    }

    pub fn gates(&self) -> bool {
        self.expectation == Expectation::Pass
    }

    /// A gating report that did not pass.
    pub fn is_gating_failure(&self) -> bool {
        self.gates() && !self.pass
    }

    /// `pass`, `fail`, `error`, or `expected-fail` for a failing
    /// informational report.
    pub fn status(&self) -> &'static str {
        match (self.pass, self.error.is_some(), self.gates()) {
            (_, true, _) => "error",
            (true, false, _) => "pass",
            (false, false, true) => "fail",
            (false, false, false) => "expected-fail",
        }
    }

    pub fn param_num(&self, key: &str) -> Option<f64> {
        match self.params.get(key)? {
            Param::Int(i) => Some(*i as f64),
            Param::Num(x) => Some(*x),
            Param::Text(_) => None,
        }
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerificationReport", 13)?;
        st.serialize_field("estimate_id", &self.estimate_id)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs.to_f64().ok())?;
        st.serialize_field("rhs_log10", &(!self.rhs.is_zero()).then(|| self.rhs.log10()))?;
        st.serialize_field("ratio", &self.ratio)?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("expectation", &self.expectation)?;
        st.serialize_field("status", self.status())?;
        st.serialize_field("samples", &self.samples)?;
        st.serialize_field("quadrature_level", &self.quadrature_level)?;
        st.serialize_field("notes", &self.notes)?;
        st.serialize_field("error", &self.error)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_predicate() {
        let r = VerificationReport::new("x").compare(1.0, LogNumber::from_f64(1.0).unwrap(), 1);
        assert!(r.pass);
        let r = VerificationReport::new("x").compare(1.0 + 1e-7, LogNumber::ONE, 1);
        assert!(r.pass);
        let r = VerificationReport::new("x").compare(1.0 + 1e-5, LogNumber::ONE, 1);
        assert!(!r.pass);
        let r = VerificationReport::new("x").compare(0.0, LogNumber::ZERO, 1);
        assert!(r.pass);
        assert_eq!(r.ratio, Ratio::Linear(0.0));
    }

    #[test]
    fn overflowing_rhs_uses_log_gap() {
        let big = LogNumber::from_ln(5000.0).unwrap();
        let r = VerificationReport::new("x").compare(2.0, big, 1);
        assert!(r.pass);
        match r.ratio {
            Ratio::LogGap(g) => assert!((g - (5000.0 / std::f64::consts::LN_10 - 2f64.log10())).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"rhs\":null"));
        assert!(json.contains("\"kind\":\"log_gap\""));
    }

    #[test]
    fn field_order_is_fixed() {
        let r = VerificationReport::new("x").param("b", 1).param("a", "t").level(3).note("n");
        let json = serde_json::to_string(&r).unwrap();
        let keys = ["estimate_id", "params", "lhs", "rhs", "rhs_log10", "ratio", "pass", "expectation"];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("{\"a\":\"t\",\"b\":1}"));
        assert!(json.contains("\"status\":\"fail\""));
    }
}
