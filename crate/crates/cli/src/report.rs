//! Machine-readable verification reports.
//!
//! Reals are written with 17 significant digits; exact integers are written as
//! decimal strings.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::value::RawValue;

/// A real as a JSON number with 17 significant digits, or a string for
/// non-finite values.
pub fn json_f64(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("\"{x}\"")
    };
    RawValue::from_string(text).expect("valid JSON literal")
}

pub fn json_f64s(xs: &[f64]) -> Box<RawValue> {
    let items: Vec<String> = xs.iter().map(|&x| json_f64(x).get().to_string()).collect();
    RawValue::from_string(format!("[{}]", items.join(","))).expect("valid JSON array")
}

pub fn json_str(s: &str) -> Box<RawValue> {
    RawValue::from_string(serde_json::to_string(s).expect("string")).expect("valid JSON string")
}

pub fn json_int(x: impl ToString) -> Box<RawValue> {
    json_str(&x.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Numeric residual, or the marker for suites checked in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxResidual {
    Numeric(f64),
    Exact,
}

impl Serialize for MaxResidual {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MaxResidual::Numeric(x) => json_f64(*x).serialize(s),
            MaxResidual::Exact => s.serialize_str("exact"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    Exact,
}

impl Serialize for Tolerance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Tolerance::Relative(x) => json_f64(*x).serialize(s),
            Tolerance::Exact => s.serialize_str("exact"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Params {
    pub trials: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    pub tol: Tolerance,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub inputs: BTreeMap<String, Box<RawValue>>,
    pub observed: Box<RawValue>,
    pub expected: Box<RawValue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub n: usize,
    pub params: Params,
    pub status: Status,
    pub max_residual: MaxResidual,
    pub failures: Vec<Failure>,
    /// Suite-specific extras such as fitted constants.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Box<RawValue>>,
    /// Per-suite reports for `all`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<VerifyReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
