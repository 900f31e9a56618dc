//! Serializable result records.

use serde::{Deserialize, Serialize};

use crate::optimize::Diagnostics;
use crate::registry::Outcome;

/// One computed quantity with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub quantity: String,
    /// Value in bits (or the quantity's natural unit for ranks, flags and residuals).
    /// Non-finite values are written as the strings `"inf"`, `"-inf"` and `"nan"`.
    #[serde(with = "extended_float")]
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<bool>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<f64>,
    /// Hex SHA-256 of the input file bytes.
    pub input_digest: String,
    pub seed: u64,
    pub restarts: usize,
    pub wall_time_seconds: f64,
}

impl CorrelationReport {
    pub fn from_outcome(quantity: &str, outcome: Outcome, input_digest: String, seed: u64, restarts: usize) -> Self {
        Self {
            quantity: quantity.to_string(),
            value: outcome.value,
            flag: outcome.flag,
            details: outcome.details,
            diagnostics: outcome.diagnostics,
            parameters: outcome.parameters,
            input_digest,
            seed,
            restarts,
            wall_time_seconds: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Copy with timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_seconds: 0.0,
            ..self.clone()
        }
    }
}

mod extended_float {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("invalid float {other:?}"))),
            },
        }
    }
}
