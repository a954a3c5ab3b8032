//! The JSON report envelope shared by every subcommand.
//!
//! Reports are deterministic for a fixed configuration and seed: object
//! keys are sorted, the input is identified by its SHA-256 digest and
//! timing is omitted unless requested.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: &str = "zetakit-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing was checked; the report carries computed values only.
    Informational,
    /// Z is empty, so the bound formulas do not apply.
    EmptyVariety,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Fail => 1,
            _ => 0,
        }
    }
}

/// How far a reported quantity is certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub quantity: String,
    /// e.g. "exact", "mod π^12", "desk-scale certified (s ≤ 3)".
    pub precision: String,
}

impl Certification {
    pub fn new(quantity: impl Into<String>, precision: impl Into<String>) -> Self {
        Certification { quantity: quantity.into(), precision: precision.into() }
    }

    pub fn exact(quantity: impl Into<String>) -> Self {
        Self::new(quantity, "exact")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub config: RunConfig,
    /// The command's own parameters.
    pub parameters: Value,
    /// SHA-256 of the system file bytes, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub results: Value,
    pub certification: Vec<Certification>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(config: &RunConfig, parameters: Value) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            config: config.clone(),
            parameters,
            input_digest: None,
            results: Value::Null,
            certification: Vec::new(),
            verdict: Verdict::Informational,
            timing_ms: None,
        }
    }

    pub fn with_input(mut self, bytes: &[u8]) -> Self {
        self.input_digest = Some(digest(bytes));
        self
    }

    pub fn certify(&mut self, c: Certification) {
        self.certification.push(c);
    }

    pub fn to_json(&self) -> String {
        // Round-trip through Value so that nested maps come out sorted.
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
