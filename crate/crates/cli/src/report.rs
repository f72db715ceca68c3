//! JSON report types.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;
use weakval_core::ensemble::StudyReport;
use weakval_core::extraction::Method;
use weakval_core::{Error, Result};

/// Complex number as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deltas {
    /// `|extracted - direct|`, for matrix scenarios.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extracted_vs_direct: Option<f64>,
    /// `|primary - cross-check|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primary_vs_cross_check: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<Cplx>,
    pub extracted: Cplx,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<Cplx>,
    pub deltas: Deltas,
    /// `β · max|c_k|²`, for matrix scenarios.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weakness_parameter: Option<f64>,
    pub agreement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractReport {
    pub expression: String,
    pub weak_value: Cplx,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<Cplx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check_delta: Option<f64>,
    pub consistent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceSource {
    /// `<post|C|pre> / <post|pre>`.
    Direct,
    /// Dual extraction from the expression.
    Extracted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub scenario: String,
    pub seed: u64,
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    /// Re C_w, the weak-regime prediction for the mean.
    pub reference: f64,
    pub reference_source: ReferenceSource,
    /// `|mean - reference| / std_error`.
    pub deviation_std_errors: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weakness_parameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub study: Option<StudyReport>,
}

/// Pretty JSON, refusing non-finite numbers (which serde_json writes as `null`).
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let value = serde_json::to_value(report).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(path) = find_null(&value, String::new()) {
        return Err(Error::Domain(format!("non-finite value in report field `{path}`")));
    }
    serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))
}

fn find_null(v: &Value, path: String) -> Option<String> {
    match v {
        Value::Null => Some(path),
        Value::Array(items) => items.iter().enumerate().find_map(|(i, x)| find_null(x, format!("{path}[{i}]"))),
        Value::Object(map) => map.iter().find_map(|(k, x)| {
            let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
            find_null(x, p)
        }),
        _ => None,
    }
}
