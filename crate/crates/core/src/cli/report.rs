//! JSON reports.

use crate::symcore::scalar::C64;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub expected: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn close(name: String, value: C64, expected: C64, tol: f64) -> Self {
        Check {
            name,
            value: json!([value.re, value.im]),
            expected: json!([expected.re, expected.im]),
            tolerance: Some(tol),
            pass: (value - expected).norm() <= tol,
        }
    }

    pub fn exact(name: String, value: Value, expected: Value, pass: bool) -> Self {
        Check {
            name,
            value,
            expected,
            tolerance: None,
            pass,
        }
    }

    pub fn flag(name: String, ok: bool) -> Self {
        Self::exact(name, json!(ok), json!(true), ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub schema: u32,
    pub error: ErrorBody,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}
