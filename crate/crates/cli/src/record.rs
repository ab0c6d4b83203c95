//! Output records. Every float field is finite or absent, so a record parses
//! back to exactly the value that was written.

use serde::{Deserialize, Serialize};
use thomae_core::Error;

use crate::job::{JobSpec, Settings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    pub terms_used: Option<u64>,
    pub tail_bound: Option<f64>,
    pub tail_corrected: Option<bool>,
    pub converged: Option<bool>,
    pub terminated_exactly: Option<bool>,
    pub excess: Option<f64>,
    pub quadrature_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformRecord {
    pub kind: String,
    pub prefactor_numerator: Vec<f64>,
    pub prefactor_denominator: Vec<f64>,
    pub prefactor: Option<f64>,
    pub power_exponent: Option<f64>,
    pub params: Vec<f64>,
    pub excess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub identity: String,
    pub params: Vec<f64>,
    pub exact_params: Vec<String>,
    pub x: Option<f64>,
    pub n: Option<u32>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub lhs_exact: Option<String>,
    pub rhs_exact: Option<String>,
    pub abs_discrepancy: Option<f64>,
    pub rel_discrepancy: Option<f64>,
    pub rel_tolerance: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageRecord {
    pub label: String,
    pub value: Option<f64>,
    pub error_estimate: Option<f64>,
    pub accurate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
    pub stage: Option<String>,
    /// Caused by the inputs (exit 2) rather than by accuracy (exit 1).
    pub input_error: bool,
}

impl ErrorRecord {
    pub fn from_core(e: &Error) -> Self {
        let kind = match e {
            Error::Pole { .. } => "pole",
            Error::LowerPole { .. } => "lower-pole",
            Error::Domain(_) => "domain",
            Error::Divergence { .. } => "divergence",
            Error::SlowConvergence { .. } => "slow-convergence",
            Error::MaxTermsExceeded { .. } => "max-terms-exceeded",
            Error::Precondition { .. } => "precondition",
            Error::ZeroDenominator(_) => "zero-denominator",
            Error::NoValidRepresentation { .. } => "no-valid-representation",
            Error::AccuracyNotReached { .. } => "accuracy-not-reached",
            Error::InvalidTolerance(_) => "invalid-tolerance",
            Error::ParseRational(_) => "parse",
        };
        let stage = match e {
            Error::Precondition { stage, .. } => stage.clone(),
            _ => None,
        };
        ErrorRecord {
            kind: kind.into(),
            message: e.to_string(),
            stage,
            input_error: e.is_input_error(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        ErrorRecord {
            kind: "usage".into(),
            message: message.into(),
            stage: None,
            input_error: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub command: String,
    pub input: Option<JobSpec>,
    pub settings: Option<Settings>,
    pub status: Status,
    pub value: Option<f64>,
    pub exact_value: Option<String>,
    pub representation: Option<String>,
    pub diagnostics: Diagnostics,
    pub transform: Option<TransformRecord>,
    pub checks: Vec<CheckRecord>,
    pub stage_values: Vec<StageRecord>,
    pub max_discrepancy: Option<f64>,
    pub error: Option<ErrorRecord>,
    pub wall_time_ms: f64,
}

impl ResultRecord {
    pub fn new(command: impl Into<String>) -> Self {
        ResultRecord {
            command: command.into(),
            input: None,
            settings: None,
            status: Status::Pass,
            value: None,
            exact_value: None,
            representation: None,
            diagnostics: Diagnostics::default(),
            transform: None,
            checks: Vec::new(),
            stage_values: Vec::new(),
            max_discrepancy: None,
            error: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn fail_with(&mut self, error: ErrorRecord) {
        self.status = if error.input_error { Status::Error } else { Status::Fail };
        self.error = Some(error);
    }

    /// 0 pass, 1 numerical failure, 2 input or precondition error.
    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => {
                if self.error.as_ref().is_none_or(|e| e.input_error) {
                    2
                } else {
                    1
                }
            }
        }
    }
}

/// Finite floats only; the rest cannot be written as JSON numbers.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}
