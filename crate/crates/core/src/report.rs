//! Versioned JSON reports.
//!
//! Field names are part of the interface. Wall-clock timings are only
//! included on request so that reports from repeated runs compare equal
//! byte for byte.

use serde::Serialize;
use serde_json::Value as Json;
use sha2::{Digest, Sha256};

use crate::exact::{ExactResult, ExactStatus};
use crate::model::{Assignment, Mop};
use crate::parser::{format_model, write_assignment};
use crate::search::{PipelineResult, SearchResult};
use crate::symmetry::{
    Classification, DesSymmetry, DetectionReport, RejectionReason, VerificationReport, VerifyMode,
};

pub const SCHEMA: &str = "symloc-report/1";

/// SHA-256 of the canonical printed form, so formatting differences in the
/// source file do not change it.
pub fn model_digest(mop: &Mop) -> String {
    hex::encode(Sha256::digest(format_model(mop).as_bytes()))
}

fn assignment_json(mop: &Mop, a: &Assignment) -> Json {
    serde_json::from_str(&write_assignment(mop, a)).expect("valid JSON")
}

#[derive(Serialize, Debug, Clone)]
pub struct ModelInfo {
    pub name: String,
    pub digest: String,
    /// Number of total assignments, or "overflow".
    pub assignment_space: String,
}

impl ModelInfo {
    pub fn new(mop: &Mop) -> Self {
        ModelInfo {
            name: mop.name.clone(),
            digest: model_digest(mop),
            assignment_space: mop.assignment_space_size().to_string(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct SymmetryJson {
    #[serde(rename = "type")]
    pub type_name: String,
    pub a: String,
    pub b: String,
    pub sigma: Vec<String>,
    pub classification: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Json>,
}

impl SymmetryJson {
    pub fn new(mop: &Mop, s: &DesSymmetry) -> Self {
        let d = mop.domain(s.ty);
        let (samples, witness) = match &s.classification {
            Classification::InvariantSampled { samples } => (Some(*samples), None),
            Classification::Variant { witness } => (None, Some(assignment_json(mop, witness))),
            _ => (None, None),
        };
        SymmetryJson {
            type_name: mop.vocabulary.type_name(s.ty).to_string(),
            a: d.label(s.a),
            b: d.label(s.b),
            sigma: s.sigma.iter().map(|x| mop.symbol(*x).name.clone()).collect(),
            classification: s.classification.label(),
            samples,
            witness,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct RejectionJson {
    #[serde(rename = "type")]
    pub type_name: String,
    pub a: String,
    pub b: String,
    pub reason: &'static str,
    pub detail: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct DetectionJson {
    pub policy: String,
    pub candidate_types: Vec<String>,
    pub candidates_checked: usize,
    pub detected: usize,
    pub symmetries: Vec<SymmetryJson>,
    pub rejected: Vec<RejectionJson>,
    pub neighborhood_size: usize,
}

impl DetectionJson {
    pub fn new(mop: &Mop, r: &DetectionReport) -> Self {
        let rejected = r
            .rejected
            .iter()
            .map(|x| {
                let d = mop.domain(x.pair.ty);
                let detail = match &x.reason {
                    RejectionReason::ObjectiveInvariant { verdict } => verdict.label().to_string(),
                    other => other.to_string(),
                };
                RejectionJson {
                    type_name: mop.vocabulary.type_name(x.pair.ty).to_string(),
                    a: d.label(x.pair.a),
                    b: d.label(x.pair.b),
                    reason: x.reason.code(),
                    detail,
                }
            })
            .collect();
        DetectionJson {
            policy: r.policy.to_string(),
            candidate_types: r
                .candidate_types
                .iter()
                .map(|t| mop.vocabulary.type_name(*t).to_string())
                .collect(),
            candidates_checked: r.candidates_checked,
            detected: r.detected_count(),
            symmetries: r.symmetries.iter().map(|s| SymmetryJson::new(mop, s)).collect(),
            rejected,
            neighborhood_size: r.symmetries.len(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct SearchJson {
    pub strategy: &'static str,
    pub seed: u64,
    pub initial_objective: i64,
    pub best_objective: i64,
    pub iterations: u64,
    pub moves_executed: u64,
    pub termination: &'static str,
    pub restart: usize,
    pub trajectory: Vec<(u64, i64)>,
    pub best: Json,
}

impl SearchJson {
    pub fn new(mop: &Mop, strategy: &'static str, seed: u64, initial_objective: i64, r: &SearchResult) -> Self {
        SearchJson {
            strategy,
            seed,
            initial_objective,
            best_objective: r.best_objective,
            iterations: r.iterations,
            moves_executed: r.moves_executed,
            termination: r.termination.as_str(),
            restart: r.restart,
            trajectory: r.trajectory.clone(),
            best: assignment_json(mop, &r.best),
        }
    }

    pub fn from_pipeline(mop: &Mop, strategy: &'static str, seed: u64, p: &PipelineResult) -> Self {
        SearchJson::new(mop, strategy, seed, p.initial_objective, &p.search)
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ExactJson {
    pub status: ExactStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<i64>,
    pub nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Json>,
}

impl ExactJson {
    pub fn new(mop: &Mop, r: &ExactResult) -> Self {
        ExactJson {
            status: r.status,
            objective: r.objective,
            nodes_explored: r.nodes_explored,
            assignment: r.assignment.as_ref().map(|a| assignment_json(mop, a)),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct SymmetryCheckJson {
    #[serde(rename = "type")]
    pub type_name: String,
    pub a: String,
    pub b: String,
    pub passed: bool,
    pub mode: &'static str,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Json>,
}

impl SymmetryCheckJson {
    pub fn new(mop: &Mop, s: &DesSymmetry, v: &VerificationReport) -> Self {
        let d = mop.domain(s.ty);
        SymmetryCheckJson {
            type_name: mop.vocabulary.type_name(s.ty).to_string(),
            a: d.label(s.a),
            b: d.label(s.b),
            passed: v.passed,
            mode: match v.mode {
                VerifyMode::Exhaustive => "exhaustive",
                VerifyMode::Sampled => "sampled",
            },
            checked: v.checked,
            counterexample: v.counterexample.as_ref().map(|a| assignment_json(mop, a)),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct OracleJson {
    pub optimum: i64,
    pub pipeline_objective: i64,
    /// Distance from the optimum in the user's sense; never negative.
    pub gap: i64,
}

#[derive(Serialize, Debug, Clone)]
pub struct VerificationJson {
    pub all_passed: bool,
    pub checks: Vec<SymmetryCheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
}

#[derive(Serialize, Debug, Clone, Default)]
pub struct Timings {
    pub total_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection_ms: Option<f64>,
}

/// Top-level report written by every `--json` command.
#[derive(Serialize, Debug, Clone)]
pub struct CliReport {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub model: ModelInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<DetectionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl CliReport {
    pub fn new(mop: &Mop, command: Vec<String>) -> Self {
        CliReport {
            schema: SCHEMA,
            command,
            model: ModelInfo::new(mop),
            detection: None,
            search: None,
            exact: None,
            verification: None,
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
