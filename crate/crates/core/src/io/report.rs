use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tables::{emit_findings_csv, emit_horizon_table, emit_matrix};
use super::{format_number, IoError};
use crate::chain::{AbsorptionReport, StochasticMatrix};
use crate::estimation::HorizonTable;
use crate::findings::Finding;
use crate::simulate::{CohortResult, ZScore, ZScoreTable};
use crate::state::StateId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    /// `paper`, `file:PATH`, `mle:PATH` or `fit:PATH`.
    pub matrix_source: String,
    pub horizons: Vec<u32>,
    /// Free-form generation parameters (seed, trajectory count, residual...).
    pub parameters: BTreeMap<String, String>,
}

/// Outcome of a horizon fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub starts: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub matrix: Option<StochasticMatrix<f64>>,
    pub fit: Option<FitSummary>,
    pub horizon_table: Option<HorizonTable>,
    pub absorption: Option<AbsorptionReport<f64>>,
    pub cohort: Option<CohortResult>,
    pub z_scores: Option<ZScoreTable<f64>>,
    pub findings: Vec<Finding>,
}

/// Everything a subcommand reports.
///
/// JSON output is the serde form of this struct (`metadata`, `body` with
/// snake_case field names, absent sections as `null`). CSV output writes the
/// body sections present, in field order, separated by blank lines; each
/// section carries its own header row. A document holding only a horizon
/// table is therefore a valid horizon-table CSV. Metadata is JSON-only.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub metadata: ReportMetadata,
    pub body: ReportBody,
}

impl ReportDocument {
    pub fn from_json(bytes: &[u8]) -> Result<Self, IoError> {
        serde_json::from_slice(bytes).map_err(|e| IoError::Json(e.to_string()))
    }
}

fn absorption_csv(report: &AbsorptionReport<f64>) -> String {
    let mut out = String::from("from,expected_steps");
    for s in &report.absorbing_states {
        out.push_str(&format!(",absorb_{s}"));
    }
    out.push('\n');
    for (i, s) in report.transient_states.iter().enumerate() {
        out.push_str(&format!("{s},{}", format_number(report.expected_steps[i])));
        for v in &report.absorption_probs[i] {
            out.push(',');
            out.push_str(&format_number(*v));
        }
        out.push('\n');
    }
    out.push_str("\nfundamental");
    for s in &report.transient_states {
        out.push_str(&format!(",{s}"));
    }
    out.push('\n');
    for (i, s) in report.transient_states.iter().enumerate() {
        out.push_str(s.code());
        for v in &report.fundamental[i] {
            out.push(',');
            out.push_str(&format_number(*v));
        }
        out.push('\n');
    }
    out
}

fn cohort_csv(cohort: &CohortResult) -> String {
    let mut out = String::from("day,S,E,H,U,I,D\n");
    for (day, counts) in cohort.occupancy.iter().enumerate() {
        out.push_str(&day.to_string());
        for c in counts {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
    }
    out
}

fn z_csv(table: &ZScoreTable<f64>) -> String {
    let mut out = String::from("day,state,analytic,empirical,z\n");
    for (day, row) in table.scores.iter().enumerate() {
        for (s, score) in StateId::ALL.iter().zip(row) {
            let (analytic, empirical, z) = match score {
                ZScore::Value { analytic, empirical, z } => (*analytic, *empirical, format!("{z:.4}")),
                ZScore::Skipped { analytic, empirical } => (*analytic, *empirical, "skipped".into()),
            };
            out.push_str(&format!(
                "{day},{s},{},{},{z}\n",
                format_number(analytic),
                format_number(empirical)
            ));
        }
    }
    out
}

/// Serializes a report. Output is byte-for-byte deterministic.
pub fn emit_report(doc: &ReportDocument, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(doc).expect("report serializes");
            out.push(b'\n');
            out
        }
        ReportFormat::Csv => {
            let body = &doc.body;
            let mut sections = Vec::new();
            if let Some(m) = &body.matrix {
                sections.push(emit_matrix(m));
            }
            if let Some(f) = &body.fit {
                sections.push(format!(
                    "residual,iterations,converged,starts\n{:e},{},{},{}\n",
                    f.residual, f.iterations, f.converged, f.starts
                ));
            }
            if let Some(t) = &body.horizon_table {
                sections.push(emit_horizon_table(t));
            }
            if let Some(a) = &body.absorption {
                sections.push(absorption_csv(a));
            }
            if let Some(c) = &body.cohort {
                sections.push(cohort_csv(c));
            }
            if let Some(z) = &body.z_scores {
                sections.push(z_csv(z));
            }
            if !body.findings.is_empty() || sections.is_empty() {
                sections.push(emit_findings_csv(&body.findings));
            }
            sections.join("\n").into_bytes()
        }
    }
}
