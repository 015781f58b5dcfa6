//! CSV and JSON formats for the published tables and generated reports.
//!
//! All files are UTF-8 with LF line endings and a single header row. The
//! headers are:
//!
//! | table | header |
//! |---|---|
//! | delegations | `locality,population,cases,deaths,hospitalized,non_hospitalized,uci,recovered,intubated` |
//! | Venn regions | `locality,r1,r2,r3,r4,r5,r6,r7,r8` |
//! | crossed counts | `from,S,E,H,U,I,F` (`D` accepted for `F`; `-` marks an unpublished cell) |
//! | transition matrix | `from,S,E,H,U,I,D` (`F` accepted for `D`) |
//! | horizon table | `days,EF,HF,UF,IF,HU,UI,HI,HS,US,IS` |
//! | plot data | `day,from,to,probability` |

mod locality;
mod number;
mod report;
mod tables;

pub use locality::canonical_locality;
pub use number::format_number;
pub use report::{emit_report, FitSummary, ReportBody, ReportDocument, ReportFormat, ReportMetadata};
pub use tables::{
    crossed_findings, delegation_findings, emit_count_table, emit_delegation_table, emit_findings_csv,
    emit_horizon_table, emit_matrix, emit_plot_data, emit_region_table, parse_count_table, parse_delegation_table,
    parse_horizon_table, parse_matrix, parse_matrix_rows, parse_region_table, region_findings, DelegationRecord,
    DELEGATION_HEADER, HORIZON_HEADER, REGION_HEADER,
};

use crate::chain::ChainError;
use crate::estimation::EstimationError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("line {line}, column `{column}`: cannot parse `{value}`: {reason}")]
    FieldParse {
        line: u64,
        column: String,
        value: String,
        reason: String,
    },
    #[error("day {0} appears more than once")]
    DuplicateHorizon(u32),
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error("json: {0}")]
    Json(String),
}
