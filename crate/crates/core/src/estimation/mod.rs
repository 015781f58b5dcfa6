//! Transition matrices from data: count-based estimates, Venn-region
//! consistency checks, and the inverse horizon fit.

mod counts;
mod fit;
mod horizon;
mod mask;
mod simplex;
mod venn;

pub use counts::{count_findings, matrix_differences, mle_from_counts, CountTable};
pub use fit::{fit_matrix_from_horizons, horizon_residual, FitConfig, FitResult};
pub use horizon::{HorizonTable, Transition, TABLE_HORIZONS, TABLE_TRANSITIONS};
pub use mask::StructureMask;
pub use simplex::project_to_simplex;
pub use venn::{check_crossed_consistency, decompose_regions, RegionRow, VennCounts};

use crate::chain::ChainError;
use crate::state::StateId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimationError {
    #[error("row {0} has no counts")]
    EmptyRow(StateId),
    #[error("negative count {value} at ({row}, {col})")]
    NegativeCount { row: StateId, col: StateId, value: i64 },
    #[error("projection support is empty")]
    EmptySupport,
    #[error("support has length {support}, vector has length {vector}")]
    SupportLength { vector: usize, support: usize },
    #[error("non-finite value in projection input")]
    NonFinite,
    #[error("structure mask: {0}")]
    Mask(String),
    #[error("horizon table: {0}")]
    Horizon(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}
