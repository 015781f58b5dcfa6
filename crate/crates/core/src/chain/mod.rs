//! Validated transition matrices and their analytics.

mod absorbing;
mod distribution;
pub(crate) mod linalg;
mod matrix;

pub use absorbing::AbsorptionReport;
pub use distribution::Distribution;
pub use matrix::{StateClasses, StochasticMatrix};

use crate::state::StateId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChainError {
    #[error("row {row} sums to {sum} (deviation {deviation:e} exceeds {tolerance:e})")]
    RowSum {
        row: StateId,
        sum: f64,
        deviation: f64,
        tolerance: f64,
    },
    #[error("entry ({row}, {col}) = {value} is outside [0, 1]")]
    Range { row: StateId, col: StateId, value: f64 },
    #[error("row {row} of the {power}-step matrix drifted from unit sum by {deviation:e}")]
    NumericalDrift { power: u32, row: StateId, deviation: f64 },
    #[error("distribution entry {state} = {value} is outside [0, 1]")]
    DistributionRange { state: StateId, value: f64 },
    #[error("distribution sums to {sum}, not 1")]
    DistributionSum { sum: f64 },
    #[error("chain has no absorbing state")]
    NoAbsorbingState,
    #[error("I - Q is numerically singular (condition estimate {condition:e})")]
    Singular { condition: f64 },
}
