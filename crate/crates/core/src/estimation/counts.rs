use serde::{Deserialize, Serialize};

use super::EstimationError;
use crate::chain::StochasticMatrix;
use crate::findings::Finding;
use crate::scalar::Scalar;
use crate::state::{StateId, STATE_COUNT};

/// Per-origin occupancy and destination counts in the layout of the crossed
/// count table.
///
/// The diagonal cell of a row is the number of persons observed in that
/// state; an off-diagonal cell is the number of those persons also observed
/// in the destination state. `None` marks a cell the source leaves
/// unpublished, which is distinct from a published zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    cells: [[Option<u64>; STATE_COUNT]; STATE_COUNT],
}

impl CountTable {
    pub fn new(cells: [[Option<i64>; STATE_COUNT]; STATE_COUNT]) -> Result<Self, EstimationError> {
        let mut out = [[None; STATE_COUNT]; STATE_COUNT];
        for (i, row) in cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                if let Some(value) = *cell {
                    if value < 0 {
                        return Err(EstimationError::NegativeCount {
                            row: StateId::ALL[i],
                            col: StateId::ALL[j],
                            value,
                        });
                    }
                    out[i][j] = Some(value as u64);
                }
            }
        }
        Ok(CountTable { cells: out })
    }

    pub fn get(&self, from: StateId, to: StateId) -> Option<u64> {
        self.cells[from.index()][to.index()]
    }

    pub fn cells(&self) -> &[[Option<u64>; STATE_COUNT]; STATE_COUNT] {
        &self.cells
    }

    /// Sum of the published off-diagonal cells of `from`.
    fn published_destinations(&self, from: StateId) -> u64 {
        StateId::ALL
            .iter()
            .filter(|&&to| to != from)
            .filter_map(|&to| self.get(from, to))
            .sum()
    }
}

/// State that receives the unpublished remainder of a row: survivors of
/// hospital states return to `S`, while `S` and `E` stay put.
fn remainder_target(from: StateId) -> StateId {
    match from {
        StateId::H | StateId::U | StateId::I => StateId::S,
        other => other,
    }
}

/// Frequency estimate `p_ij = n_ij / n_i` from a count table.
///
/// The row total `n_i` is the occupancy count on the diagonal. Published
/// destinations take their share of it and the remainder goes to
/// [`remainder_target`]. Where published destinations overlap and together
/// exceed the occupancy (the `U` row of the Mexico City table, whose `U∩I`
/// and `U∩D` counts share the `U∩I∩D` patients), the row total is the sum of
/// destinations and no remainder is left. The `D` row is always absorbing.
pub fn mle_from_counts<T: Scalar>(counts: &CountTable) -> Result<StochasticMatrix<T>, EstimationError> {
    let mut rows = [[T::zero(); STATE_COUNT]; STATE_COUNT];
    for from in StateId::ALL {
        let i = from.index();
        if from == StateId::D {
            rows[i][i] = T::one();
            continue;
        }
        let occupancy = counts.get(from, from).unwrap_or(0);
        let destinations = counts.published_destinations(from);
        let total = occupancy.max(destinations);
        if total == 0 {
            return Err(EstimationError::EmptyRow(from));
        }
        let total_t = T::from_u64(total).expect("count fits scalar");
        for to in StateId::ALL {
            if to == from {
                continue;
            }
            if let Some(n) = counts.get(from, to) {
                rows[i][to.index()] = T::from_u64(n).expect("count fits scalar") / total_t;
            }
        }
        let remainder = total - destinations;
        if remainder > 0 {
            let target = remainder_target(from).index();
            rows[i][target] = rows[i][target] + T::from_u64(remainder).expect("count fits scalar") / total_t;
        }
    }
    Ok(StochasticMatrix::new(rows)?)
}

/// Rows whose published destinations exceed the occupancy count: the
/// destination categories overlap and cannot all be one-step transitions.
pub fn count_findings(counts: &CountTable) -> Vec<Finding> {
    StateId::ALL
        .iter()
        .filter(|&&s| s != StateId::D)
        .filter_map(|&from| {
            let occupancy = counts.get(from, from).unwrap_or(0);
            let destinations = counts.published_destinations(from);
            (destinations > occupancy).then(|| {
                Finding::new(
                    "overlapping_destinations",
                    format!("row {from}"),
                    occupancy as f64,
                    destinations as f64,
                )
            })
        })
        .collect()
}

/// Entries where `estimate` and `reference` differ by more than `threshold`.
pub fn matrix_differences(
    check: &str,
    estimate: &StochasticMatrix<f64>,
    reference: &StochasticMatrix<f64>,
    threshold: f64,
) -> Vec<Finding> {
    let mut out = Vec::new();
    for from in StateId::ALL {
        for to in StateId::ALL {
            let (e, r) = (estimate.get(from, to), reference.get(from, to));
            if (e - r).abs() > threshold {
                out.push(Finding::new(check, format!("{from}->{to}"), r, e));
            }
        }
    }
    out
}
