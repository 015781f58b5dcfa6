use serde::{Deserialize, Serialize};

use super::EstimationError;
use crate::chain::StochasticMatrix;
use crate::scalar::Scalar;
use crate::state::StateId;

/// One published n-step transition column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub from: StateId,
    pub to: StateId,
}

impl Transition {
    pub const fn new(from: StateId, to: StateId) -> Self {
        Transition { from, to }
    }

    /// Column header, e.g. `EF` for infected to dead.
    pub fn code(&self) -> String {
        format!("{}{}", self.from.display_alias(), self.to.display_alias())
    }
}

/// The ten columns of the published horizon tables, in table order.
pub const TABLE_TRANSITIONS: [Transition; 10] = {
    use StateId::*;
    [
        Transition::new(E, D),
        Transition::new(H, D),
        Transition::new(U, D),
        Transition::new(I, D),
        Transition::new(H, U),
        Transition::new(U, I),
        Transition::new(H, I),
        Transition::new(H, S),
        Transition::new(U, S),
        Transition::new(I, S),
    ]
};

/// Day horizons of the published tables.
pub const TABLE_HORIZONS: [u32; 11] = [7, 15, 21, 30, 45, 60, 90, 120, 180, 240, 365];

/// n-step probabilities of [`TABLE_TRANSITIONS`] at a list of day horizons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizonTable {
    horizons: Vec<u32>,
    values: Vec<[f64; 10]>,
}

impl HorizonTable {
    /// Horizons must be strictly increasing and every value a probability.
    pub fn new(horizons: Vec<u32>, values: Vec<[f64; 10]>) -> Result<Self, EstimationError> {
        if horizons.len() != values.len() {
            return Err(EstimationError::Horizon(format!(
                "{} horizons but {} value rows",
                horizons.len(),
                values.len()
            )));
        }
        if let Some(w) = horizons.windows(2).find(|w| w[0] >= w[1]) {
            return Err(EstimationError::Horizon(format!(
                "horizons not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        for (h, row) in horizons.iter().zip(&values) {
            if let Some((k, v)) = row.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && **v <= 1.0)) {
                return Err(EstimationError::Horizon(format!(
                    "day {h}, column {}: {v} is not a probability",
                    TABLE_TRANSITIONS[k].code()
                )));
            }
        }
        Ok(HorizonTable { horizons, values })
    }

    /// Forward computation: the ten table columns of `P^n` for each horizon.
    pub fn from_matrix<T: Scalar>(p: &StochasticMatrix<T>, horizons: &[u32]) -> Result<Self, EstimationError> {
        let mut sorted = horizons.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let values = sorted
            .iter()
            .map(|&n| {
                let pn = p.power(n)?;
                // powers can overshoot 1 by an ulp
                Ok(TABLE_TRANSITIONS.map(|t| pn.get(t.from, t.to).as_f64().clamp(0.0, 1.0)))
            })
            .collect::<Result<Vec<_>, EstimationError>>()?;
        HorizonTable::new(sorted, values)
    }

    pub fn horizons(&self) -> &[u32] {
        &self.horizons
    }

    pub fn values(&self) -> &[[f64; 10]] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.horizons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.horizons.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &[f64; 10])> {
        self.horizons.iter().copied().zip(self.values.iter())
    }

    pub fn get(&self, horizon: u32, transition: Transition) -> Option<f64> {
        let row = self.horizons.binary_search(&horizon).ok()?;
        let col = TABLE_TRANSITIONS.iter().position(|t| *t == transition)?;
        Some(self.values[row][col])
    }
}
