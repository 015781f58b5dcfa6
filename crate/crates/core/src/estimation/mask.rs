use serde::{Deserialize, Serialize};

use super::EstimationError;
use crate::chain::StochasticMatrix;
use crate::scalar::Scalar;
use crate::state::{StateId, STATE_COUNT};

/// Which transitions a fitted matrix may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureMask {
    allowed: [[bool; STATE_COUNT]; STATE_COUNT],
}

impl StructureMask {
    /// Every row needs at least one allowed entry and the dead row may only
    /// point to itself.
    pub fn new(allowed: [[bool; STATE_COUNT]; STATE_COUNT]) -> Result<Self, EstimationError> {
        for (i, row) in allowed.iter().enumerate() {
            if !row.iter().any(|&a| a) {
                return Err(EstimationError::Mask(format!("row {} allows nothing", StateId::ALL[i])));
            }
        }
        let d = StateId::D.index();
        if allowed[d].iter().enumerate().any(|(j, &a)| a != (j == d)) {
            return Err(EstimationError::Mask("row D must allow only (D, D)".into()));
        }
        Ok(StructureMask { allowed })
    }

    /// Arrows of the published state diagram: `S -> S,E`; `E -> S,E,H`;
    /// `H -> S,H,U,I,D`; `U -> S,U,I,D`; `I -> S,D`; `D -> D`.
    pub fn paper() -> Self {
        let t = true;
        let f = false;
        StructureMask {
            allowed: [
                [t, t, f, f, f, f],
                [t, t, t, f, f, f],
                [t, f, t, t, t, t],
                [t, f, f, t, t, t],
                [t, f, f, f, f, t],
                [f, f, f, f, f, t],
            ],
        }
    }

    /// Nonzero pattern of `p`.
    pub fn from_matrix<T: Scalar>(p: &StochasticMatrix<T>) -> Result<Self, EstimationError> {
        let mut allowed = [[false; STATE_COUNT]; STATE_COUNT];
        for (dst, &v) in allowed.iter_mut().flatten().zip(p.rows().iter().flatten()) {
            *dst = v != T::zero();
        }
        Self::new(allowed)
    }

    pub fn allows(&self, from: StateId, to: StateId) -> bool {
        self.allowed[from.index()][to.index()]
    }

    pub fn row(&self, from: StateId) -> &[bool; STATE_COUNT] {
        &self.allowed[from.index()]
    }

    /// Entries that are free parameters: allowed entries in rows with more
    /// than one allowed entry.
    pub fn free_entries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.allowed.iter().enumerate() {
            if row.iter().filter(|&&a| a).count() > 1 {
                out.extend(row.iter().enumerate().filter(|(_, &a)| a).map(|(j, _)| (i, j)));
            }
        }
        out
    }
}
