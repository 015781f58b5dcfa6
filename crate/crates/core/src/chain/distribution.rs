use serde::{Deserialize, Serialize};

use super::linalg;
use super::{ChainError, StochasticMatrix};
use crate::scalar::Scalar;
use crate::state::{StateId, STATE_COUNT};

/// Probability mass over the six states (an initial or evolved distribution).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Distribution<T> {
    mass: [T; STATE_COUNT],
}

impl<T: Scalar> Distribution<T> {
    pub fn new(mass: [T; STATE_COUNT]) -> Result<Self, ChainError> {
        for (i, &m) in mass.iter().enumerate() {
            if !(m >= T::zero() && m <= T::one()) {
                return Err(ChainError::DistributionRange {
                    state: StateId::ALL[i],
                    value: m.as_f64(),
                });
            }
        }
        let sum: T = mass.iter().copied().sum();
        if (sum - T::one()).abs() > T::sum_tolerance() {
            return Err(ChainError::DistributionSum { sum: sum.as_f64() });
        }
        Ok(Distribution { mass })
    }

    pub fn point_mass(state: StateId) -> Self {
        let mut mass = [T::zero(); STATE_COUNT];
        mass[state.index()] = T::one();
        Distribution { mass }
    }

    pub fn mass(&self) -> &[T; STATE_COUNT] {
        &self.mass
    }

    pub fn get(&self, state: StateId) -> T {
        self.mass[state.index()]
    }

    /// `mu · P^n`.
    pub fn evolve(&self, p: &StochasticMatrix<T>, n: u32) -> Result<Self, ChainError> {
        let pn = p.power(n)?;
        Ok(Distribution {
            mass: linalg::vec_mul(&self.mass, pn.rows()),
        })
    }
}
