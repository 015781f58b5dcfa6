use serde::{Deserialize, Serialize};

use super::linalg;
use super::{ChainError, StochasticMatrix};
use crate::scalar::Scalar;
use crate::state::StateId;

/// Fundamental-matrix quantities of an absorbing chain.
///
/// Rows and columns of `fundamental` follow `transient_states`; columns of
/// `absorption_probs` follow `absorbing_states`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct AbsorptionReport<T> {
    pub transient_states: Vec<StateId>,
    pub absorbing_states: Vec<StateId>,
    /// `N = (I - Q)^-1`: expected visits to each transient state before absorption.
    pub fundamental: Vec<Vec<T>>,
    /// `B = N R`: probability of ending in each absorbing state.
    pub absorption_probs: Vec<Vec<T>>,
    /// `t = N 1`: expected days until absorption.
    pub expected_steps: Vec<T>,
}

impl<T: Scalar> AbsorptionReport<T> {
    pub fn expected_steps_from(&self, state: StateId) -> Option<T> {
        let i = self.transient_states.iter().position(|&s| s == state)?;
        Some(self.expected_steps[i])
    }

    pub fn absorption_probability(&self, from: StateId, into: StateId) -> Option<T> {
        let i = self.transient_states.iter().position(|&s| s == from)?;
        let j = self.absorbing_states.iter().position(|&s| s == into)?;
        Some(self.absorption_probs[i][j])
    }
}

impl<T: Scalar> StochasticMatrix<T> {
    /// Fundamental matrix, absorption probabilities and expected absorption
    /// times over the transient block.
    ///
    /// A chain whose states are all absorbing yields a report with empty
    /// transient sections.
    pub fn absorbing_analysis(&self) -> Result<AbsorptionReport<T>, ChainError> {
        let classes = self.classify_states();
        if classes.absorbing.is_empty() {
            return Err(ChainError::NoAbsorbingState);
        }
        let transient = classes.transient;
        let absorbing = classes.absorbing;

        let i_minus_q: Vec<Vec<T>> = transient
            .iter()
            .map(|&a| {
                transient
                    .iter()
                    .map(|&b| {
                        let delta = if a == b { T::one() } else { T::zero() };
                        delta - self.get(a, b)
                    })
                    .collect()
            })
            .collect();

        let fundamental = if transient.is_empty() {
            Vec::new()
        } else {
            let inv = linalg::invert(&i_minus_q).ok_or(ChainError::Singular {
                condition: f64::INFINITY,
            })?;
            let condition = linalg::norm_one(&i_minus_q) * linalg::norm_one(&inv);
            if !(condition <= T::max_condition()) {
                return Err(ChainError::Singular {
                    condition: condition.as_f64(),
                });
            }
            inv
        };

        let absorption_probs = fundamental
            .iter()
            .map(|n_row| {
                absorbing
                    .iter()
                    .map(|&b| n_row.iter().zip(&transient).map(|(&n, &k)| n * self.get(k, b)).sum())
                    .collect()
            })
            .collect();
        let expected_steps = fundamental.iter().map(|row| row.iter().copied().sum()).collect();

        Ok(AbsorptionReport {
            transient_states: transient,
            absorbing_states: absorbing,
            fundamental,
            absorption_probs,
            expected_steps,
        })
    }
}
