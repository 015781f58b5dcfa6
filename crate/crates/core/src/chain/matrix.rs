use serde::{Deserialize, Serialize};

use super::linalg::{self, Square};
use super::ChainError;
use crate::scalar::Scalar;
use crate::state::{StateId, STATE_COUNT};

/// Daily transition probabilities between the six compartments.
///
/// Every entry lies in `[0, 1]` and every row sums to one within
/// [`Scalar::sum_tolerance`]. Construction never renormalizes: the stored
/// entries are exactly the ones supplied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct StochasticMatrix<T> {
    rows: Square<T>,
}

/// Partition of the states into absorbing and transient ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateClasses {
    pub absorbing: Vec<StateId>,
    pub transient: Vec<StateId>,
}

impl<T: Scalar> StochasticMatrix<T> {
    /// Validates `rows` and wraps them. Range errors are reported before
    /// row-sum errors.
    pub fn new(rows: Square<T>) -> Result<Self, ChainError> {
        match Self::violations(&rows).into_iter().next() {
            Some(err) => Err(err),
            None => Ok(StochasticMatrix { rows }),
        }
    }

    /// Every entry outside `[0, 1]`, then every row whose sum is off by more
    /// than the scalar's tolerance.
    pub fn violations(rows: &Square<T>) -> Vec<ChainError> {
        let mut out = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if !(value >= T::zero() && value <= T::one()) {
                    out.push(ChainError::Range {
                        row: StateId::ALL[i],
                        col: StateId::ALL[j],
                        value: value.as_f64(),
                    });
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            let sum: T = row.iter().copied().sum();
            let deviation = (sum - T::one()).abs();
            if !(deviation <= T::sum_tolerance()) {
                out.push(ChainError::RowSum {
                    row: StateId::ALL[i],
                    sum: sum.as_f64(),
                    deviation: deviation.as_f64(),
                    tolerance: T::sum_tolerance().as_f64(),
                });
            }
        }
        out
    }

    pub fn identity() -> Self {
        StochasticMatrix {
            rows: linalg::identity(),
        }
    }

    pub fn get(&self, from: StateId, to: StateId) -> T {
        self.rows[from.index()][to.index()]
    }

    pub fn row(&self, from: StateId) -> &[T; STATE_COUNT] {
        &self.rows[from.index()]
    }

    pub fn rows(&self) -> &Square<T> {
        &self.rows
    }

    /// `P^n` by exponentiation by squaring.
    ///
    /// Row sums of the result are re-checked against the construction
    /// tolerance; drift beyond it is an error rather than being renormalized.
    pub fn power(&self, n: u32) -> Result<Self, ChainError> {
        let rows = linalg::pow(&self.rows, n);
        for (i, row) in rows.iter().enumerate() {
            let deviation = (row.iter().copied().sum::<T>() - T::one()).abs();
            if !(deviation <= T::sum_tolerance()) {
                return Err(ChainError::NumericalDrift {
                    power: n,
                    row: StateId::ALL[i],
                    deviation: deviation.as_f64(),
                });
            }
        }
        Ok(StochasticMatrix { rows })
    }

    /// Probability of being in `to` after `n` days when starting in `from`.
    pub fn n_step_probability(&self, from: StateId, to: StateId, n: u32) -> Result<T, ChainError> {
        Ok(self.power(n)?.get(from, to))
    }

    /// A state is absorbing iff its diagonal entry is exactly one.
    pub fn classify_states(&self) -> StateClasses {
        let (absorbing, transient) = StateId::ALL.iter().partition(|s| self.get(**s, **s) == T::one());
        StateClasses { absorbing, transient }
    }

    /// Largest absolute entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// Converts to another scalar type, re-validating in the target precision.
    pub fn cast<U: Scalar>(&self) -> Result<StochasticMatrix<U>, ChainError> {
        let mut rows = [[U::zero(); STATE_COUNT]; STATE_COUNT];
        for (dst, src) in rows.iter_mut().flatten().zip(self.rows.iter().flatten()) {
            *dst = U::from(*src).unwrap_or_else(U::nan);
        }
        StochasticMatrix::new(rows)
    }
}
