//! Seeded Monte Carlo trajectories of the chain, used as an independent
//! check on the analytic matrix powers.
//!
//! # Reproducibility
//!
//! Each trajectory owns a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. In a cohort, trajectory `k` uses
//! [`trajectory_seed`]`(base_seed, k)`, the `k`-th output of a SplitMix64
//! sequence started at `base_seed`:
//!
//! ```text
//! z = base_seed + (k + 1) * 0x9E3779B97F4A7C15      (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! seed_k = z ^ (z >> 31)
//! ```
//!
//! A uniform draw is `(next_u64() >> 11) * 2^-53` in `[0, 1)`; the next state
//! is the first state, scanning `S E H U I D`, whose cumulative row
//! probability exceeds the draw. Cohort counts are summed as integers, so the
//! result does not depend on how trajectories are spread across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainError, Distribution, StochasticMatrix};
use crate::scalar::Scalar;
use crate::state::{StateId, STATE_COUNT};

/// States visited on days `0..=horizon`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<StateId>,
}

/// Per-day state occupancy of a simulated cohort.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohortResult {
    pub horizon: u32,
    pub start: StateId,
    pub n_trajectories: u64,
    pub base_seed: u64,
    /// `occupancy[day][state]`, for days `0..=horizon`.
    pub occupancy: Vec<[u64; STATE_COUNT]>,
}

impl CohortResult {
    pub fn frequency(&self, day: u32, state: StateId) -> f64 {
        self.occupancy[day as usize][state.index()] as f64 / self.n_trajectories as f64
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulationError {
    #[error("a cohort needs at least one trajectory")]
    EmptyCohort,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// SplitMix64 mix of `base_seed` and a trajectory index.
pub fn trajectory_seed(base_seed: u64, index: u64) -> u64 {
    let mut z = base_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn next_state<T: Scalar>(p: &StochasticMatrix<T>, current: StateId, u: f64) -> StateId {
    let u = T::lit(u);
    let row = p.row(current);
    let mut cumulative = T::zero();
    let mut last_positive = current;
    for (j, &prob) in row.iter().enumerate() {
        if prob > T::zero() {
            last_positive = StateId::ALL[j];
        }
        cumulative = cumulative + prob;
        if u < cumulative {
            return StateId::ALL[j];
        }
    }
    // row summed to slightly below the draw
    last_positive
}

struct Walker<'a, T> {
    p: &'a StochasticMatrix<T>,
    rng: ChaCha8Rng,
    current: StateId,
}

impl<'a, T: Scalar> Walker<'a, T> {
    fn new(p: &'a StochasticMatrix<T>, start: StateId, seed: u64) -> Self {
        Walker {
            p,
            rng: ChaCha8Rng::seed_from_u64(seed),
            current: start,
        }
    }

    fn step(&mut self) -> StateId {
        let u = uniform(&mut self.rng);
        self.current = next_state(self.p, self.current, u);
        self.current
    }
}

pub fn simulate_trajectory<T: Scalar>(p: &StochasticMatrix<T>, start: StateId, horizon: u32, seed: u64) -> Trajectory {
    let mut walker = Walker::new(p, start, seed);
    let mut states = Vec::with_capacity(horizon as usize + 1);
    states.push(start);
    states.extend((0..horizon).map(|_| walker.step()));
    Trajectory { states }
}

/// Runs `n` independent trajectories, trajectory `k` seeded with
/// [`trajectory_seed`]`(base_seed, k)`.
pub fn simulate_cohort<T: Scalar>(
    p: &StochasticMatrix<T>,
    start: StateId,
    horizon: u32,
    n: u64,
    base_seed: u64,
) -> Result<CohortResult, SimulationError> {
    if n == 0 {
        return Err(SimulationError::EmptyCohort);
    }
    let days = horizon as usize + 1;
    let occupancy = (0..n)
        .into_par_iter()
        .fold(
            || vec![[0u64; STATE_COUNT]; days],
            |mut counts, k| {
                let mut walker = Walker::new(p, start, trajectory_seed(base_seed, k));
                counts[0][start.index()] += 1;
                for day in counts.iter_mut().skip(1) {
                    day[walker.step().index()] += 1;
                }
                counts
            },
        )
        .reduce(
            || vec![[0u64; STATE_COUNT]; days],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    for (xi, yi) in x.iter_mut().zip(y) {
                        *xi += yi;
                    }
                }
                a
            },
        );
    Ok(CohortResult {
        horizon,
        start,
        n_trajectories: n,
        base_seed,
        occupancy,
    })
}

/// Standardized deviation of an empirical frequency from the analytic one,
/// or a note that the analytic value was too small to standardize against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub enum ZScore<T> {
    Value { analytic: T, empirical: f64, z: f64 },
    Skipped { analytic: T, empirical: f64 },
}

impl<T> ZScore<T> {
    pub fn z(&self) -> Option<f64> {
        match self {
            ZScore::Value { z, .. } => Some(*z),
            ZScore::Skipped { .. } => None,
        }
    }
}

/// `z[day][state]` for days `0..=horizon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ZScoreTable<T> {
    pub n_trajectories: u64,
    pub scores: Vec<[ZScore<T>; STATE_COUNT]>,
}

impl<T: Scalar> ZScoreTable<T> {
    pub fn get(&self, day: u32, state: StateId) -> ZScore<T> {
        self.scores[day as usize][state.index()]
    }

    /// Largest `|z|` over all standardized entries.
    pub fn max_abs_z(&self) -> f64 {
        self.scores
            .iter()
            .flatten()
            .filter_map(ZScore::z)
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

/// Analytic values below this are skipped.
pub const MIN_ANALYTIC: f64 = 1e-12;

/// `z = (freq - analytic) / sqrt(analytic (1 - analytic) / n)` with the
/// analytic value from evolving the start state's point mass.
///
/// An analytic value of exactly one has zero variance; it scores 0 when the
/// empirical frequency is also one and ±infinity otherwise.
pub fn compare_empirical_analytic<T: Scalar>(
    result: &CohortResult,
    p: &StochasticMatrix<T>,
) -> Result<ZScoreTable<T>, ChainError> {
    let n = result.n_trajectories as f64;
    let mut dist = Distribution::<T>::point_mass(result.start);
    let mut scores = Vec::with_capacity(result.occupancy.len());
    for day in 0..=result.horizon {
        if day > 0 {
            dist = dist.evolve(p, 1)?;
        }
        let row = StateId::ALL.map(|s| {
            let analytic = dist.get(s);
            let a = analytic.as_f64();
            let empirical = result.frequency(day, s);
            if a < MIN_ANALYTIC {
                return ZScore::Skipped { analytic, empirical };
            }
            let variance = a * (1.0 - a) / n;
            let diff = empirical - a;
            let z = if variance > 0.0 {
                diff / variance.sqrt()
            } else if diff == 0.0 {
                0.0
            } else {
                diff.signum() * f64::INFINITY
            };
            ZScore::Value { analytic, empirical, z }
        });
        scores.push(row);
    }
    Ok(ZScoreTable {
        n_trajectories: result.n_trajectories,
        scores,
    })
}
