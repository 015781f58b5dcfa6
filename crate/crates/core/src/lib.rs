//! Discrete-time Markov chain model of COVID-19 progression in Mexico City.
//!
//! The chain has six compartments, `S E H U I D` (susceptible, infected,
//! hospitalized, intensive care, intubated, dead), stepped once per day.
//! This crate provides:
//!
//! * [`chain`]: validated stochastic matrices, n-step powers, distribution
//!   evolution and absorbing-chain analysis;
//! * [`estimation`]: frequency estimates from the published count tables,
//!   Venn-region consistency checks, and recovery of a one-step matrix from a
//!   multi-horizon probability table;
//! * [`simulate`]: a seeded Monte Carlo oracle for the analytic results;
//! * [`io`]: CSV/JSON ingestion of the bundled tables and report emission.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! tables, the fit and the command-line tool use.

pub mod chain;
pub mod estimation;
pub mod findings;
pub mod fixtures;
pub mod io;
pub mod scalar;
pub mod simulate;
pub mod state;

pub use chain::ChainError;
pub use estimation::EstimationError;
pub use findings::Finding;
pub use scalar::Scalar;
pub use state::{StateId, STATE_COUNT};

/// Row-stochastic 6×6 matrix over `f64`.
pub type StochasticMatrix = chain::StochasticMatrix<f64>;
/// Probability vector over the six states, `f64`.
pub type Distribution = chain::Distribution<f64>;
/// Absorbing-chain quantities, `f64`.
pub type AbsorptionReport = chain::AbsorptionReport<f64>;
/// Monte Carlo comparison table, `f64`.
pub type ZScoreTable = simulate::ZScoreTable<f64>;
