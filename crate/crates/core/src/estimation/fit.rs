use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{project_to_simplex, EstimationError, HorizonTable, StructureMask, TABLE_TRANSITIONS};
use crate::chain::linalg::{self, Square};
use crate::chain::StochasticMatrix;
use crate::simulate::trajectory_seed;
use crate::state::{StateId, STATE_COUNT};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Central finite-difference step for the Jacobian.
    pub fd_step: f64,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
    /// Stop once an accepted step improves the residual by less than this
    /// fraction of its current value.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Levenberg damping of the first iteration, relative to the largest
    /// diagonal entry of the Gauss-Newton matrix.
    pub initial_damping: f64,
    /// A run is abandoned as stalled when this many accepted steps fail to
    /// halve its residual.
    pub stall_window: usize,
    /// Extra starting points tried while the best residual is above
    /// `restart_above`.
    pub restarts: usize,
    pub restart_above: f64,
    /// Seed of the random starting points.
    pub seed: u64,
    /// Evaluate Jacobian columns on the rayon pool. Results are identical
    /// either way.
    pub parallel: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            fd_step: 1e-7,
            armijo: 1e-4,
            tolerance: 1e-12,
            max_iterations: 10_000,
            initial_damping: 1e-3,
            stall_window: 200,
            restarts: 64,
            restart_above: 1e-10,
            seed: 0,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub matrix: StochasticMatrix<f64>,
    /// Sum of squared differences between the fitted n-step probabilities and the table.
    pub residual: f64,
    /// Iterations of the run that produced `matrix`.
    pub iterations: usize,
    /// Index of the winning starting point; 0 is the row-uniform matrix.
    pub start: usize,
    /// Number of starting points tried.
    pub starts: usize,
    /// `false` when the winning run exhausted its iteration budget or stalled.
    pub converged: bool,
    /// Residual of the winning run after initialization and after every accepted step.
    pub history: Vec<f64>,
}

const MIN_STEP: f64 = 1e-30;
const MAX_DAMPING: f64 = 1e20;
const ACTIVE_EPS: f64 = 1e-6;

/// Sum over horizons and table columns of `(P^n(a, b) - table(n, a, b))^2`.
pub fn horizon_residual(p: &StochasticMatrix<f64>, table: &HorizonTable) -> f64 {
    residual(p.rows(), table)
}

fn residuals(p: &Square<f64>, table: &HorizonTable) -> Vec<f64> {
    let mut power = linalg::identity::<f64>();
    let mut reached = 0u32;
    let mut out = Vec::with_capacity(table.len() * TABLE_TRANSITIONS.len());
    for (n, row) in table.rows() {
        power = linalg::mul(&power, &linalg::pow(p, n - reached));
        reached = n;
        for (t, &target) in TABLE_TRANSITIONS.iter().zip(row) {
            out.push(power[t.from.index()][t.to.index()] - target);
        }
    }
    out
}

fn residual(p: &Square<f64>, table: &HorizonTable) -> f64 {
    residuals(p, table).iter().map(|d| d * d).sum()
}

fn project(p: &Square<f64>, mask: &StructureMask) -> Result<Square<f64>, EstimationError> {
    let mut out = [[0.0; STATE_COUNT]; STATE_COUNT];
    for (i, row) in p.iter().enumerate() {
        let projected = project_to_simplex(row, mask.row(StateId::ALL[i]))?;
        out[i].copy_from_slice(&projected);
    }
    Ok(out)
}

/// Coordinates of the row-sum-preserving tangent space: moving mass from the
/// row's largest allowed entry (`slack`) to another allowed entry.
#[derive(Clone, Copy, Debug)]
struct Coordinate {
    row: usize,
    col: usize,
    slack: usize,
}

fn coordinates(p: &Square<f64>, mask: &StructureMask) -> Vec<Coordinate> {
    let mut out = Vec::new();
    for (i, row) in p.iter().enumerate() {
        let allowed = mask.row(StateId::ALL[i]);
        let mut slack = None;
        for j in 0..STATE_COUNT {
            if allowed[j] && slack.is_none_or(|s: usize| row[j] > row[s]) {
                slack = Some(j);
            }
        }
        let Some(slack) = slack else { continue };
        for j in 0..STATE_COUNT {
            if allowed[j] && j != slack {
                out.push(Coordinate { row: i, col: j, slack });
            }
        }
    }
    out
}

fn displaced(p: &Square<f64>, c: Coordinate, amount: f64) -> Square<f64> {
    let mut q = *p;
    q[c.row][c.col] += amount;
    q[c.row][c.slack] -= amount;
    q
}

/// Central finite-difference Jacobian of the residual vector, one column per coordinate.
fn jacobian(p: &Square<f64>, table: &HorizonTable, coords: &[Coordinate], config: &FitConfig) -> Vec<Vec<f64>> {
    let h = config.fd_step;
    let column = |&c: &Coordinate| {
        let plus = residuals(&displaced(p, c, h), table);
        let minus = residuals(&displaced(p, c, -h), table);
        plus.iter()
            .zip(&minus)
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect::<Vec<f64>>()
    };
    if config.parallel {
        coords.par_iter().map(column).collect()
    } else {
        coords.iter().map(column).collect()
    }
}

/// Solves the symmetric positive definite system `a x = b` by Cholesky.
fn cholesky_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    for j in 0..m {
        let mut d = a[j][j];
        for k in 0..j {
            d -= a[j][k] * a[j][k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        a[j][j] = d;
        for i in j + 1..m {
            let mut v = a[i][j];
            for k in 0..j {
                v -= a[i][k] * a[j][k];
            }
            a[i][j] = v / d;
        }
    }
    for i in 0..m {
        for k in 0..i {
            b[i] -= a[i][k] * b[k];
        }
        b[i] /= a[i][i];
    }
    for i in (0..m).rev() {
        for k in i + 1..m {
            b[i] -= a[k][i] * b[k];
        }
        b[i] /= a[i][i];
    }
    Some(b)
}

/// Recovers a one-step matrix whose n-step probabilities best match `table`.
///
/// Starts from the row-uniform matrix over `mask`. Each iteration builds a
/// finite-difference Jacobian of the residual vector in the row-sum-preserving
/// coordinates, takes a damped Gauss-Newton step, and halves it until its
/// projection onto the masked simplex satisfies the Armijo condition. Entries
/// at zero that the gradient pushes outward are left out of the step. When no
/// step length is accepted the damping grows, which turns the step into a
/// short projected gradient step. The objective is not convex; while the best
/// residual stays above `restart_above`, further runs start from seeded random
/// matrices and the lowest residual wins. Running out of iterations is not an
/// error; the result carries the residual reached.
pub fn fit_matrix_from_horizons(
    table: &HorizonTable,
    mask: &StructureMask,
    config: &FitConfig,
) -> Result<FitResult, EstimationError> {
    if table.is_empty() {
        return Err(EstimationError::Horizon("table has no rows".into()));
    }

    let mut uniform = [[0.0; STATE_COUNT]; STATE_COUNT];
    for (i, row) in uniform.iter_mut().enumerate() {
        let allowed = mask.row(StateId::ALL[i]);
        let share = 1.0 / allowed.iter().filter(|&&a| a).count() as f64;
        for (dst, &a) in row.iter_mut().zip(allowed) {
            *dst = if a { share } else { 0.0 };
        }
    }

    let mut best = run(uniform, table, mask, config)?;
    let mut start = 0;
    let mut starts = 1;
    for k in 1..=config.restarts {
        if best.residual <= config.restart_above {
            break;
        }
        starts += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(trajectory_seed(config.seed, k as u64));
        let mut p = [[0.0; STATE_COUNT]; STATE_COUNT];
        for (i, row) in p.iter_mut().enumerate() {
            let allowed = mask.row(StateId::ALL[i]);
            for (dst, &a) in row.iter_mut().zip(allowed) {
                if a {
                    // exponential weights make the row uniform on the simplex
                    let u = 1.0 - (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                    *dst = -u.ln();
                }
            }
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= total);
        }
        let candidate = run(p, table, mask, config)?;
        if candidate.residual < best.residual {
            best = candidate;
            start = k;
        }
    }
    best.start = start;
    best.starts = starts;
    Ok(best)
}

fn run(
    mut p: Square<f64>,
    table: &HorizonTable,
    mask: &StructureMask,
    config: &FitConfig,
) -> Result<FitResult, EstimationError> {
    let mut r = residuals(&p, table);
    let mut value: f64 = r.iter().map(|d| d * d).sum();
    let mut history = vec![value];
    let mut damping = config.initial_damping;
    let mut iterations = 0;
    let mut converged = mask.free_entries().is_empty() || value == 0.0;

    while !converged && iterations < config.max_iterations {
        iterations += 1;
        let coords = coordinates(&p, mask);
        let jac = jacobian(&p, table, &coords, config);
        let m = coords.len();

        // normal equations J'J and gradient J'r of half the squared residual
        let mut normal = vec![vec![0.0; m]; m];
        let mut grad = vec![0.0; m];
        for a in 0..m {
            grad[a] = jac[a].iter().zip(&r).map(|(x, y)| x * y).sum();
            for b in 0..=a {
                let v: f64 = jac[a].iter().zip(&jac[b]).map(|(x, y)| x * y).sum();
                normal[a][b] = v;
                normal[b][a] = v;
            }
        }
        let scale = (0..m).map(|a| normal[a][a]).fold(0.0, f64::max).max(f64::MIN_POSITIVE);

        // entries within `eps` of zero that the gradient pushes further down are held fixed
        let mut gradient_step = p;
        for (&c, &g) in coords.iter().zip(&grad) {
            gradient_step = displaced(&gradient_step, c, -g);
        }
        let moved = project(&gradient_step, mask)?;
        let eps = coords
            .iter()
            .map(|c| (moved[c.row][c.col] - p[c.row][c.col]).powi(2))
            .sum::<f64>()
            .sqrt()
            .min(ACTIVE_EPS);
        let free: Vec<usize> = (0..m)
            .filter(|&a| !(p[coords[a].row][coords[a].col] <= eps && grad[a] > 0.0))
            .collect();

        let mut accepted = None;
        while damping <= MAX_DAMPING {
            let mut system: Vec<Vec<f64>> = free
                .iter()
                .map(|&a| free.iter().map(|&b| normal[a][b]).collect())
                .collect();
            for (a, row) in system.iter_mut().enumerate() {
                row[a] += damping * scale;
            }
            let rhs: Vec<f64> = free.iter().map(|&a| -grad[a]).collect();
            let Some(reduced) = cholesky_solve(system, rhs) else {
                damping *= 10.0;
                continue;
            };
            let mut step = vec![0.0; m];
            for (&a, &v) in free.iter().zip(&reduced) {
                step[a] = v;
            }
            let mut lambda = 1.0;
            while lambda >= MIN_STEP {
                let mut trial = p;
                for (&c, &s) in coords.iter().zip(&step) {
                    trial = displaced(&trial, c, lambda * s);
                }
                let candidate = project(&trial, mask)?;
                // directional derivative of the squared residual towards the projected point
                let slope: f64 = coords
                    .iter()
                    .zip(&grad)
                    .map(|(c, g)| 2.0 * g * (candidate[c.row][c.col] - p[c.row][c.col]))
                    .sum();
                if slope >= 0.0 {
                    break;
                }
                let candidate_r = residuals(&candidate, table);
                let candidate_value: f64 = candidate_r.iter().map(|d| d * d).sum();
                if candidate_value <= value + config.armijo * slope {
                    accepted = Some((candidate, candidate_r, candidate_value, lambda));
                    break;
                }
                lambda *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
            damping *= 10.0;
        }

        match accepted {
            Some((candidate, candidate_r, candidate_value, lambda)) => {
                let improvement = value - candidate_value;
                if lambda == 1.0 {
                    damping = (damping * 0.1).max(config.initial_damping * 1e-12);
                }
                p = candidate;
                r = candidate_r;
                value = candidate_value;
                history.push(value);
                if value == 0.0 || improvement < config.tolerance * (value + improvement) {
                    converged = true;
                } else if history.len() > config.stall_window
                    && value > 0.5 * history[history.len() - 1 - config.stall_window]
                {
                    break;
                }
            }
            // no damping or step length yields sufficient decrease: stationary to working precision
            None => converged = true,
        }
    }

    Ok(FitResult {
        matrix: StochasticMatrix::new(p)?,
        residual: value,
        iterations,
        start: 0,
        starts: 1,
        converged,
        history,
    })
}
