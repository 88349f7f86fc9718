//! Picard iteration `x_{k+1} = S x_k` on a uniform grid.
//!
//! When the problem carries a Lipschitz constant with `LΩ < 1`, the
//! iteration is a contraction and the report carries the usual a-priori and
//! a-posteriori error bounds. Otherwise the iteration runs best-effort and
//! divergence is reported through `converged = false`.

use crate::error::{Error, Result};
use crate::fracops::{Grid, GridFunction};
use crate::operator::SolutionOperator;
use crate::problem::{compute_omega, ProblemSpec};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub grid_n: usize,
    /// Threshold on `‖x_k - x_{k-1}‖∞`.
    pub tol: f64,
    pub max_iter: usize,
    /// Starting iterate; `None` means `x ≡ 0`.
    pub initial_guess: Option<GridFunction>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grid_n: 1025,
            tol: 1e-10,
            max_iter: 200,
            initial_guess: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 3 {
            return Err(Error::GridTooCoarse {
                required: 3,
                actual: self.grid_n,
            });
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        if let Some(guess) = &self.initial_guess {
            if guess.grid().len() != self.grid_n {
                return Err(Error::GridMismatch(format!(
                    "initial guess has {} nodes, grid_n is {}",
                    guess.grid().len(),
                    self.grid_n
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: GridFunction,
    pub iterations: usize,
    /// `‖x_k - x_{k-1}‖∞` at the last iteration.
    pub final_diff: f64,
    /// Successive differences `d_1, d_2, ...`.
    pub diffs: Vec<f64>,
    /// Ratios `d_k / d_{k-1}` for `k ≥ 2`, skipping steps already at
    /// rounding level.
    pub ratios: Vec<f64>,
    /// Largest entry of `ratios`, if any.
    pub observed_ratio: Option<f64>,
    /// `LΩ` when a Lipschitz constant is known and the problem is nondegenerate.
    pub contraction: Option<f64>,
    /// `(LΩ)^k / (1 - LΩ) · d_1`, only when `LΩ < 1`.
    pub apriori_bound: Option<f64>,
    /// `LΩ / (1 - LΩ) · d_k`, only when `LΩ < 1`.
    pub aposteriori_bound: Option<f64>,
    pub converged: bool,
}

impl SolveReport {
    /// Whether Banach's contraction condition backs the iteration.
    pub fn certified(&self) -> bool {
        self.contraction.is_some_and(|c| c < 1.0)
    }
}

/// Runs Picard iteration from the configured starting point.
pub fn solve(spec: &ProblemSpec, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    let grid = Grid::new(config.grid_n)?;
    let op = SolutionOperator::new(spec, grid)?;
    let contraction = match spec.lipschitz() {
        Some(l) => Some(l * compute_omega(spec.params())?),
        None => None,
    };
    let rate = contraction.filter(|&c| c < 1.0);

    let mut x = config
        .initial_guess
        .clone()
        .unwrap_or_else(|| GridFunction::zeros(grid));
    let mut diffs = Vec::new();
    let mut ratios = Vec::new();
    let mut converged = false;

    for _ in 0..config.max_iter {
        let next = op.apply(&x)?;
        let d = next.sup_distance(&x)?;
        if let Some(&prev) = diffs.last() {
            if prev > rounding_floor(&next) {
                ratios.push(d / prev);
            }
        }
        diffs.push(d);
        x = next;
        if d <= config.tol {
            converged = true;
            break;
        }
        if !d.is_finite() {
            break;
        }
    }

    let iterations = diffs.len();
    let final_diff = *diffs.last().expect("max_iter >= 1");
    let observed_ratio = ratios.iter().copied().reduce(f64::max);
    let apriori_bound = rate.map(|c| c.powi(iterations as i32) / (1.0 - c) * diffs[0]);
    let aposteriori_bound = rate.map(|c| c / (1.0 - c) * final_diff);

    Ok(SolveReport {
        solution: x,
        iterations,
        final_diff,
        diffs,
        ratios,
        observed_ratio,
        contraction,
        apriori_bound,
        aposteriori_bound,
        converged,
    })
}

/// Differences below this are dominated by floating-point noise, so ratios
/// formed from them carry no contraction information.
fn rounding_floor(x: &GridFunction) -> f64 {
    1e3 * f64::EPSILON * x.sup_norm().max(1.0)
}

/// Radius `ΩM / (1 - ΩL)` of a ball that the operator maps into itself,
/// with `M = max_i |f(t_i, 0)|` over the nodes of `grid`.
pub fn solution_radius(spec: &ProblemSpec, grid: Grid) -> Result<f64> {
    let l = spec
        .lipschitz()
        .ok_or_else(|| Error::NotApplicable("no Lipschitz constant supplied".into()))?;
    let omega = compute_omega(spec.params())?;
    if l * omega >= 1.0 {
        return Err(Error::NotApplicable(format!(
            "L*Omega = {} is not below 1",
            l * omega
        )));
    }
    let m = grid
        .nodes()
        .map(|t| spec.rhs(t, 0.0).abs())
        .fold(0.0_f64, f64::max);
    Ok(omega * m / (1.0 - omega * l))
}
