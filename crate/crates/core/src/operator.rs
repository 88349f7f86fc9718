//! Closed-form integral solution of the linear problem
//! `ᶜDᵠx = h` with the nonlocal boundary conditions, and the nonlinear
//! fixed-point operator obtained by substituting `h = f(·, x(·))`.
//!
//! The solution is `x(t) = Iᵠh(t) - c₀ - c₁t`. The iterated integral in
//! `c₀`,
//!
//! ```text
//!   ∫₀^η ∫₀^s (η-s)^(p-1) (s-τ)^(q-1) h(τ) dτ ds = B(p,q) ∫₀^η (η-τ)^(p+q-1) h(τ) dτ,
//! ```
//!
//! is evaluated through the single weakly singular integral on the right.

use crate::error::{Error, Result};
use crate::fracops::{singular_weighted_integral, Grid, GridFunction, NodalIntegrator};
use crate::problem::{check_deltas, compute_deltas, Deltas, ProblemSpec};
use crate::special::{beta, gamma_unchecked};

/// The integration constants of the linear problem for a given `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConstants {
    pub c0: f64,
    pub c1: f64,
}

/// The four boundary functionals of `h` that the solution depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Functionals {
    /// `I^(q-1) h(ξ)`, zero when `ξ = 0`.
    at_xi: f64,
    /// `I^(q-ν) h(η)`.
    at_eta: f64,
    /// `Iᵠ h(1)`.
    at_one: f64,
    /// `(αp / (Γ(q) Δ1)) · ∫₀^η∫₀^s (η-s)^(p-1)(s-τ)^(q-1) h(τ) dτ ds`.
    iterated: f64,
}

/// Solution operator for a fixed problem and grid.
#[derive(Clone)]
pub struct SolutionOperator {
    spec: ProblemSpec,
    grid: Grid,
    deltas: Deltas,
    integrator: NodalIntegrator,
    gamma_q: f64,
    gamma_q_minus_1: f64,
    gamma_q_minus_nu: f64,
    gamma_two_minus_nu: f64,
    gamma_p_plus_1: f64,
    beta_pq: f64,
}

impl std::fmt::Debug for SolutionOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolutionOperator")
            .field("spec", &self.spec)
            .field("grid", &self.grid)
            .field("deltas", &self.deltas)
            .finish_non_exhaustive()
    }
}

impl SolutionOperator {
    pub fn new(spec: &ProblemSpec, grid: Grid) -> Result<Self> {
        let params = spec.params();
        let deltas = compute_deltas(params);
        check_deltas(&deltas)?;
        if !params.is_nondegenerate() {
            return Err(Error::Degenerate(
                "alpha or beta is too close to its critical value".into(),
            ));
        }
        if grid.len() < 3 {
            return Err(Error::GridTooCoarse {
                required: 3,
                actual: grid.len(),
            });
        }
        let (q, nu, p) = (params.q, params.nu, params.p);
        Ok(SolutionOperator {
            spec: spec.clone(),
            grid,
            deltas,
            integrator: NodalIntegrator::new(grid, q - 1.0)?,
            gamma_q: gamma_unchecked(q),
            gamma_q_minus_1: gamma_unchecked(q - 1.0),
            gamma_q_minus_nu: gamma_unchecked(q - nu),
            gamma_two_minus_nu: gamma_unchecked(2.0 - nu),
            gamma_p_plus_1: gamma_unchecked(p + 1.0),
            beta_pq: beta(p, q)?,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn deltas(&self) -> Deltas {
        self.deltas
    }

    fn check_grid(&self, h: &GridFunction) -> Result<()> {
        if h.grid() != self.grid {
            return Err(Error::GridMismatch(format!(
                "operator built for {} nodes, got {}",
                self.grid.len(),
                h.grid().len()
            )));
        }
        Ok(())
    }

    /// `∫₀^η∫₀^s (η-s)^(p-1)(s-τ)^(q-1) h(τ) dτ ds`, via the Beta reduction.
    pub fn iterated_kernel_integral(&self, h: &GridFunction) -> Result<f64> {
        self.check_grid(h)?;
        let params = self.spec.params();
        let single = singular_weighted_integral(h, params.p + params.q - 1.0, params.eta)?;
        Ok(self.beta_pq * single)
    }

    fn functionals(&self, h: &GridFunction, at_one: Option<f64>) -> Result<Functionals> {
        self.check_grid(h)?;
        let params = self.spec.params();
        let (q, nu, p) = (params.q, params.nu, params.p);
        let at_xi = if params.xi > 0.0 {
            singular_weighted_integral(h, q - 2.0, params.xi)? / self.gamma_q_minus_1
        } else {
            0.0
        };
        let at_eta =
            singular_weighted_integral(h, q - nu - 1.0, params.eta)? / self.gamma_q_minus_nu;
        let at_one = match at_one {
            Some(v) => v,
            None => singular_weighted_integral(h, q - 1.0, 1.0)? / self.gamma_q,
        };
        let iterated = params.alpha * p / (self.gamma_q * self.deltas.delta1)
            * self.iterated_kernel_integral(h)?;
        Ok(Functionals {
            at_xi,
            at_eta,
            at_one,
            iterated,
        })
    }

    fn constants_from(&self, f: &Functionals) -> OperatorConstants {
        let params = self.spec.params();
        let Deltas {
            delta1,
            delta2,
            delta3,
        } = self.deltas;
        let c1 = self.gamma_two_minus_nu / delta3 * (params.beta * f.at_eta - f.at_xi);
        let c0 = self.gamma_p_plus_1 / delta1 * f.at_one - f.iterated
            + delta2 / ((params.p + 1.0) * delta1) * c1;
        OperatorConstants { c0, c1 }
    }

    pub fn compute_c1(&self, h: &GridFunction) -> Result<f64> {
        Ok(self.constants(h)?.c1)
    }

    pub fn compute_c0(&self, h: &GridFunction) -> Result<f64> {
        Ok(self.constants(h)?.c0)
    }

    pub fn constants(&self, h: &GridFunction) -> Result<OperatorConstants> {
        let f = self.functionals(h, None)?;
        Ok(self.constants_from(&f))
    }

    /// `x(t) = Iᵠh(t) - c₀ - c₁t`.
    pub fn evaluate_solution(&self, h: &GridFunction, t: f64) -> Result<f64> {
        let OperatorConstants { c0, c1 } = self.constants(h)?;
        let q = self.spec.params().q;
        Ok(singular_weighted_integral(h, q - 1.0, t)? / self.gamma_q - c0 - c1 * t)
    }

    /// The same solution written as the expanded five-term sum, kept as an
    /// independent evaluation path.
    pub fn evaluate_five_term(&self, h: &GridFunction, t: f64) -> Result<f64> {
        let f = self.functionals(h, None)?;
        let params = self.spec.params();
        let Deltas {
            delta1,
            delta2,
            delta3,
        } = self.deltas;
        let q = params.q;
        let p1 = params.p + 1.0;
        let slope = self.gamma_two_minus_nu * (p1 * delta1 * t + delta2) / (p1 * delta1 * delta3);
        let local = singular_weighted_integral(h, q - 1.0, t)? / self.gamma_q;
        Ok(
            local - self.gamma_p_plus_1 / delta1 * f.at_one + slope * f.at_xi
                - params.beta * slope * f.at_eta
                + f.iterated,
        )
    }

    /// `x'(t) = I^(q-1)h(t) - c₁`.
    pub fn solution_derivative(&self, h: &GridFunction, t: f64) -> Result<f64> {
        let c1 = self.compute_c1(h)?;
        let q = self.spec.params().q;
        Ok(singular_weighted_integral(h, q - 2.0, t)? / self.gamma_q_minus_1 - c1)
    }

    /// `ᶜDᵛx(t) = I^(q-ν)h(t) - c₁ t^(1-ν)/Γ(2-ν)` for the solution built from `h`.
    pub fn solution_caputo_nu(&self, h: &GridFunction, t: f64) -> Result<f64> {
        let c1 = self.compute_c1(h)?;
        let params = self.spec.params();
        Ok(
            singular_weighted_integral(h, params.q - params.nu - 1.0, t)? / self.gamma_q_minus_nu
                - c1 * t.powf(1.0 - params.nu) / self.gamma_two_minus_nu,
        )
    }

    /// The linear solution at every node.
    pub fn solve_linear(&self, h: &GridFunction) -> Result<GridFunction> {
        self.check_grid(h)?;
        let local = self.integrator.apply(h);
        let at_one = local.values()[self.grid.len() - 1] / self.gamma_q;
        let f = self.functionals(h, Some(at_one))?;
        let OperatorConstants { c0, c1 } = self.constants_from(&f);
        let values = local
            .values()
            .iter()
            .zip(self.grid.nodes())
            .map(|(v, t)| v / self.gamma_q - c0 - c1 * t)
            .collect();
        GridFunction::new(self.grid, values)
    }

    /// `h_i = f(t_i, x_i)`.
    pub fn sample_rhs(&self, x: &GridFunction) -> Result<GridFunction> {
        self.check_grid(x)?;
        let mut values = Vec::with_capacity(self.grid.len());
        for (i, (&xi, t)) in x.values().iter().zip(self.grid.nodes()).enumerate() {
            let v = self.spec.rhs(t, xi);
            if !v.is_finite() {
                return Err(Error::NonFiniteRhs { index: i, t, x: xi });
            }
            values.push(v);
        }
        GridFunction::new(self.grid, values)
    }

    /// The fixed-point operator: `x ↦ solution of the linear problem with h = f(·, x)`.
    pub fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        let h = self.sample_rhs(x)?;
        self.solve_linear(&h)
    }
}

/// `c₁` for the problem and the grid of `h`.
pub fn compute_c1(spec: &ProblemSpec, h: &GridFunction) -> Result<f64> {
    SolutionOperator::new(spec, h.grid())?.compute_c1(h)
}

/// `c₀` for the problem and the grid of `h`.
pub fn compute_c0(spec: &ProblemSpec, h: &GridFunction) -> Result<f64> {
    SolutionOperator::new(spec, h.grid())?.compute_c0(h)
}

pub fn evaluate_solution(spec: &ProblemSpec, h: &GridFunction, t: f64) -> Result<f64> {
    SolutionOperator::new(spec, h.grid())?.evaluate_solution(h, t)
}

/// One application of the fixed-point operator on `x`'s grid.
pub fn apply_s(spec: &ProblemSpec, x: &GridFunction) -> Result<GridFunction> {
    SolutionOperator::new(spec, x.grid())?.apply(x)
}
