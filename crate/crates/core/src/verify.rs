//! A-posteriori residuals of a grid solution against the differential
//! equation and both boundary conditions.

use crate::error::{Error, Result};
use crate::fracops::{caputo_derivative, rl_integral, GridFunction};
use crate::operator::SolutionOperator;
use crate::problem::ProblemSpec;

/// Number of interior points at which the equation residual is sampled.
pub const ODE_SAMPLES: usize = 32;
/// Left end of the equation-residual window; the discrete Caputo derivative
/// loses accuracy next to the origin.
pub const ODE_WINDOW_START: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// `‖x - Sx‖∞`.
    pub fixed_point_residual: f64,
    /// `|x'(ξ) - β ᶜDᵛx(η)|`.
    pub bc1_residual: f64,
    /// `|x(1) - α Iᵖx(η)|`.
    pub bc2_residual: f64,
    /// `max |ᶜDᵠx(t) - f(t, x(t))|` over `t ∈ [0.1, 1]`.
    pub ode_residual: f64,
}

/// Residuals of `x` for `spec`.
///
/// `x'(ξ)` is taken from the integral representation `I^(q-1)h(ξ) - c₁` with
/// `h = f(·, x)`, while `ᶜDᵛx(η)`, `Iᵖx(η)` and `ᶜDᵠx` are computed
/// numerically from the samples of `x`.
pub fn verify_solution(spec: &ProblemSpec, x: &GridFunction) -> Result<ResidualReport> {
    let n = x.grid().len();
    if n < 5 {
        return Err(Error::GridTooCoarse {
            required: 5,
            actual: n,
        });
    }
    let params = spec.params();
    let op = SolutionOperator::new(spec, x.grid())?;
    let h = op.sample_rhs(x)?;

    let image = op.solve_linear(&h)?;
    let fixed_point_residual = image.sup_distance(x)?;

    let derivative_xi = op.solution_derivative(&h, params.xi)?;
    let caputo_eta = caputo_derivative(x, spec.nu(), params.eta)?;
    let bc1_residual = (derivative_xi - params.beta * caputo_eta).abs();

    let x_one = x.values()[n - 1];
    let bc2_residual = (x_one - params.alpha * rl_integral(x, spec.p(), params.eta)?).abs();

    let mut ode_residual = 0.0_f64;
    for k in 0..ODE_SAMPLES {
        let t = ODE_WINDOW_START + (1.0 - ODE_WINDOW_START) * k as f64 / (ODE_SAMPLES - 1) as f64;
        let lhs = caputo_derivative(x, spec.q(), t)?;
        let rhs = spec.rhs(t, x.eval(t)?);
        ode_residual = ode_residual.max((lhs - rhs).abs());
    }

    Ok(ResidualReport {
        fixed_point_residual,
        bc1_residual,
        bc2_residual,
        ode_residual,
    })
}
