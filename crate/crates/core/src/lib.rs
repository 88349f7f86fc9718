//! Numerical solution and existence certificates for the nonlocal fractional
//! boundary value problem
//!
//! ```text
//!   ᶜDᵠ x(t) = f(t, x(t)),  t ∈ [0, 1],  1 < q ≤ 2,
//!   x'(ξ) = β · ᶜDᵛ x(η),   x(1) = α · Iᵖ x(η),
//! ```
//!
//! with `0 < ν ≤ 1`, `p > 0` and `0 ≤ ξ < η < 1`.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: Gamma/Beta and closed-form fractional operators on monomials.
//! - [`fracops`]: uniform grids and product-integration quadrature for
//!   Riemann–Liouville integrals and Caputo derivatives.
//! - [`problem`]: problem definition, the `Δ` and `Ω` constants and the
//!   existence certificates.
//! - [`operator`]: the closed-form solution of the linear problem and the
//!   nonlinear fixed-point operator built from it.
//! - [`solver`]: Picard iteration with contraction-based error bounds.
//! - [`verify`]: a-posteriori residuals of a grid solution.
//! - [`cli`]: configuration files, CSV output and the command-line front end.

pub mod cli;
pub mod error;
pub mod examples;
pub mod fracops;
pub mod operator;
pub mod problem;
pub mod solver;
pub mod special;
pub mod verify;

#[cfg(test)]
pub(crate) mod testkit;

pub use error::{Error, Result};
pub use fracops::{Grid, GridFunction};
pub use operator::SolutionOperator;
pub use problem::{Certificate, CertifyOptions, Params, ProblemSpec, Verdict};
pub use solver::{SolveReport, SolverConfig};
pub use special::Order;
pub use verify::ResidualReport;
