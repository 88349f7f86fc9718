//! The three worked problems used as reference cases, with the constants
//! quoted for them (four decimals).

use std::f64::consts::PI;

use crate::problem::{Params, ProblemSpec};

/// `q = 4/3, ν = 1/2, p = 3/2, α = 3, β = 1, ξ = 1/3, η = 1/2`.
pub const EXAMPLE1: Params = Params {
    q: 4.0 / 3.0,
    nu: 0.5,
    p: 1.5,
    alpha: 3.0,
    beta: 1.0,
    xi: 1.0 / 3.0,
    eta: 0.5,
};

/// `q = 3/2, ν = 2/3, p = 4/3, α = 1/2, β = 1/4, ξ = 1/5, η = 3/4`.
pub const EXAMPLE2: Params = Params {
    q: 1.5,
    nu: 2.0 / 3.0,
    p: 4.0 / 3.0,
    alpha: 0.5,
    beta: 0.25,
    xi: 0.2,
    eta: 0.75,
};

/// `q = 5/4, ν = 1/4, p = 5/3, α = 2, β = 3/2, ξ = 2/5, η = 5/7`.
pub const EXAMPLE3: Params = Params {
    q: 1.25,
    nu: 0.25,
    p: 5.0 / 3.0,
    alpha: 2.0,
    beta: 1.5,
    xi: 0.4,
    eta: 5.0 / 7.0,
};

pub const EXAMPLE1_LIPSCHITZ: f64 = 1.0 / 144.0;
pub const EXAMPLE2_RHS_BOUND: f64 = 1.0 / 16.0;
pub const EXAMPLE3_LIPSCHITZ: f64 = 1.0 / 45.0;

pub fn example1_rhs(t: f64, x: f64) -> f64 {
    let damping = (-t.cos().powi(2)).exp() / ((35.0 * t.exp() + 1.0) * (t + 16.0).sqrt());
    damping * x.sin() + std::f64::consts::FRAC_1_SQRT_2 * t / (t + 1.0)
}

pub fn example2_rhs(t: f64, x: f64) -> f64 {
    let denom = (3.0 + x.cos().abs()) * (4.0 + t.powi(3) * x * x).powi(2);
    (-2.0 * t).exp() * (2.0 + (t * t - t).sin()) / denom
}

pub fn example3_rhs(t: f64, x: f64) -> f64 {
    let denom = (1.0 + x.abs()) * (2.0 + t.exp()).powi(2) * (t + 25.0).sqrt();
    (-t).exp() * (t * 2.0_f64.sqrt()).cos() / denom + t / (t + 1.0)
}

/// `sup_t (e^(-t)/45 + t/(t+1))`, attained at `t = 1`.
pub fn example3_sigma_sup() -> f64 {
    (-1.0_f64).exp() / 45.0 + 0.5
}

pub fn example1() -> ProblemSpec {
    ProblemSpec::with_fn(EXAMPLE1, example1_rhs)
        .and_then(|s| s.with_lipschitz(EXAMPLE1_LIPSCHITZ))
        .expect("reference parameters are valid")
}

pub fn example2() -> ProblemSpec {
    ProblemSpec::with_fn(EXAMPLE2, example2_rhs)
        .and_then(|s| s.with_rhs_bound(EXAMPLE2_RHS_BOUND))
        .expect("reference parameters are valid")
}

pub fn example3() -> ProblemSpec {
    ProblemSpec::with_fn(EXAMPLE3, example3_rhs)
        .and_then(|s| s.with_lipschitz(EXAMPLE3_LIPSCHITZ))
        .and_then(|s| s.with_rhs_bound(example3_sigma_sup()))
        .expect("reference parameters are valid")
}

/// Which constant a [`Reference`] row compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Omega,
    LipschitzOmega,
    Delta1,
    AbsDelta2,
    Delta3,
    AbsDelta3,
    OmegaMinus,
    LipschitzOmegaMinus,
    AlphaThreshold,
    BetaThreshold,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::Omega => "Omega",
            Quantity::LipschitzOmega => "L*Omega",
            Quantity::Delta1 => "Delta1",
            Quantity::AbsDelta2 => "|Delta2|",
            Quantity::Delta3 => "Delta3",
            Quantity::AbsDelta3 => "|Delta3|",
            Quantity::OmegaMinus => "Omega-1/Gamma(q+1)",
            Quantity::LipschitzOmegaMinus => "L*(Omega-1/Gamma(q+1))",
            Quantity::AlphaThreshold => "alpha_threshold",
            Quantity::BetaThreshold => "beta_threshold",
        }
    }

    /// Comparison tolerance: `5e-3` for `Ω`-scale quantities, `5e-4` otherwise.
    pub fn tolerance(self) -> f64 {
        match self {
            Quantity::Omega
            | Quantity::LipschitzOmega
            | Quantity::OmegaMinus
            | Quantity::LipschitzOmegaMinus => 5e-3,
            _ => 5e-4,
        }
    }
}

/// A published constant for one of the reference problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub example: &'static str,
    pub quantity: Quantity,
    pub value: f64,
}

/// Every constant printed for the three reference problems.
pub fn references() -> Vec<Reference> {
    let sqrt_pi = PI.sqrt();
    let sqrt2 = 2.0_f64.sqrt();
    let abs_delta3 = 0.5 * (sqrt_pi - sqrt2);
    let r = |example, quantity, value| Reference {
        example,
        quantity,
        value,
    };
    vec![
        r("example1", Quantity::Omega, 40.4684),
        r("example1", Quantity::LipschitzOmega, 0.2810),
        r("example1", Quantity::AbsDelta3, abs_delta3),
        r("example1", Quantity::Delta1, 1.5 * abs_delta3),
        r(
            "example1",
            Quantity::AbsDelta2,
            0.375 * (5.0 * sqrt_pi - sqrt2),
        ),
        r(
            "example1",
            Quantity::AlphaThreshold,
            3.0 * (PI / 2.0).sqrt(),
        ),
        r("example1", Quantity::BetaThreshold, (PI / 2.0).sqrt()),
        r("example2", Quantity::AlphaThreshold, 1.7473),
        r("example2", Quantity::BetaThreshold, 0.9829),
        r("example3", Quantity::Delta1, 0.3631),
        r("example3", Quantity::AbsDelta2, 3.1968),
        r("example3", Quantity::Delta3, 0.2464),
        r("example3", Quantity::OmegaMinus, 35.5044),
        r("example3", Quantity::LipschitzOmegaMinus, 0.7890),
        r("example3", Quantity::AlphaThreshold, 2.6361),
        r("example3", Quantity::BetaThreshold, 1.1829),
    ]
}

/// Built-in problem by name (`example1`, `example2`, `example3`).
pub fn by_name(name: &str) -> Option<ProblemSpec> {
    match name {
        "example1" => Some(example1()),
        "example2" => Some(example2()),
        "example3" => Some(example3()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example2_rhs_is_bounded() {
        let mut worst = 0.0_f64;
        for i in 0..=200 {
            let t = i as f64 / 200.0;
            for j in -200..=200 {
                let x = j as f64 * 0.05;
                worst = worst.max(example2_rhs(t, x).abs());
            }
        }
        assert!(worst <= EXAMPLE2_RHS_BOUND, "{worst}");
    }

    #[test]
    fn example3_sigma_dominates_rhs() {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let sigma = (-t).exp() / 45.0 + t / (t + 1.0);
            for j in -50..=50 {
                let x = j as f64 * 0.3;
                assert!(example3_rhs(t, x).abs() <= sigma + 1e-15);
            }
            assert!(sigma <= example3_sigma_sup() + 1e-15);
        }
    }

    #[test]
    fn example1_rhs_at_zero_state() {
        // sin(0) = 0 leaves the forcing term, largest at t = 1
        let m = (0..=10_000)
            .map(|i| example1_rhs(i as f64 / 10_000.0, 0.0).abs())
            .fold(0.0_f64, f64::max);
        assert!((m - 2.0_f64.sqrt() / 4.0).abs() < 1e-15);
    }
}
