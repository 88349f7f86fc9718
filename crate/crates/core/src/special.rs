//! Gamma and Beta functions, and the closed-form action of fractional
//! integrals and Caputo derivatives on power functions.
//!
//! The closed forms double as analytic oracles for the quadrature in
//! [`crate::fracops`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A positive, finite fractional order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("order must be finite, got {value}")));
        }
        if value <= 0.0 {
            return Err(Error::Domain(format!(
                "order must be positive, got {value}"
            )));
        }
        Ok(Order(value))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Whether the order is (numerically) an integer.
    pub fn is_integer(self) -> bool {
        (self.0 - self.0.round()).abs() <= 1e-12 * self.0.max(1.0)
    }

    /// Number of classical derivatives under the Caputo integral: `⌈α⌉`.
    pub fn ceil(self) -> usize {
        if self.is_integer() {
            self.0.round() as usize
        } else {
            self.0.ceil() as usize
        }
    }
}

// Lanczos approximation, g = 607/128 with 15 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Sum of the Lanczos series at `z = x - 1`.
fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "{what} requires a positive finite argument, got {x}"
        )));
    }
    Ok(())
}

/// Gamma function for positive arguments.
///
/// Relative accuracy is better than `1e-13` on `(0, 171)`. Arguments above
/// roughly 171.6 overflow to `+inf`.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive(x, "gamma")?;
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let sum = lanczos_sum(z);
    // split the power so that t^(z+1/2) does not overflow before e^-t is applied
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * sum
}

/// Natural logarithm of the Gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive(x, "ln_gamma")?;
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_unchecked(x).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
///
/// Exactly symmetric in its arguments. Large arguments go through log-gamma
/// differences so the result does not overflow.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    check_positive(a, "beta")?;
    check_positive(b, "beta")?;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if lo + hi < 100.0 {
        Ok(gamma_unchecked(lo) * (gamma_unchecked(hi) / gamma_unchecked(lo + hi)))
    } else {
        Ok((ln_gamma_unchecked(lo) + ln_gamma_unchecked(hi) - ln_gamma_unchecked(lo + hi)).exp())
    }
}

fn check_unit_point(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!(
            "evaluation point {t} outside [0, 1]"
        )));
    }
    Ok(())
}

fn is_nonneg_integer(x: f64) -> bool {
    x >= -1e-12 && (x - x.round()).abs() <= 1e-12
}

/// Caputo derivative of order `alpha` of `t^(lambda-1)`, evaluated at `t`.
///
/// Powers `t^m` with `m` a nonnegative integer below `⌈alpha⌉` are
/// annihilated. Otherwise `lambda > ⌈alpha⌉` is required and the result is
/// `Γ(λ)/Γ(λ-α) · t^(λ-α-1)`.
pub fn caputo_of_monomial(lambda: f64, alpha: Order, t: f64) -> Result<f64> {
    check_unit_point(t)?;
    if !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "exponent must be finite, got {lambda}"
        )));
    }
    let power = lambda - 1.0;
    let n = alpha.ceil();
    if is_nonneg_integer(power) && (power.round() as usize) < n {
        return Ok(0.0);
    }
    if lambda <= n as f64 {
        return Err(Error::Domain(format!(
            "Caputo rule needs lambda > {n} for order {}, got lambda = {lambda}",
            alpha.get()
        )));
    }
    let shifted = lambda - alpha.get();
    if shifted <= 0.0 && (shifted - shifted.round()).abs() <= 1e-12 {
        return Err(Error::Domain(format!(
            "lambda - alpha = {shifted} is a pole of the Gamma function"
        )));
    }
    let exponent = shifted - 1.0;
    if t == 0.0 && exponent < 0.0 {
        return Err(Error::Domain(
            "derivative is unbounded at t = 0 for this exponent".into(),
        ));
    }
    Ok(gamma_unchecked(lambda) / gamma_unchecked(shifted) * t.powf(exponent))
}

/// Riemann–Liouville integral of order `p` of `t^mu`, evaluated at `t`:
/// `Γ(μ+1)/Γ(μ+p+1) · t^(μ+p)`.
pub fn rl_integral_of_monomial(mu: f64, p: Order, t: f64) -> Result<f64> {
    check_unit_point(t)?;
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::Domain(format!(
            "monomial power must be >= 0, got {mu}"
        )));
    }
    Ok(gamma_unchecked(mu + 1.0) / gamma_unchecked(mu + p.get() + 1.0) * t.powf(mu + p.get()))
}
