//! Problem definition, the coupling constants `Δ1, Δ2, Δ3`, the operator
//! bound `Ω`, and the existence certificates derived from them.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special::{gamma_unchecked, Order};

/// Right-hand side `f(t, x)` of the differential equation.
pub type Rhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Absolute threshold below which `Δ1` or `Δ3` counts as zero.
pub const DEGENERACY_EPS: f64 = 1e-13;

/// Relative distance to the critical coefficients below which a problem is
/// reported as degenerate.
pub const NONDEGENERACY_RTOL: f64 = 1e-10;

/// Scalar parameters of the boundary value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Order of the differential equation, `1 < q ≤ 2`.
    pub q: f64,
    /// Order of the Caputo derivative in the first boundary condition, `0 < ν ≤ 1`.
    pub nu: f64,
    /// Order of the fractional integral in the second boundary condition, `p > 0`.
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub eta: f64,
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.q, self.nu, self.p, self.alpha, self.beta, self.xi, self.eta,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem(
                "all parameters must be finite".into(),
            ));
        }
        if !(self.q > 1.0 && self.q <= 2.0) {
            return Err(Error::InvalidProblem(format!(
                "q must lie in (1, 2], got {}",
                self.q
            )));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::InvalidProblem(format!(
                "nu must lie in (0, 1], got {}",
                self.nu
            )));
        }
        if self.p <= 0.0 {
            return Err(Error::InvalidProblem(format!(
                "p must be positive, got {}",
                self.p
            )));
        }
        if !(0.0 <= self.xi && self.xi < self.eta && self.eta < 1.0) {
            return Err(Error::InvalidProblem(format!(
                "need 0 <= xi < eta < 1, got xi = {}, eta = {}",
                self.xi, self.eta
            )));
        }
        Ok(())
    }

    /// The critical value `Γ(p+1)/η^p` that `alpha` must avoid.
    pub fn alpha_threshold(&self) -> f64 {
        gamma_unchecked(self.p + 1.0) / self.eta.powf(self.p)
    }

    /// The critical value `Γ(2-ν)/η^(1-ν)` that `beta` must avoid.
    pub fn beta_threshold(&self) -> f64 {
        gamma_unchecked(2.0 - self.nu) / self.eta.powf(1.0 - self.nu)
    }

    pub fn is_nondegenerate(&self) -> bool {
        let a = self.alpha_threshold();
        let b = self.beta_threshold();
        (self.alpha - a).abs() > NONDEGENERACY_RTOL * a.abs()
            && (self.beta - b).abs() > NONDEGENERACY_RTOL * b.abs()
    }
}

/// A fully specified problem: parameters, right-hand side, and the optional
/// constants of the growth hypotheses.
#[derive(Clone)]
pub struct ProblemSpec {
    params: Params,
    q: Order,
    nu: Order,
    p: Order,
    rhs: Rhs,
    lipschitz: Option<f64>,
    rhs_bound: Option<f64>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("params", &self.params)
            .field("lipschitz", &self.lipschitz)
            .field("rhs_bound", &self.rhs_bound)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    pub fn new(params: Params, rhs: Rhs) -> Result<Self> {
        params.validate()?;
        Ok(ProblemSpec {
            params,
            q: Order::new(params.q)?,
            nu: Order::new(params.nu)?,
            p: Order::new(params.p)?,
            rhs,
            lipschitz: None,
            rhs_bound: None,
        })
    }

    /// Convenience constructor from a closure.
    pub fn with_fn(
        params: Params,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(params, Arc::new(f))
    }

    /// Sets the Lipschitz constant `L` of `f` in `x`.
    pub fn with_lipschitz(mut self, lipschitz: f64) -> Result<Self> {
        if !lipschitz.is_finite() || lipschitz < 0.0 {
            return Err(Error::InvalidProblem(format!(
                "Lipschitz constant must be finite and >= 0, got {lipschitz}"
            )));
        }
        self.lipschitz = Some(lipschitz);
        Ok(self)
    }

    /// Sets a uniform bound `sup |f(t, x)|` (or the sup of a dominating `σ(t)`).
    pub fn with_rhs_bound(mut self, bound: f64) -> Result<Self> {
        if !bound.is_finite() || bound < 0.0 {
            return Err(Error::InvalidProblem(format!(
                "rhs bound must be finite and >= 0, got {bound}"
            )));
        }
        self.rhs_bound = Some(bound);
        Ok(self)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn q(&self) -> Order {
        self.q
    }

    pub fn nu(&self) -> Order {
        self.nu
    }

    pub fn p(&self) -> Order {
        self.p
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn rhs_bound(&self) -> Option<f64> {
        self.rhs_bound
    }

    #[inline]
    pub fn rhs(&self, t: f64, x: f64) -> f64 {
        (self.rhs)(t, x)
    }

    pub fn rhs_fn(&self) -> &Rhs {
        &self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deltas {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
}

/// `Δ1 = Γ(p+1) - αη^p`, `Δ2 = αη^(p+1) - Γ(p+2)`, `Δ3 = βη^(1-ν) - Γ(2-ν)`.
pub fn compute_deltas(params: &Params) -> Deltas {
    let Params {
        nu,
        p,
        alpha,
        beta,
        eta,
        ..
    } = *params;
    Deltas {
        delta1: gamma_unchecked(p + 1.0) - alpha * eta.powf(p),
        delta2: alpha * eta.powf(p + 1.0) - gamma_unchecked(p + 2.0),
        delta3: beta * eta.powf(1.0 - nu) - gamma_unchecked(2.0 - nu),
    }
}

pub(crate) fn check_deltas(d: &Deltas) -> Result<()> {
    if d.delta1.abs() <= DEGENERACY_EPS {
        return Err(Error::Degenerate(format!(
            "Delta1 = {:e} vanishes (alpha = Gamma(p+1)/eta^p)",
            d.delta1
        )));
    }
    if d.delta3.abs() <= DEGENERACY_EPS {
        return Err(Error::Degenerate(format!(
            "Delta3 = {:e} vanishes (beta = Gamma(2-nu)/eta^(1-nu))",
            d.delta3
        )));
    }
    Ok(())
}

/// The bound `Ω` of the solution operator.
///
/// The coefficients enter through `|α|` and `|β|`, so `Ω` stays an upper
/// bound when either is negative.
pub fn compute_omega(params: &Params) -> Result<f64> {
    let d = compute_deltas(params);
    check_deltas(&d)?;
    Ok(omega_from(params, &d))
}

fn omega_from(params: &Params, d: &Deltas) -> f64 {
    let Params {
        q,
        nu,
        p,
        alpha,
        beta,
        xi,
        eta,
    } = *params;
    let g = gamma_unchecked;
    let coupling = g(2.0 - nu) * ((p + 1.0) * d.delta1.abs() + d.delta2.abs())
        / ((p + 1.0) * (d.delta1 * d.delta3).abs());
    let boundary = beta.abs() * eta.powf(q - nu) / g(q - nu + 1.0) + xi.powf(q - 1.0) / g(q);
    let integral = g(p + 1.0) / d.delta1.abs()
        * (1.0 / g(q + 1.0) + alpha.abs() * eta.powf(p + q) / g(p + q + 1.0));
    1.0 / g(q + 1.0) + coupling * boundary + integral
}

/// Outcome of checking one existence theorem's hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    NotSatisfied,
    /// A required constant was not supplied (or only estimated).
    NotChecked,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "satisfied",
            Verdict::NotSatisfied => "not satisfied",
            Verdict::NotChecked => "not checked",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzSource {
    Supplied,
    /// Sampled lower bound, explicitly trusted by the caller.
    EstimatedTrusted,
    /// Sampled lower bound, reported only.
    Estimated,
}

/// Deterministic sampling box for [`estimate_lipschitz`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzSampling {
    pub samples: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl Default for LipschitzSampling {
    fn default() -> Self {
        LipschitzSampling {
            samples: 4096,
            x_min: -10.0,
            x_max: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    /// Sampling used when no Lipschitz constant is supplied; `None` disables
    /// estimation.
    pub estimate: Option<LipschitzSampling>,
    /// Let a sampled estimate drive the Banach and Krasnoselskii verdicts.
    /// Sampling only yields a lower bound on `L`, so this is unsound in
    /// general.
    pub trust_estimate: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            estimate: Some(LipschitzSampling::default()),
            trust_estimate: false,
        }
    }
}

/// Constants and verdicts for the three existence results.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// `+inf` for degenerate problems.
    pub omega: f64,
    /// `Ω - 1/Γ(q+1)`.
    pub omega_minus: f64,
    pub alpha_threshold: f64,
    pub beta_threshold: f64,
    pub lipschitz_used: f64,
    pub lipschitz_source: LipschitzSource,
    /// `L·Ω < 1` with a supplied (or trusted) `L`.
    pub banach_ok: bool,
    /// `L·(Ω - 1/Γ(q+1)) < 1` with a supplied (or trusted) `L`.
    pub krasnoselskii_ok: bool,
    /// A uniform bound on `f` is available.
    pub schaefer_ok: bool,
    pub nondegenerate: bool,
    /// Whether replacing `α, β` by `|α|, |β|` changed `Ω`.
    pub abs_substituted: bool,
    /// Whether the Lipschitz hypothesis has a supplied constant behind it.
    pub lipschitz_checked: bool,
}

impl Certificate {
    pub fn lipschitz_omega(&self) -> f64 {
        self.lipschitz_used * self.omega
    }

    pub fn lipschitz_omega_minus(&self) -> f64 {
        self.lipschitz_used * self.omega_minus
    }

    fn lipschitz_trusted(&self) -> bool {
        self.lipschitz_source != LipschitzSource::Estimated
    }

    pub fn banach(&self) -> Verdict {
        match (self.nondegenerate, self.lipschitz_trusted(), self.banach_ok) {
            (false, _, _) => Verdict::NotSatisfied,
            (true, false, _) => Verdict::NotChecked,
            (true, true, true) => Verdict::Satisfied,
            (true, true, false) => Verdict::NotSatisfied,
        }
    }

    pub fn krasnoselskii(&self) -> Verdict {
        match (
            self.nondegenerate,
            self.lipschitz_trusted(),
            self.krasnoselskii_ok,
        ) {
            (false, _, _) => Verdict::NotSatisfied,
            (true, false, _) => Verdict::NotChecked,
            (true, true, true) => Verdict::Satisfied,
            (true, true, false) => Verdict::NotSatisfied,
        }
    }

    pub fn schaefer(&self, spec: &ProblemSpec) -> Verdict {
        match (self.nondegenerate, spec.rhs_bound()) {
            (false, _) => Verdict::NotSatisfied,
            (true, None) => Verdict::NotChecked,
            (true, Some(_)) => Verdict::Satisfied,
        }
    }

    pub fn any_holds(&self) -> bool {
        self.banach_ok || self.krasnoselskii_ok || self.schaefer_ok
    }
}

/// Evaluates the constants and the three sets of hypotheses.
///
/// A supplied Lipschitz constant always wins over an estimate. Degenerate
/// problems are not an error: `Ω` is reported as `+inf` and every verdict
/// fails.
pub fn certify(spec: &ProblemSpec, options: &CertifyOptions) -> Result<Certificate> {
    let params = spec.params();
    let d = compute_deltas(params);
    let nondegenerate = params.is_nondegenerate() && check_deltas(&d).is_ok();

    let (lipschitz_used, lipschitz_source) = match (spec.lipschitz(), options.estimate) {
        (Some(l), _) => (l, LipschitzSource::Supplied),
        (None, Some(sampling)) => {
            let l = estimate_lipschitz(spec, sampling.samples, (sampling.x_min, sampling.x_max));
            let source = if options.trust_estimate {
                LipschitzSource::EstimatedTrusted
            } else {
                LipschitzSource::Estimated
            };
            (l, source)
        }
        (None, None) => return Err(Error::MissingLipschitz),
    };
    let trusted = lipschitz_source != LipschitzSource::Estimated;

    let (omega, omega_minus, abs_substituted) = if nondegenerate {
        let omega = omega_from(params, &d);
        let abs_substituted = params.alpha < 0.0 || params.beta < 0.0;
        (
            omega,
            omega - 1.0 / gamma_unchecked(params.q + 1.0),
            abs_substituted,
        )
    } else {
        (f64::INFINITY, f64::INFINITY, false)
    };

    Ok(Certificate {
        delta1: d.delta1,
        delta2: d.delta2,
        delta3: d.delta3,
        omega,
        omega_minus,
        alpha_threshold: params.alpha_threshold(),
        beta_threshold: params.beta_threshold(),
        lipschitz_used,
        lipschitz_source,
        banach_ok: nondegenerate && trusted && lipschitz_used * omega < 1.0,
        krasnoselskii_ok: nondegenerate && trusted && lipschitz_used * omega_minus < 1.0,
        schaefer_ok: nondegenerate && spec.rhs_bound().is_some(),
        nondegenerate,
        abs_substituted,
        lipschitz_checked: spec.lipschitz().is_some(),
    })
}

/// Largest difference quotient `|f(t,x) - f(t,y)| / |x - y|` over a
/// deterministic low-discrepancy sample of `[0,1] × [x_min, x_max]²`.
///
/// This is a lower bound on the true Lipschitz constant, useful only as a
/// sanity check.
pub fn estimate_lipschitz(spec: &ProblemSpec, samples: usize, x_range: (f64, f64)) -> f64 {
    let (lo, hi) = x_range;
    let width = hi - lo;
    // additive recurrence on the 3-d generalised golden ratio
    let phi: f64 = 1.220_744_084_605_759_5;
    let step = [1.0 / phi, 1.0 / (phi * phi), 1.0 / (phi * phi * phi)];
    let mut best = 0.0_f64;
    for k in 0..samples.max(2) {
        let u = step.map(|a| (0.5 + a * (k + 1) as f64).fract());
        let t = u[0];
        let x = lo + width * u[1];
        let y = lo + width * u[2];
        let dx = x - y;
        if dx.abs() <= 1e-12 * width.abs().max(1.0) {
            continue;
        }
        let quotient = ((spec.rhs(t, x) - spec.rhs(t, y)) / dx).abs();
        if quotient.is_finite() {
            best = best.max(quotient);
        }
    }
    best
}
