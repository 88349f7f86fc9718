//! Uniform grids on `[0, 1]` and product-integration quadrature for
//! fractional integrals and Caputo derivatives of grid-sampled functions.
//!
//! Every operator here integrates the weakly singular power kernel exactly
//! against the piecewise-linear interpolant of the samples (the fractional
//! trapezoidal rule). For smooth data the error is `O(h²)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::special::{gamma_unchecked, Order};

/// Uniform partition `t_i = i/(n-1)` of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridTooCoarse {
                required: 2,
                actual: n,
            });
        }
        Ok(Grid { n })
    }

    /// Number of nodes.
    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; a grid has at least two nodes.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 / (self.n - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    /// Index `m` of the subinterval `[t_m, t_{m+1}]` containing `t`, clamped
    /// so that `m + 1` is always a valid node.
    fn cell(&self, t: f64) -> usize {
        let m = (t * (self.n - 1) as f64).floor() as usize;
        m.min(self.n - 2)
    }
}

/// Real values sampled at the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value {} at node {i}",
                values[i]
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value of the piecewise-linear interpolant at `t ∈ [0, 1]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_point(t)?;
        Ok(self.interpolate(t))
    }

    pub(crate) fn interpolate(&self, t: f64) -> f64 {
        let m = self.grid.cell(t);
        let t0 = self.grid.node(m);
        let theta = (t - t0) * (self.grid.n - 1) as f64;
        self.values[m] + theta * (self.values[m + 1] - self.values[m])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// `‖self - other‖∞` over the nodes.
    pub fn sup_distance(&self, other: &GridFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{} nodes versus {} nodes",
                self.grid.len(),
                other.grid.len()
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs())))
    }

    /// Second-order finite-difference derivative at every node (central in
    /// the interior, one-sided three-point at the ends).
    pub fn derivative(&self) -> Result<GridFunction> {
        let n = self.grid.len();
        if n < 3 {
            return Err(Error::GridTooCoarse {
                required: 3,
                actual: n,
            });
        }
        let v = &self.values;
        let inv = 0.5 * (n - 1) as f64;
        let mut d = Vec::with_capacity(n);
        d.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv);
        for i in 1..n - 1 {
            d.push((v[i + 1] - v[i - 1]) * inv);
        }
        d.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv);
        Ok(GridFunction {
            grid: self.grid,
            values: d,
        })
    }
}

fn check_point(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("point {t} outside [0, 1]")));
    }
    Ok(())
}

fn check_exponent(exponent: f64) -> Result<()> {
    if !exponent.is_finite() || exponent <= -1.0 {
        return Err(Error::Domain(format!(
            "kernel exponent must be finite and > -1, got {exponent}"
        )));
    }
    Ok(())
}

const GAUSS_POINTS: usize = 16;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre() -> &'static [(f64, f64); GAUSS_POINTS] {
    static RULE: OnceLock<[(f64, f64); GAUSS_POINTS]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_POINTS;
        let mut rule = [(0.0, 0.0); GAUSS_POINTS];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            *slot = (0.5 * (1.0 - x), 0.5 * w);
        }
        rule
    })
}

/// Pieces whose near end sits at least this many lengths away from the
/// singularity use Gauss–Legendre, where the closed form would cancel.
const GAUSS_SWITCH: f64 = 3.0;

/// Product-integration weights of one subinterval.
///
/// The subinterval sits at distance `near` (≥ 0) from the singular point and
/// has length `len`, so the kernel variable `u` runs over `[near, near+len]`.
/// Returns `(w_far, w_near)`: the weights multiplying the sample at the far
/// end (`u = near+len`) and at the near end (`u = near`) in
/// `∫ u^e · (linear interpolant) du`.
fn piece_weights(near: f64, len: f64, exponent: f64) -> (f64, f64) {
    let r = near / len;
    let scale = len.powf(exponent + 1.0);
    if r < GAUSS_SWITCH {
        let e1 = exponent + 1.0;
        let e2 = exponent + 2.0;
        let mass = ((r + 1.0).powf(e1) - r.powf(e1)) / e1;
        let first = ((r + 1.0).powf(e2) - r.powf(e2)) / e2;
        let far = first - r * mass;
        (scale * far, scale * (mass - far))
    } else {
        let (mut far, mut near_w) = (0.0, 0.0);
        for &(v, w) in gauss_legendre() {
            let k = w * (r + v).powf(exponent);
            far += k * v;
            near_w += k * (1.0 - v);
        }
        (scale * far, scale * near_w)
    }
}

/// `∫₀^upper (upper - s)^exponent · f(s) ds` with `f` replaced by its
/// piecewise-linear interpolant. No Gamma prefactor is applied.
///
/// `upper = 0` yields 0 (empty domain).
pub fn singular_weighted_integral(f: &GridFunction, exponent: f64, upper: f64) -> Result<f64> {
    check_exponent(exponent)?;
    check_point(upper)?;
    if upper == 0.0 {
        return Ok(0.0);
    }
    let grid = f.grid();
    let h = grid.step();
    let v = f.values();
    let m = grid.cell(upper);
    let mut acc = 0.0;

    // partial piece [t_m, upper], or [t_m, t_{m+1}] when upper is the last node
    let t_m = grid.node(m);
    let partial = upper - t_m;
    if partial > 0.0 {
        let f_upper = f.interpolate(upper);
        let (w_far, w_near) = piece_weights(0.0, partial, exponent);
        acc += w_far * v[m] + w_near * f_upper;
    }
    for j in (0..m).rev() {
        let near = upper - grid.node(j + 1);
        let (w_far, w_near) = piece_weights(near, h, exponent);
        acc += w_far * v[j] + w_near * v[j + 1];
    }
    Ok(acc)
}

/// Riemann–Liouville integral `Iᵖ f(t) = (1/Γ(p)) ∫₀ᵗ (t-s)^(p-1) f(s) ds`.
pub fn rl_integral(f: &GridFunction, p: Order, t: f64) -> Result<f64> {
    check_point(t)?;
    Ok(singular_weighted_integral(f, p.get() - 1.0, t)? / gamma_unchecked(p.get()))
}

/// Riemann–Liouville integral of order `p` at every node of `f`'s grid.
pub fn rl_integral_nodes(f: &GridFunction, p: Order) -> GridFunction {
    NodalIntegrator::new(f.grid(), p.get() - 1.0)
        .expect("order is positive, so the exponent exceeds -1")
        .apply(f)
        .scaled(1.0 / gamma_unchecked(p.get()))
}

impl GridFunction {
    fn scaled(mut self, factor: f64) -> GridFunction {
        self.values.iter_mut().for_each(|v| *v *= factor);
        self
    }
}

/// Precomputed product-integration weights for evaluating
/// `∫₀^{t_i} (t_i - s)^e f(s) ds` at every node `t_i` of a fixed grid.
///
/// On a uniform grid the weights only depend on the distance `i - j`, so one
/// table of length `n` serves all nodes.
#[derive(Debug, Clone)]
pub struct NodalIntegrator {
    grid: Grid,
    far: Vec<f64>,
    near: Vec<f64>,
}

impl NodalIntegrator {
    pub fn new(grid: Grid, exponent: f64) -> Result<Self> {
        check_exponent(exponent)?;
        let h = grid.step();
        let n = grid.len();
        let mut far = vec![0.0; n];
        let mut near = vec![0.0; n];
        for k in 1..n {
            let (wf, wn) = piece_weights((k - 1) as f64 * h, h, exponent);
            far[k] = wf;
            near[k] = wn;
        }
        Ok(NodalIntegrator { grid, far, near })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Integral at node `i`; piece `k` spans `[t_{i-k}, t_{i-k+1}]`.
    pub fn at_node(&self, values: &[f64], i: usize) -> f64 {
        let mut acc = 0.0;
        for k in 1..=i {
            acc += self.far[k] * values[i - k] + self.near[k] * values[i - k + 1];
        }
        acc
    }

    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        assert_eq!(
            f.grid(),
            self.grid,
            "grid function does not match integrator grid"
        );
        let values = (0..self.grid.len())
            .map(|i| self.at_node(f.values(), i))
            .collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }
}

/// L1 scheme for `0 < alpha < 1`: the derivative of the linear interpolant
/// is integrated exactly against `(t-s)^(-alpha)`.
fn l1_scheme(f: &GridFunction, alpha: f64, t: f64) -> f64 {
    let grid = f.grid();
    let h = grid.step();
    let inv_h = (grid.len() - 1) as f64;
    let v = f.values();
    let exponent = -alpha;
    let m = grid.cell(t);
    let mut acc = 0.0;
    let partial = t - grid.node(m);
    if partial > 0.0 {
        let (wf, wn) = piece_weights(0.0, partial, exponent);
        acc += (wf + wn) * (v[m + 1] - v[m]) * inv_h;
    }
    for j in (0..m).rev() {
        let (wf, wn) = piece_weights(t - grid.node(j + 1), h, exponent);
        acc += (wf + wn) * (v[j + 1] - v[j]) * inv_h;
    }
    acc / gamma_unchecked(1.0 - alpha)
}

/// Caputo derivative `ᶜDᵅ f(t)` for `0 < alpha ≤ 2`.
///
/// * `0 < α < 1`: L1 scheme on the samples.
/// * `1 < α < 2`: nodal first derivatives are formed by second-order
///   differences and the L1 scheme of order `α - 1` is applied to them.
/// * `α = 1, 2`: classical derivatives from the same finite differences,
///   interpolated linearly.
pub fn caputo_derivative(f: &GridFunction, alpha: Order, t: f64) -> Result<f64> {
    check_point(t)?;
    let a = alpha.get();
    if a > 2.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "Caputo order must be at most 2, got {a}"
        )));
    }
    let n = alpha.ceil();
    if f.grid().len() < n + 1 {
        return Err(Error::GridTooCoarse {
            required: n + 1,
            actual: f.grid().len(),
        });
    }
    if alpha.is_integer() {
        let mut d = f.derivative()?;
        if n == 2 {
            d = d.derivative()?;
        }
        return Ok(d.interpolate(t));
    }
    if t == 0.0 {
        return Err(Error::Domain(
            "Caputo derivative of non-integer order is not evaluated at t = 0".into(),
        ));
    }
    if n == 1 {
        return Ok(l1_scheme(f, a, t));
    }
    let mut d = f.derivative()?;
    if let Some(slope) = start_slope(f, a) {
        d.values[0] = slope;
    }
    Ok(l1_scheme(&d, a - 1.0, t))
}

/// Slope at `t = 0` from the fit `c₀ + c₁t + c₂t² + c₃t^alpha` through the
/// first four samples.
///
/// Solutions of order-`alpha` equations behave like `t^alpha` at the origin,
/// where one-sided differences lose all but `O(h^(alpha-1))` accuracy; the
/// error in this one value then reaches every later `t` through the Caputo
/// kernel. Returns `None` when the grid is too short or `alpha` is so close
/// to an integer that the basis degenerates.
#[allow(clippy::needless_range_loop)]
fn start_slope(f: &GridFunction, alpha: f64) -> Option<f64> {
    const MIN_GAP: f64 = 1e-2;
    let v = f.values();
    if v.len() < 4 || alpha - 1.0 < MIN_GAP || 2.0 - alpha < MIN_GAP {
        return None;
    }
    // Weights w with Σ w_k k^m = [m = 1] for m ∈ {0, 1, 2, alpha}.
    let mut m = [[0.0_f64; 5]; 4];
    for k in 0..4 {
        let x = k as f64;
        m[0][k] = 1.0;
        m[1][k] = x;
        m[2][k] = x * x;
        m[3][k] = x.powf(alpha);
    }
    m[1][4] = 1.0;
    let w = solve4(m)?;
    let slope: f64 = w.iter().zip(v).map(|(w, v)| w * v).sum();
    Some(slope * (v.len() - 1) as f64)
}

/// Gaussian elimination with partial pivoting on an augmented 4×5 system.
#[allow(clippy::needless_range_loop)]
fn solve4(mut m: [[f64; 5]; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            for k in col..5 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let tail: f64 = (row + 1..4).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][4] - tail) / m[row][row];
    }
    Some(x)
}
