//! Test-only numerical oracles, independent of the production quadrature.

/// Double-exponential (tanh-sinh) quadrature of `f` over `[a, b]`.
///
/// The integrand receives `(s, s - a, b - s)` with the endpoint distances
/// computed without cancellation, so algebraic endpoint singularities are
/// integrated to near machine precision.
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let step = 1.0 / 128.0;
    let mut sum = 0.0;
    let limit = (4.5 / step) as i64;
    for k in -limit..=limit {
        let u = k as f64 * step;
        let v = std::f64::consts::FRAC_PI_2 * u.sinh();
        let e = (-2.0 * v.abs()).exp();
        // distances from the nearer and farther endpoint
        let near = half * 2.0 * e / (1.0 + e);
        let far = half * 2.0 / (1.0 + e);
        let (lo, hi) = if v < 0.0 { (near, far) } else { (far, near) };
        if lo <= 0.0 || hi <= 0.0 {
            continue;
        }
        let cosh_v = v.cosh();
        let w = half * std::f64::consts::FRAC_PI_2 * u.cosh() / (cosh_v * cosh_v);
        let value = f(a + lo, lo, hi);
        if value.is_finite() {
            sum += w * value;
        }
    }
    sum * step
}

#[track_caller]
pub fn assert_rel(actual: f64, expected: f64, tol: f64) {
    let scale = expected.abs().max(f64::MIN_POSITIVE);
    let err = (actual - expected).abs() / scale;
    assert!(
        err <= tol,
        "relative error {err:e} exceeds {tol:e}: actual {actual}, expected {expected}"
    );
}

#[track_caller]
pub fn assert_abs(actual: f64, expected: f64, tol: f64) {
    let err = (actual - expected).abs();
    assert!(
        err <= tol,
        "absolute error {err:e} exceeds {tol:e}: actual {actual}, expected {expected}"
    );
}
