//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fracbvp::examples::{self, EXAMPLE1, EXAMPLE2, EXAMPLE3};
use fracbvp::fracops::{rl_integral, Grid, GridFunction};
use fracbvp::problem::{certify, compute_deltas, CertifyOptions, ProblemSpec, Verdict};
use fracbvp::solver::{solve, SolverConfig};
use fracbvp::special::{gamma, Order};
use fracbvp::verify::verify_solution;
use fracbvp::{cli, SolutionOperator};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Criterion = fn() -> Outcome;
type ScalarFn = fn(f64) -> f64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(computed: f64, expected: f64, tol: f64) -> bool {
    (computed - expected).abs() <= tol
}

fn first_example_constants() -> Outcome {
    let start = Instant::now();
    let cert = certify(&examples::example1(), &CertifyOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let omega_ok = within(cert.omega, 40.4684, 5e-3);
    let l_omega_ok = within(cert.lipschitz_omega(), 0.2810, 5e-3);
    let fast = elapsed < Duration::from_secs(1);
    check(
        omega_ok && l_omega_ok && fast,
        format!(
            "Omega = {:.6} (40.4684 +- 5e-3), L*Omega = {:.6} (0.2810 +- 5e-3), {:?}",
            cert.omega,
            cert.lipschitz_omega(),
            elapsed
        ),
    )
}

fn third_example_constants() -> Outcome {
    let start = Instant::now();
    let cert = certify(&examples::example3(), &CertifyOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let rows = [
        ("Delta1", cert.delta1, 0.3631, 5e-4),
        ("|Delta2|", cert.delta2.abs(), 3.1968, 5e-4),
        ("Delta3", cert.delta3, 0.2464, 5e-4),
        ("Omega-1/Gamma(q+1)", cert.omega_minus, 35.5044, 5e-3),
        (
            "L*(Omega-1/Gamma(q+1))",
            cert.lipschitz_omega_minus(),
            0.7890,
            5e-3,
        ),
    ];
    let ok = rows.iter().all(|&(_, c, e, t)| within(c, e, t)) && elapsed < Duration::from_secs(1);
    let detail = rows
        .iter()
        .map(|(name, c, e, _)| format!("{name} = {c:.6} ({e})"))
        .collect::<Vec<_>>()
        .join(", ");
    check(ok, format!("{detail}, {elapsed:?}"))
}

fn second_example_thresholds() -> Outcome {
    let spec = examples::example2();
    let cert = certify(&spec, &CertifyOptions::default()).unwrap();
    let a = EXAMPLE2.alpha_threshold();
    let b = EXAMPLE2.beta_threshold();
    let verdict = cert.schaefer(&spec);
    check(
        within(a, 1.7473, 5e-4)
            && within(b, 0.9829, 5e-4)
            && verdict == Verdict::Satisfied
            && spec.rhs_bound() == Some(1.0 / 16.0),
        format!("Gamma(p+1)/eta^p = {a:.6}, Gamma(2-nu)/eta^(1-nu) = {b:.6}, schaefer: {verdict}"),
    )
}

fn contraction_realized() -> Outcome {
    let start = Instant::now();
    let config = SolverConfig {
        grid_n: 1025,
        tol: 1e-10,
        max_iter: 200,
        initial_guess: None,
    };
    let report = solve(&examples::example1(), &config).unwrap();
    let elapsed = start.elapsed();
    let limit = 0.2810 + 0.05;
    let worst = report.ratios.iter().copied().fold(0.0_f64, f64::max);
    check(
        report.converged
            && !report.ratios.is_empty()
            && worst <= limit
            && report.iterations <= 25
            && elapsed < Duration::from_secs(30),
        format!(
            "converged = {}, iterations = {}, max ratio = {worst:.4} (<= {limit:.4}), {elapsed:?}",
            report.converged, report.iterations
        ),
    )
}

fn boundary_condition_fidelity() -> Outcome {
    let spec = ProblemSpec::with_fn(EXAMPLE1, |_, _| 1.0).unwrap();
    let grid = Grid::new(2049).unwrap();
    let op = SolutionOperator::new(&spec, grid).unwrap();
    let x = op
        .solve_linear(&GridFunction::from_fn(grid, |_| 1.0).unwrap())
        .unwrap();
    let r = verify_solution(&spec, &x).unwrap();
    check(
        r.bc2_residual <= 1e-6 && r.bc1_residual <= 1e-5,
        format!(
            "|x(1) - alpha Ip x(eta)| = {:.3e}, |x'(xi) - beta Dnu x(eta)| = {:.3e}",
            r.bc2_residual, r.bc1_residual
        ),
    )
}

/// `∫₀^η (η-s)^(p-1) ∫₀^s (s-τ)^(q-1) h(τ) dτ ds` by composite midpoint in
/// `(σ, ω)` after `s = η(1 - σ^(1/p))` and `τ = s(1 - ω^(1/q))`, which absorb
/// both kernels: the integral becomes `η^p/(pq) ∬ s^q h(sw) dω dσ`.
fn double_integral_oracle(h: impl Fn(f64) -> f64, p: f64, q: f64, eta: f64, panels: usize) -> f64 {
    let step = 1.0 / panels as f64;
    let ws: Vec<f64> = (0..panels)
        .map(|j| 1.0 - ((j as f64 + 0.5) * step).powf(1.0 / q))
        .collect();
    let mut total = 0.0;
    for i in 0..panels {
        let sigma = (i as f64 + 0.5) * step;
        let s = eta * (1.0 - sigma.powf(1.0 / p));
        let inner: f64 = ws.iter().map(|&w| h(s * w)).sum();
        total += s.powf(q) * inner;
    }
    eta.powf(p) / (p * q) * total * step * step
}

fn oracle_equivalence() -> Outcome {
    let spec = ProblemSpec::with_fn(EXAMPLE1, |_, _| 0.0).unwrap();
    let grid = Grid::new(2049).unwrap();
    let op = SolutionOperator::new(&spec, grid).unwrap();
    let cases: [(&str, ScalarFn); 3] = [("1", |_| 1.0), ("s", |s| s), ("s^2", |s| s * s)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, h) in cases {
        let reduced = op
            .iterated_kernel_integral(&GridFunction::from_fn(grid, h).unwrap())
            .unwrap();
        let oracle = double_integral_oracle(h, EXAMPLE1.p, EXAMPLE1.q, EXAMPLE1.eta, 2000);
        let rel = ((reduced - oracle) / oracle).abs();
        ok &= rel <= 1e-5;
        parts.push(format!("h = {name}: rel {rel:.2e}"));
    }
    check(ok, parts.join(", "))
}

fn quadrature_order() -> Outcome {
    let mut worst = f64::INFINITY;
    for p in [0.5, 4.0 / 3.0, 1.5] {
        let order = Order::new(p).unwrap();
        let exact = 2.0 / gamma(3.0 + p).unwrap();
        let err = |n: usize| {
            let f = GridFunction::from_fn(Grid::new(n).unwrap(), |s| s * s).unwrap();
            (rl_integral(&f, order, 1.0).unwrap() - exact).abs()
        };
        let mut n = 129;
        let mut prev = err(n);
        while n < 2049 {
            n = 2 * n - 1;
            let e = err(n);
            worst = worst.min(prev / e);
            prev = e;
        }
    }
    check(
        worst >= 3.5,
        format!("smallest error ratio per doubling = {worst:.3} (>= 3.5)"),
    )
}

fn path_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_26_10_19);
    let grid = Grid::new(2049).unwrap();
    let spec = ProblemSpec::with_fn(EXAMPLE1, |_, _| 0.0).unwrap();
    let op = SolutionOperator::new(&spec, grid).unwrap();
    let mut worst = 0.0_f64;
    for _ in 0..3 {
        let c: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let freq = rng.gen_range(0.5..6.0);
        let h = GridFunction::from_fn(grid, |s| {
            c[0] + c[1] * s + c[2] * s * s + c[3] * (freq * s + c[4]).sin()
        })
        .unwrap();
        for _ in 0..20 {
            let t = rng.gen_range(0.0..=1.0);
            let direct = op.evaluate_solution(&h, t).unwrap();
            let expanded = op.evaluate_five_term(&h, t).unwrap();
            worst = worst.max((direct - expanded).abs());
        }
    }
    check(
        worst <= 1e-9,
        format!("max |five-term - (Iq h - c0 - c1 t)| = {worst:.2e}"),
    )
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_cli(args: &[&str]) -> i32 {
    let mut out = Vec::new();
    let mut err = Vec::new();
    cli::run(
        std::iter::once("fracbvp").chain(args.iter().copied()),
        &mut out,
        &mut err,
    )
}

fn end_to_end_pipeline() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["example1", "example2", "example3"] {
        let config = configs_dir().join(format!("{name}.cfg"));
        let csv = dir.path().join(format!("{name}.csv"));
        let (config, csv) = (config.to_str().unwrap(), csv.to_str().unwrap());
        let solved = run_cli(&["solve", config, "--out", csv]);
        let verified = run_cli(&["verify", config, csv]);
        ok &= solved == 0 && verified == 0;
        parts.push(format!("{name}: solve {solved}, verify {verified}"));
    }
    let table = run_cli(&["examples"]);
    ok &= table == 0;
    parts.push(format!("examples {table}"));
    check(ok, parts.join(", "))
}

fn main() -> ExitCode {
    // sanity: the reference parameter sets are nondegenerate
    for params in [EXAMPLE1, EXAMPLE2, EXAMPLE3] {
        let d = compute_deltas(&params);
        assert!(d.delta1 != 0.0 && d.delta3 != 0.0);
    }
    let criteria: [(&str, Criterion); 9] = [
        ("first example constants", first_example_constants),
        ("third example constants", third_example_constants),
        ("second example thresholds", second_example_thresholds),
        ("contraction realized", contraction_realized),
        ("boundary-condition fidelity", boundary_condition_fidelity),
        ("oracle equivalence", oracle_equivalence),
        ("quadrature order", quadrature_order),
        ("path equivalence", path_equivalence),
        ("end-to-end pipeline", end_to_end_pipeline),
    ];
    let mut failures = 0;
    for (index, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {} ({name}): {}",
            index + 1,
            outcome.detail
        );
        failures += usize::from(!outcome.pass);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
