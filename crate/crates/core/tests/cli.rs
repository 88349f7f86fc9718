use std::path::{Path, PathBuf};

use fracbvp::cli::{
    self, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_NO_CERTIFICATE, EXIT_OK, EXIT_VERIFY_FAILED,
};

fn config(name: &str) -> String {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name);
    path.to_str().unwrap().to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("fracbvp").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn line_value(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    let line = text
        .lines()
        .find(|l| l.starts_with(&prefix))
        .unwrap_or_else(|| panic!("no '{key}' in:\n{text}"));
    line[prefix.len()..]
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn certify_first_example() {
    let r = run(&["certify", &config("example1.cfg")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!((line_value(&r.out, "L*Omega") - 0.2810).abs() <= 5e-3);
    assert!(r.out.contains("L*Omega = 0.2810"));
    assert!(r.out.contains("banach: satisfied"));
}

#[test]
fn certify_third_example() {
    let r = run(&["certify", &config("example3.cfg")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!((line_value(&r.out, "L*(Omega - 1/Gamma(q+1))") - 0.7890).abs() <= 5e-3);
    assert!(r.out.contains("krasnoselskii: satisfied"));
    for key in [
        "Delta1",
        "Delta2",
        "Delta3",
        "Omega",
        "Omega - 1/Gamma(q+1)",
        "L",
    ] {
        line_value(&r.out, key);
    }
}

#[test]
fn certify_second_example_without_lipschitz() {
    let r = run(&["certify", &config("example2.cfg")]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("schaefer: satisfied"));
    assert!(r.out.contains("banach: not checked"));
}

#[test]
fn certify_degenerate_problem() {
    let r = run(&["certify", &config("degenerate.cfg")]);
    assert_eq!(r.code, EXIT_NO_CERTIFICATE);
    assert!(r
        .out
        .starts_with("degenerate: nondegeneracy condition violated"));
}

#[test]
fn certify_without_any_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("steep.cfg");
    let text = std::fs::read_to_string(config("example1.cfg")).unwrap();
    std::fs::write(&path, text.replace("lipschitz = 1/144", "lipschitz = 1")).unwrap();
    let r = run(&["certify", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_NO_CERTIFICATE);
    assert!(r.out.contains("banach: not satisfied"));
    assert!(r.out.contains("krasnoselskii: not satisfied"));
}

#[test]
fn malformed_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "q = 4/3\nnu = 1/2\np = oops\n").unwrap();
    let r = run(&["certify", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("line 3"), "{}", r.err);
}

#[test]
fn solve_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let r = run(&[
        "solve",
        &config("example1.cfg"),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1025);
    assert!(rows[0].starts_with("0.000000000000,"));
    assert!(rows[1024].starts_with("1.000000000000,"));
    let x0: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    assert!(x0 != 0.0);
    for key in [
        "iterations",
        "final_diff",
        "observed_ratio",
        "apriori_bound",
    ] {
        line_value(&r.out, key);
    }
    assert!(line_value(&r.out, "final_diff") <= 1e-10);
}

#[test]
fn solve_to_stdout_is_deterministic() {
    let a = run(&["solve", &config("example3.cfg"), "--n", "257"]);
    let b = run(&["solve", &config("example3.cfg"), "--n", "257"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
    assert!(a.out.starts_with("t,x\n"));
    assert!(a.err.contains("iterations = "));
}

#[test]
fn zero_problem_gives_zero_csv() {
    let r = run(&["solve", &config("zero.cfg"), "--n", "33"]);
    assert_eq!(r.code, EXIT_OK);
    let rows: Vec<&str> = r.out.lines().skip(1).collect();
    assert_eq!(rows.len(), 33);
    assert!(rows.iter().all(|row| row.ends_with(",0.000000000000")));
}

#[test]
fn single_iteration_does_not_converge() {
    let r = run(&["solve", &config("example1.cfg"), "--max-iter", "1"]);
    assert_eq!(r.code, EXIT_NOT_CONVERGED);
    assert!(r.err.contains("not converged"));
}

#[test]
fn bad_flags_are_input_errors() {
    assert_eq!(
        run(&["solve", &config("example1.cfg"), "--n", "2"]).code,
        EXIT_INPUT
    );
    assert_eq!(
        run(&["solve", &config("example1.cfg"), "--tol", "-1"]).code,
        EXIT_INPUT
    );
    assert_eq!(
        run(&["solve", &config("degenerate.cfg")]).code,
        EXIT_NO_CERTIFICATE
    );
}

fn zero_csv(dir: &Path, n: usize) -> PathBuf {
    let path = dir.join("zero.csv");
    let mut text = String::from("t,x\n");
    for i in 0..n {
        text.push_str(&format!(
            "{:.12},0.000000000000\n",
            i as f64 / (n - 1) as f64
        ));
    }
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn verify_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let zero = zero_csv(dir.path(), 65);
    let zero = zero.to_str().unwrap();

    let r = run(&["verify", &config("example1.cfg"), zero]);
    assert_eq!(r.code, EXIT_VERIFY_FAILED);
    assert!(line_value(&r.out, "fixed_point_residual") > 0.0);

    let r = run(&["verify", &config("zero.cfg"), zero]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
    for key in [
        "fixed_point_residual",
        "bc1_residual",
        "bc2_residual",
        "ode_residual",
    ] {
        assert_eq!(line_value(&r.out, key), 0.0);
    }
}

#[test]
fn verify_rejects_bad_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let path_str = path.to_str().unwrap();

    std::fs::write(&path, "t,x\n0,0\n0.3,0\n0.5,0\n0.75,0\n1,0\n").unwrap();
    let r = run(&["verify", &config("zero.cfg"), path_str]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("grid mismatch"), "{}", r.err);

    std::fs::write(&path, "t,x\n0,0\n0.25,abc\n0.5,0\n0.75,0\n1,0\n").unwrap();
    assert_eq!(
        run(&["verify", &config("zero.cfg"), path_str]).code,
        EXIT_INPUT
    );

    std::fs::write(&path, "t,x\n0,0\n0.5,0\n1,0\n").unwrap();
    assert_eq!(
        run(&["verify", &config("zero.cfg"), path_str]).code,
        EXIT_INPUT
    );

    assert_eq!(
        run(&["verify", &config("zero.cfg"), "/nonexistent.csv"]).code,
        EXIT_INPUT
    );
}

#[test]
fn round_trip_for_reference_problems() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["example1", "example2", "example3"] {
        let cfg = config(&format!("{name}.cfg"));
        let csv = dir.path().join(format!("{name}.csv"));
        let csv = csv.to_str().unwrap();
        assert_eq!(run(&["solve", &cfg, "--out", csv]).code, EXIT_OK);
        let r = run(&["verify", &cfg, csv]);
        assert_eq!(r.code, EXIT_OK, "{name}: {}", r.out);
    }
}

#[test]
fn examples_table() {
    let r = run(&["examples"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
    for row in [
        "example1 Omega 40.4684",
        "example3 Delta1 0.3631",
        "example2 alpha_threshold 1.7473",
    ] {
        assert!(r.out.lines().any(|l| l.starts_with(row)), "missing '{row}'");
    }
    assert!(!r.out.contains("FAIL"));
}
