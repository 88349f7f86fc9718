//! Command-line front end.
//!
//! Exit codes: `0` success, `1` input error, `2` no existence certificate,
//! `3` no convergence, `4` verification failure.

pub mod config;
pub mod expr;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::examples::{self, Quantity};
use crate::fracops::{Grid, GridFunction};
use crate::problem::{certify, Certificate, CertifyOptions, LipschitzSource, ProblemSpec};
use crate::solver::{solve, SolverConfig};
use crate::verify::verify_solution;

pub use config::{load_config, parse_config, parse_rhs, ConfigError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_CERTIFICATE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Acceptance thresholds of the `verify` command.
pub const VERIFY_FIXED_POINT_TOL: f64 = 1e-6;
pub const VERIFY_BC_TOL: f64 = 1e-4;

/// Largest deviation of a CSV `t` column from the uniform grid that is still
/// accepted; the CSV carries twelve decimals.
const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "fracbvp",
    version,
    about = "Nonlocal fractional boundary value problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the existence constants and certificates of a problem.
    Certify { config: PathBuf },
    /// Solve a problem by Picard iteration and write the grid solution as CSV.
    Solve {
        config: PathBuf,
        /// Number of grid nodes on [0, 1].
        #[arg(long, default_value_t = 1025)]
        n: usize,
        /// Stop once successive iterates differ by at most this in sup norm.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a CSV solution against the equation and boundary conditions.
    Verify { config: PathBuf, solution: PathBuf },
    /// Recompute the constants of the built-in reference problems.
    Examples,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Degenerate(_) => EXIT_NO_CERTIFICATE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::input(format!("csv error: {e}"))
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match cli.command {
        Command::Certify { config } => cmd_certify(&config, out),
        Command::Solve {
            config,
            n,
            tol,
            max_iter,
            out: path,
        } => {
            let solver = SolverConfig {
                grid_n: n,
                tol,
                max_iter,
                initial_guess: None,
            };
            cmd_solve(&config, &solver, path.as_deref(), out, err)
        }
        Command::Verify { config, solution } => cmd_verify(&config, &solution, out),
        Command::Examples => cmd_examples(out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn degeneracy_message(spec: &ProblemSpec) -> String {
    let p = spec.params();
    format!(
        "degenerate: nondegeneracy condition violated (need alpha != Gamma(p+1)/eta^p = {} \
         and beta != Gamma(2-nu)/eta^(1-nu) = {}; got alpha = {}, beta = {})",
        p.alpha_threshold(),
        p.beta_threshold(),
        p.alpha,
        p.beta
    )
}

fn lipschitz_note(cert: &Certificate) -> &'static str {
    match cert.lipschitz_source {
        LipschitzSource::Supplied => "supplied",
        LipschitzSource::EstimatedTrusted => "estimated",
        LipschitzSource::Estimated => "estimated by sampling, not trusted",
    }
}

fn cmd_certify(path: &Path, out: &mut dyn Write) -> CmdResult {
    let spec = load_config(path)?;
    let cert = certify(&spec, &CertifyOptions::default())?;
    if !cert.nondegenerate {
        writeln!(out, "{}", degeneracy_message(&spec))?;
        return Ok(EXIT_NO_CERTIFICATE);
    }
    writeln!(out, "Delta1 = {:.4}", cert.delta1)?;
    writeln!(out, "Delta2 = {:.4}", cert.delta2)?;
    writeln!(out, "Delta3 = {:.4}", cert.delta3)?;
    writeln!(out, "Omega = {:.4}", cert.omega)?;
    writeln!(out, "Omega - 1/Gamma(q+1) = {:.4}", cert.omega_minus)?;
    writeln!(
        out,
        "L = {:.6} ({})",
        cert.lipschitz_used,
        lipschitz_note(&cert)
    )?;
    writeln!(out, "L*Omega = {:.4}", cert.lipschitz_omega())?;
    writeln!(
        out,
        "L*(Omega - 1/Gamma(q+1)) = {:.4}",
        cert.lipschitz_omega_minus()
    )?;
    if cert.abs_substituted {
        writeln!(
            out,
            "note: negative alpha or beta replaced by its absolute value in Omega"
        )?;
    }
    writeln!(out, "banach: {}", cert.banach())?;
    writeln!(out, "krasnoselskii: {}", cert.krasnoselskii())?;
    writeln!(out, "schaefer: {}", cert.schaefer(&spec))?;
    Ok(if cert.any_holds() {
        EXIT_OK
    } else {
        EXIT_NO_CERTIFICATE
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}"))
}

/// Writes `t,x` rows with twelve decimals and LF line endings.
pub fn write_solution_csv(x: &GridFunction, sink: impl Write) -> io::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    let to_io = |e: csv::Error| io::Error::other(e);
    writer.write_record(["t", "x"]).map_err(to_io)?;
    for (t, v) in x.grid().nodes().zip(x.values()) {
        writer
            .write_record([format!("{t:.12}"), format!("{v:.12}")])
            .map_err(to_io)?;
    }
    writer.flush()
}

/// Reads a `t,x` CSV and checks that `t` is the uniform grid on `[0, 1]`.
pub fn read_solution_csv(path: &Path) -> Result<GridFunction, String> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "x" {
        return Err(format!(
            "expected header 't,x', found '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let row = i + 2;
        let field = |k: usize| -> Result<f64, String> {
            record
                .get(k)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("row {row}: malformed number in column {}", k + 1))
        };
        ts.push(field(0)?);
        xs.push(field(1)?);
    }
    let grid = Grid::new(ts.len()).map_err(|e| e.to_string())?;
    for (i, &t) in ts.iter().enumerate() {
        if (t - grid.node(i)).abs() > GRID_TOL {
            return Err(format!(
                "grid mismatch: row {} has t = {t}, expected {} for a uniform grid of {} nodes",
                i + 2,
                grid.node(i),
                grid.len()
            ));
        }
    }
    GridFunction::new(grid, xs).map_err(|e| e.to_string())
}

fn cmd_solve(
    path: &Path,
    solver: &SolverConfig,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let spec = load_config(path)?;
    if !spec.params().is_nondegenerate() {
        writeln!(err, "{}", degeneracy_message(&spec))?;
        return Ok(EXIT_NO_CERTIFICATE);
    }
    let report = solve(&spec, solver)?;
    if !report.certified() {
        writeln!(
            err,
            "warning: no contraction certificate (L*Omega < 1 not established); no a-priori bound"
        )?;
    }

    // With the CSV on stdout the summary moves to stderr.
    let summary: &mut dyn Write = match csv_path {
        Some(csv_path) => {
            write_solution_csv(
                &report.solution,
                io::BufWriter::new(File::create(csv_path)?),
            )?;
            out
        }
        None => {
            write_solution_csv(&report.solution, &mut *out)?;
            err
        }
    };
    writeln!(summary, "iterations = {}", report.iterations)?;
    writeln!(summary, "final_diff = {:.6e}", report.final_diff)?;
    writeln!(
        summary,
        "observed_ratio = {}",
        fmt_opt(report.observed_ratio)
    )?;
    writeln!(summary, "apriori_bound = {}", fmt_opt(report.apriori_bound))?;
    if report.converged {
        Ok(EXIT_OK)
    } else {
        writeln!(
            summary,
            "not converged: final_diff {:.6e} exceeds tol {:e} after {} iterations",
            report.final_diff, solver.tol, report.iterations
        )?;
        Ok(EXIT_NOT_CONVERGED)
    }
}

fn cmd_verify(config_path: &Path, csv_path: &Path, out: &mut dyn Write) -> CmdResult {
    let spec = load_config(config_path)?;
    let x = read_solution_csv(csv_path).map_err(Failure::input)?;
    let r = verify_solution(&spec, &x)?;
    writeln!(out, "fixed_point_residual = {:.6e}", r.fixed_point_residual)?;
    writeln!(out, "bc1_residual = {:.6e}", r.bc1_residual)?;
    writeln!(out, "bc2_residual = {:.6e}", r.bc2_residual)?;
    writeln!(out, "ode_residual = {:.6e}", r.ode_residual)?;
    let ok = r.fixed_point_residual <= VERIFY_FIXED_POINT_TOL
        && r.bc1_residual <= VERIFY_BC_TOL
        && r.bc2_residual <= VERIFY_BC_TOL;
    writeln!(
        out,
        "{}",
        if ok {
            "verified"
        } else {
            "verification failed"
        }
    )?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn quantity_value(cert: &Certificate, quantity: Quantity) -> f64 {
    match quantity {
        Quantity::Omega => cert.omega,
        Quantity::LipschitzOmega => cert.lipschitz_omega(),
        Quantity::Delta1 => cert.delta1,
        Quantity::AbsDelta2 => cert.delta2.abs(),
        Quantity::Delta3 => cert.delta3,
        Quantity::AbsDelta3 => cert.delta3.abs(),
        Quantity::OmegaMinus => cert.omega_minus,
        Quantity::LipschitzOmegaMinus => cert.lipschitz_omega_minus(),
        Quantity::AlphaThreshold => cert.alpha_threshold,
        Quantity::BetaThreshold => cert.beta_threshold,
    }
}

fn cmd_examples(out: &mut dyn Write) -> CmdResult {
    let mut all_ok = true;
    for reference in examples::references() {
        let spec = examples::by_name(reference.example).expect("reference names are built in");
        let cert = certify(&spec, &CertifyOptions::default())?;
        let computed = quantity_value(&cert, reference.quantity);
        let diff = (computed - reference.value).abs();
        let tol = reference.quantity.tolerance();
        let ok = diff <= tol;
        all_ok &= ok;
        writeln!(
            out,
            "{} {} {:.4} computed={:.6} diff={:.1e} tol={:.0e} {}",
            reference.example,
            reference.quantity.label(),
            reference.value,
            computed,
            diff,
            tol,
            if ok { "ok" } else { "FAIL" }
        )?;
    }
    for name in ["example1", "example2", "example3"] {
        let spec = examples::by_name(name).expect("reference names are built in");
        let cert = certify(&spec, &CertifyOptions::default())?;
        writeln!(
            out,
            "{name} verdicts banach={} krasnoselskii={} schaefer={}",
            cert.banach(),
            cert.krasnoselskii(),
            cert.schaefer(&spec)
        )?;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_NO_CERTIFICATE })
}
