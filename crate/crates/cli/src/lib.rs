//! `hyperprog` command-line driver.
//!
//! Exit codes: 0 success, 1 solver failure, 2 bad flags or bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hyperprog::harness::format::{FileError, ProblemFile};
use hyperprog::harness::{default_warm_start, generate_lp, generate_socp_segment, gradcheck, oracle_lp, oracle_segment};
use hyperprog::mainalgo::solve_single;
use hyperprog::{compute_r_e, solve, HPInstance, MainConfig};
use serde_json::json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_SOLVER: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "hyperprog", version, about = "First-order solver for hyperbolic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a problem file and write a JSON report.
    Solve(SolveArgs),
    /// Compare smoothed-objective gradients with finite differences.
    Gradcheck {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest acceptable relative error.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Write a seeded random problem file.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        seed: u64,
        /// LP only: number of variables.
        #[arg(long, default_value_t = 8)]
        vars: usize,
        /// LP only: number of equality rows, including the bounding row.
        #[arg(long, default_value_t = 2)]
        cons: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force optimum of a small problem.
    Oracle {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Check the interior point and report the affine geometry.
    Validate {
        #[arg(long)]
        problem: PathBuf,
    },
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long = "l1-est")]
    l1_est: f64,
    #[arg(long)]
    budget: u64,
    /// Known optimal value; enables the relative-gap stopping rule.
    #[arg(long = "z-star", allow_negative_numbers = true)]
    z_star: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Mainalgo)]
    mode: Mode,
    /// Smoothing parameter; only with `--mode agm`.
    #[arg(long)]
    mu: Option<f64>,
    /// JSON array with the starting point (default: one step from the
    /// interior point along steepest descent).
    #[arg(long = "warm-start")]
    warm_start: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Mainalgo,
    Agm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Lp,
    Socp,
}

struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn solver(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_SOLVER, message: message.to_string() }
}

/// Runs one invocation, writing results to `out` and diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return EXIT_INPUT;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Solve(args) => cmd_solve(args, out),
        Command::Gradcheck { problem, mu, trials, seed, tol } => {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(input(format!("--mu must be positive, got {mu}")));
            }
            let inst = load(&problem)?;
            let rep = gradcheck(&inst, mu, trials, seed).map_err(solver)?;
            emit(out, None, &serde_json::to_value(&rep).expect("report serializes"))?;
            if rep.max_rel_err > tol {
                return Err(solver(format!("max relative error {:.3e} exceeds {tol:.1e}", rep.max_rel_err)));
            }
            Ok(())
        }
        Command::Generate { family, seed, vars, cons, out: path } => {
            let pf = match family {
                Family::Lp => generate_lp(vars, cons, seed).map_err(|e| input(e.to_string()))?,
                Family::Socp => generate_socp_segment(seed),
            };
            write_text(out, path.as_deref(), &pf.to_text())
        }
        Command::Oracle { problem } => {
            let inst = load(&problem)?;
            let res = if inst.cone().is_polyhedral() { oracle_lp(&inst) } else { oracle_segment(&inst) };
            let res = res.map_err(solver)?;
            emit(out, None, &serde_json::to_value(&res).expect("result serializes"))
        }
        Command::Validate { problem } => {
            let inst = load(&problem)?;
            let g = inst.geometry();
            let r_e = if inst.cone().is_polyhedral() { compute_r_e(&inst).ok() } else { None };
            let report = json!({
                "dimension": inst.dim(),
                "degree": inst.degree(),
                "cone": inst.cone_spec().kind(),
                "dim_l": g.dim_l(),
                "dropped_rows": g.dropped_rows(),
                "objective_degenerate": g.objective_degenerate(),
                "interior_residual": g.affine_residual(inst.e()),
                "lambda_min_e": inst.lambda_min(inst.e()).map_err(solver)?,
                "r_e": r_e.filter(|r| r.is_finite()),
            });
            emit(out, None, &report)
        }
    }
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mu = match (args.mode, args.mu) {
        (Mode::Mainalgo, Some(_)) => return Err(input("--mu is only valid with --mode agm")),
        (Mode::Agm, None) => return Err(input("--mode agm requires --mu")),
        (Mode::Agm, Some(mu)) if !(mu > 0.0 && mu.is_finite()) => {
            return Err(input(format!("--mu must be positive, got {mu}")));
        }
        (_, mu) => mu,
    };
    let mut cfg = MainConfig::new(args.eps, args.l1_est, args.budget).map_err(|e| input(e.to_string()))?;
    if let Some(z) = args.z_star {
        cfg = cfg.with_z_star(z);
    }
    let inst = load(&args.problem)?;
    let start = match &args.warm_start {
        Some(path) => {
            let text = read(path)?;
            let v: Vec<f64> = serde_json::from_str(&text)
                .map_err(|e| input(format!("{}: warm start must be a JSON array of numbers: {e}", path.display())))?;
            if v.len() != inst.dim() {
                return Err(input(format!("warm start has length {}, expected {}", v.len(), inst.dim())));
            }
            v
        }
        None => default_warm_start(&inst),
    };
    let report = match mu {
        Some(mu) => solve_single(&inst, &start, mu, &cfg),
        None => solve(&inst, &start, &cfg),
    }
    .map_err(solver)?;
    emit(out, args.out.as_deref(), &serde_json::to_value(&report).expect("report serializes"))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<HPInstance, Failure> {
    let text = read(path)?;
    let pf = ProblemFile::parse(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    pf.to_instance().map_err(|e| match e {
        FileError::Schema(s) => input(format!("{}: schema error at {s}", path.display())),
        FileError::Model(m) => input(format!("{}: {m}", path.display())),
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, value: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    write_text(out, path, &text)
}

fn write_text(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| solver(format!("writing output: {e}"))),
    }
}
