//! `t2soco`: solve, transform, generate and self-check type-2 second-order
//! cone problems stored as JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::LevelFilter;

use t2soco_cli::commands::{cmd_check, cmd_gen, cmd_solve, cmd_transform, exit, SolveOptions};
use t2soco_cli::files::InputError;

#[derive(Parser, Debug)]
#[command(name = "t2soco", version, about = "Kernel-function interior point solver for type-2 second-order cone problems")]
struct Cli {
    /// Verbosity of the log written to standard error.
    #[arg(long, global = true, default_value = "warn")]
    log_level: LevelFilter,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a problem file and print the report.
    Solve {
        /// Problem file, or `-` for standard input.
        path: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long, default_value_t = 3.0)]
        tau: f64,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// `log` or `param:q=<real>`.
        #[arg(long, default_value = "log")]
        kernel: String,
        #[arg(long, default_value_t = 200)]
        max_outer: usize,
        #[arg(long, default_value_t = 500)]
        max_inner: usize,
        /// Decrease constant κ for the reported iteration bound.
        #[arg(long, requires = "bound_gamma")]
        bound_kappa: Option<f64>,
        /// Decrease exponent γ for the reported iteration bound.
        #[arg(long, requires = "bound_kappa")]
        bound_gamma: Option<f64>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a type-2 problem as a free/nonneg/Lorentz problem.
    Transform {
        path: PathBuf,
        /// JSON file `{"x": [...]}` whose lift is checked for equal objective.
        #[arg(long)]
        check_point: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded instance with a central starting point.
    Gen {
        /// Comma separated block sizes, e.g. `3,4,5`.
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the optimal triple and objective to this file.
        #[arg(long)]
        known_solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized algebra and scaling identity suite.
    Check {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Flip a sign inside one identity to confirm the suite notices.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn read_input(path: &Path) -> Result<String, InputError> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| InputError(format!("standard input: {e}")));
    }
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), InputError> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| InputError(format!("{}: {e}", p.display()))),
        None => write_stdout(&format!("{text}\n")),
    }
}

/// Writes to standard output; a reader that went away early is not an
/// error.
fn write_stdout(text: &str) -> Result<(), InputError> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(InputError(format!("standard output: {e}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<i32, InputError> {
    match cli.command {
        Command::Solve { path, theta, tau, epsilon, kernel, max_outer, max_inner, bound_kappa, bound_gamma, out } => {
            let opts = SolveOptions { theta, tau, epsilon, kernel, max_outer, max_inner, bound: bound_kappa.zip(bound_gamma) };
            let (report, code) = cmd_solve(&read_input(&path)?, &opts)?;
            emit(&report.to_json(), out.as_deref())?;
            Ok(code)
        }
        Command::Transform { path, check_point, out } => {
            let point = check_point.as_deref().map(read_input).transpose()?;
            let text = cmd_transform(&read_input(&path)?, point.as_deref())?;
            emit(&text, out.as_deref())?;
            Ok(exit::CONVERGED)
        }
        Command::Gen { blocks, m, seed, known_solution, out } => {
            let g = cmd_gen(&blocks, m, seed, known_solution.is_some())?;
            if let (Some(path), Some(sol)) = (known_solution.as_deref(), g.solution.as_deref()) {
                emit(sol, Some(path))?;
            }
            emit(&g.problem, out.as_deref())?;
            Ok(exit::CONVERGED)
        }
        Command::Check { trials, seed, inject_fault } => {
            let (summary, ok) = cmd_check(trials, seed, inject_fault);
            write_stdout(&summary)?;
            Ok(if ok { exit::CONVERGED } else { exit::CHECK_VIOLATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT_ERROR as u8 } else { 0 });
        }
    };
    env_logger::Builder::new().filter_level(cli.log_level).format_timestamp(None).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT_ERROR as u8)
        }
    }
}
