//! `cgsolve` — solve, generate, diagnose, and bench workflows over the
//! conjugate gradient library.
//!
//! Exit codes: 0 success/converged, 1 file or parse problem, 2 usage or
//! invalid parameters, 3 iteration cap reached, 4 breakdown (operator not
//! positive-definite for the iterate), 5 diagnostics found a failed check.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cg_core::Error;

#[derive(Parser)]
#[command(
    name = "cgsolve",
    version,
    about = "Conjugate gradient solver for symmetric positive-definite systems",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve A x = b from Matrix Market / vector files
    Solve(SolveArgs),
    /// Generate a test matrix (and optionally a consistent right-hand side)
    Generate(GenerateArgs),
    /// Solve with trace capture and check every iteration identity
    Diagnose(DiagnoseArgs),
    /// Compare conjugate gradient against steepest descent over a size grid
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Matrix Market file with the operator
    #[arg(long)]
    matrix: std::path::PathBuf,
    /// Vector file with the right-hand side
    #[arg(long)]
    rhs: std::path::PathBuf,
    /// Vector file with the initial guess (default: zero vector)
    #[arg(long)]
    x0: Option<std::path::PathBuf>,
    /// Relative residual tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration cap (default: 2n)
    #[arg(long)]
    max_iter: Option<usize>,
    /// Re-anchor the recurred residual to b - A x every K iterations (0 = off)
    #[arg(long, default_value_t = 0)]
    true_residual_interval: usize,
    /// Write the JSON run report here
    #[arg(long)]
    report: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenerateFamily {
    /// Tridiagonal second-difference matrix (2 on the diagonal, -1 off it)
    #[value(name = "laplacian1d")]
    Laplacian1d,
    /// Random symmetric positive-definite matrix with log-spaced eigenvalues
    #[value(name = "random-spd")]
    RandomSpd,
}

#[derive(Args)]
struct GenerateArgs {
    /// Problem family
    #[arg(value_enum)]
    family: GenerateFamily,
    /// Dimension
    #[arg(long)]
    n: usize,
    /// Generator seed (drives the matrix for random-spd and the reference
    /// solution for --rhs-out / --xtrue-out)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Condition-number target for random-spd
    #[arg(long, default_value_t = 100.0)]
    cond: f64,
    /// Output path for the matrix (Matrix Market)
    #[arg(long)]
    out: std::path::PathBuf,
    /// Also write b = A x_true for a seeded random x_true
    #[arg(long)]
    rhs_out: Option<std::path::PathBuf>,
    /// Also write the x_true used for the right-hand side
    #[arg(long)]
    xtrue_out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFamily {
    #[value(name = "identity")]
    Identity,
    #[value(name = "laplacian1d")]
    Laplacian1d,
    /// random-spd uses a fixed condition-number target of 100
    #[value(name = "random-spd")]
    RandomSpd,
}

#[derive(Args)]
struct BenchArgs {
    /// Problem family
    #[arg(long, value_enum)]
    family: BenchFamily,
    /// Comma-separated list of dimensions, e.g. 16,32,64
    #[arg(long)]
    sizes: String,
    /// Relative residual tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Base seed for instance generation
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => commands::cmd_solve(&args),
        Command::Generate(args) => commands::cmd_generate(&args),
        Command::Diagnose(args) => commands::cmd_diagnose(&args),
        Command::Bench(args) => commands::cmd_bench(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Errors in input data or files exit 1; invalid parameters exit 2.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::InvalidState(_) => 2,
        _ => 1,
    }
}
