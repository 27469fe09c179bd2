use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use cg_core::diagnostics::{run_checks, CheckStatus, InvariantReport};
use cg_core::linalg::{
    generate_laplacian_1d, generate_random_spd, LinearSystem, Lcg64, Operator, SparseMatrixCsr,
    Vector,
};
use cg_core::mmio::{read_matrix_market, read_vector, write_matrix_market, write_report, write_vector};
use cg_core::solver::{solve, steepest_descent_solve, SolveReport, SolverConfig, StopReason};
use cg_core::{Error, Result};

use crate::{BenchArgs, BenchFamily, DiagnoseArgs, GenerateArgs, GenerateFamily, SolveArgs};

/// Steepest descent needs far more iterations than conjugate gradient on
/// ill-conditioned instances; the bench keeps it bounded at this cap.
const BENCH_SD_MAX_ITER: usize = 200_000;

fn load_system(args: &SolveArgs) -> Result<(LinearSystem, Option<Vector>, SolverConfig)> {
    let operator = read_matrix_market(&args.matrix)?;
    let rhs = read_vector(&args.rhs)?;
    let system = LinearSystem::new(operator, rhs)?;
    let x0 = args.x0.as_deref().map(read_vector).transpose()?;
    let mut config = SolverConfig::for_dimension(system.n());
    config.tol_rel = args.tol;
    if let Some(max_iter) = args.max_iter {
        config.max_iter = max_iter;
    }
    config.true_residual_check_interval = args.true_residual_interval;
    Ok((system, x0, config))
}

fn summary_line(report: &SolveReport, b_norm: f64) -> String {
    let relres = report.final_relative_residual(b_norm);
    match report.stop_reason {
        StopReason::Converged => format!(
            "converged in {} iterations, ||r||/||b|| = {:.6e}",
            report.iterations, relres
        ),
        StopReason::MaxIterations => format!(
            "max iterations reached after {} iterations, ||r||/||b|| = {:.6e}",
            report.iterations, relres
        ),
        StopReason::Breakdown => format!(
            "breakdown at iteration {} (operator not positive-definite for the iterate), ||r||/||b|| = {:.6e}",
            report.iterations, relres
        ),
        StopReason::ZeroRhs => "zero right-hand side: x = 0 is exact, 0 iterations".to_string(),
    }
}

fn stop_exit_code(reason: StopReason) -> u8 {
    match reason {
        StopReason::Converged | StopReason::ZeroRhs => 0,
        StopReason::MaxIterations => 3,
        StopReason::Breakdown => 4,
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let (system, x0, config) = load_system(args)?;
    let report = solve(&system, x0.as_ref(), &config)?;
    if let Some(path) = &args.report {
        write_report(&report, None, path)?;
    }
    println!("{}", summary_line(&report, system.rhs().norm()));
    Ok(stop_exit_code(report.stop_reason))
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<u8> {
    let operator = match args.family {
        GenerateFamily::Laplacian1d => Operator::Sparse(generate_laplacian_1d(args.n)?),
        GenerateFamily::RandomSpd => {
            Operator::Dense(generate_random_spd(args.n, args.seed, args.cond)?)
        }
    };
    write_matrix_market(&operator, &args.out)?;

    if args.rhs_out.is_some() || args.xtrue_out.is_some() {
        // the reference solution continues the seeded stream so the whole
        // instance is a function of (family, n, seed, cond)
        let mut rng = Lcg64::new(args.seed ^ 0x9e3779b97f4a7c15);
        let x_true = Vector::new((0..args.n).map(|_| rng.next_symmetric()).collect())?;
        let b = operator.matvec(&x_true)?;
        if let Some(path) = &args.rhs_out {
            write_vector(&b, path)?;
        }
        if let Some(path) = &args.xtrue_out {
            write_vector(&x_true, path)?;
        }
    }
    Ok(0)
}

pub fn cmd_diagnose(args: &DiagnoseArgs) -> Result<u8> {
    let (system, x0, mut config) = load_system(&args.solve)?;
    config.capture_trace = true;
    let report = solve(&system, x0.as_ref(), &config)?;
    let invariants = run_checks(&system, &report, config.breakdown_eps)?;

    println!("{}", summary_line(&report, system.rhs().norm()));
    print_check_table(&invariants);

    if let Some(path) = &args.solve.report {
        write_report(&report, Some(&invariants), path)?;
    }

    let solve_code = stop_exit_code(report.stop_reason);
    if solve_code != 0 {
        Ok(solve_code)
    } else if invariants.all_pass() {
        Ok(0)
    } else {
        Ok(5)
    }
}

fn print_check_table(invariants: &InvariantReport) {
    println!("{:<24} {:<8} {:>12} {:>12}  worst-iter", "check", "status", "violation", "threshold");
    for entry in &invariants.entries {
        let worst = entry
            .worst_iteration
            .map_or_else(|| "-".to_string(), |i| i.to_string());
        println!(
            "{:<24} {:<8} {:>12.3e} {:>12.1e}  {}",
            entry.name,
            entry.status.label(),
            entry.violation,
            entry.threshold,
            worst
        );
    }
    let failed = invariants
        .entries
        .iter()
        .filter(|e| e.status == CheckStatus::Fail)
        .count();
    if failed == 0 {
        println!("all checks passed");
    } else {
        println!("{failed} check(s) FAILED");
    }
}

pub fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    let sizes = parse_sizes(&args.sizes)?;
    let mut rows = Vec::new();
    for &n in &sizes {
        let (family_name, operator) = bench_operator(args.family, n, args.seed)?;
        let mut rng = Lcg64::new(args.seed.wrapping_add(n as u64));
        let x_true = Vector::new((0..n).map(|_| rng.next_symmetric()).collect())?;
        let b = operator.matvec(&x_true)?;
        let system = LinearSystem::new(operator, b)?;

        let mut cg_cfg = SolverConfig::for_dimension(n);
        cg_cfg.tol_rel = args.tol;
        let mut sd_cfg = cg_cfg.clone();
        sd_cfg.max_iter = BENCH_SD_MAX_ITER;

        let b_norm = system.rhs().norm();
        let started = Instant::now();
        let cg = solve(&system, None, &cg_cfg)?;
        let cg_ms = started.elapsed().as_secs_f64() * 1e3;
        let started = Instant::now();
        let sd = steepest_descent_solve(&system, None, &sd_cfg)?;
        let sd_ms = started.elapsed().as_secs_f64() * 1e3;

        rows.push(csv_row(family_name, n, "cg", &cg, b_norm, cg_ms));
        rows.push(csv_row(family_name, n, "sd", &sd, b_norm, sd_ms));
    }

    let csv = format!(
        "family,n,method,iterations,final_relres,wall_ms\n{}",
        rows.join("")
    );
    match &args.csv {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            out.write_all(csv.as_bytes())?;
            out.flush()?;
        }
        None => print!("{csv}"),
    }
    Ok(0)
}

fn csv_row(
    family: &str,
    n: usize,
    method: &str,
    report: &SolveReport,
    b_norm: f64,
    wall_ms: f64,
) -> String {
    format!(
        "{family},{n},{method},{},{:e},{wall_ms:.3}\n",
        report.iterations,
        report.final_relative_residual(b_norm),
    )
}

fn bench_operator(family: BenchFamily, n: usize, seed: u64) -> Result<(&'static str, Operator)> {
    if n == 0 {
        return Err(Error::InvalidArgument("sizes must be at least 1".into()));
    }
    Ok(match family {
        BenchFamily::Identity => {
            let offsets = (0..=n).collect();
            let cols = (0..n).collect();
            let values = vec![1.0; n];
            (
                "identity",
                Operator::Sparse(SparseMatrixCsr::new(n, offsets, cols, values)?),
            )
        }
        BenchFamily::Laplacian1d => ("laplacian1d", Operator::Sparse(generate_laplacian_1d(n)?)),
        BenchFamily::RandomSpd => (
            "random-spd",
            Operator::Dense(generate_random_spd(n, seed.wrapping_add(n as u64), 100.0)?),
        ),
    })
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let sizes: Vec<usize> = text
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad size {tok:?} in --sizes")))
        })
        .collect::<Result<_>>()?;
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("--sizes must list at least one dimension".into()));
    }
    Ok(sizes)
}
