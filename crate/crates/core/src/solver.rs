//! Conjugate gradient iteration for symmetric positive-definite systems.
//!
//! Each step picks the step size so that consecutive residuals are
//! orthogonal and the direction coefficient so that consecutive directions
//! are conjugate through the operator:
//!
//! ```text
//! alpha_i = (r_i . r_i) / (d_i . A d_i)
//! x_{i+1} = x_i + alpha_i d_i
//! r_{i+1} = r_i - alpha_i A d_i
//! beta_{i+1} = (r_{i+1} . r_{i+1}) / (r_i . r_i)
//! d_{i+1} = r_{i+1} + beta_{i+1} d_i
//! ```
//!
//! A steepest-descent variant that skips the direction update is provided
//! as a baseline for iteration-count comparisons.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, LinearSystem, Vector};

/// Solve parameters. `max_iter` is commonly `2 * n`, giving the exact-
/// arithmetic termination bound a factor-two cushion for floating point.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Stop once `||r|| <= tol_rel * ||b||`.
    pub tol_rel: f64,
    /// Hard cap on iterations.
    pub max_iter: usize,
    /// A step is a breakdown when `d . A d <= breakdown_eps * ||d||^2`,
    /// which on exact SPD input cannot happen for a nonzero `d`.
    pub breakdown_eps: f64,
    /// Record a snapshot of every iteration state in the report.
    pub capture_trace: bool,
    /// Every this many iterations, replace the recurred residual with the
    /// explicitly computed `b - A x`. Zero disables the re-anchoring.
    pub true_residual_check_interval: usize,
}

impl SolverConfig {
    pub const DEFAULT_TOL_REL: f64 = 1e-10;
    pub const DEFAULT_BREAKDOWN_EPS: f64 = 1e-14;

    /// Defaults for an `n`-dimensional system: `tol_rel = 1e-10`,
    /// `max_iter = 2n`, `breakdown_eps = 1e-14`, no trace, no re-anchoring.
    pub fn for_dimension(n: usize) -> Self {
        SolverConfig {
            tol_rel: Self::DEFAULT_TOL_REL,
            max_iter: 2 * n.max(1),
            breakdown_eps: Self::DEFAULT_BREAKDOWN_EPS,
            capture_trace: false,
            true_residual_check_interval: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.tol_rel.is_finite() || self.tol_rel <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tol_rel must be a finite positive number, got {}",
                self.tol_rel
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if !self.breakdown_eps.is_finite() || self.breakdown_eps < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "breakdown_eps must be a finite non-negative number, got {}",
                self.breakdown_eps
            )));
        }
        Ok(())
    }
}

/// Snapshot of one iteration: estimate, residual, direction, and the cached
/// residual norm squared `rho = r . r`.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub i: usize,
    pub x: Vector,
    pub r: Vector,
    pub d: Vector,
    pub rho: f64,
}

/// Why the solve loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIterations,
    Breakdown,
    ZeroRhs,
}

impl StopReason {
    /// Stable lowercase label used in reports and CLI output.
    pub fn label(&self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxIterations => "max_iterations",
            StopReason::Breakdown => "breakdown",
            StopReason::ZeroRhs => "zero_rhs",
        }
    }
}

/// Outcome of a solve: the estimate, per-iteration scalar histories, and
/// optionally the full state trace.
///
/// Histories satisfy `residual_norms.len() == iterations + 1`,
/// `alphas.len() == iterations` and, for conjugate gradient runs,
/// `betas.len() == max(iterations - 1, 0)`: the direction coefficient
/// computed by the final step is never used, so it is not reported.
/// Steepest-descent runs have no direction coefficients at all.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub x: Vector,
    pub residual_norms: Vec<f64>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub trace: Option<Vec<IterationState>>,
    /// Relative tolerance the run was asked to meet; carried so reports are
    /// self-describing.
    pub tol_rel: f64,
}

impl SolveReport {
    pub fn final_relative_residual(&self, b_norm: f64) -> f64 {
        let last = self.residual_norms.last().copied().unwrap_or(0.0);
        if b_norm > 0.0 {
            last / b_norm
        } else {
            0.0
        }
    }
}

/// Initial state: `x = x0`, `d = r = b - A x0`, `rho = r . r`.
pub fn init_state(system: &LinearSystem, x0: &Vector) -> Result<IterationState> {
    if x0.len() != system.n() {
        return Err(Error::Dimension {
            context: "initial guess",
            expected: system.n(),
            actual: x0.len(),
        });
    }
    let ax = system.operator().matvec(x0)?;
    let r = axpy(-1.0, &ax, system.rhs())?;
    let rho = dot(&r, &r)?;
    if !rho.is_finite() {
        return Err(Error::NonFinite("initial residual"));
    }
    Ok(IterationState {
        i: 0,
        x: x0.clone(),
        r: r.clone(),
        d: r,
        rho,
    })
}

/// Step size `rho / (d . A d)`, rejecting non-positive curvature.
pub fn compute_alpha(state: &IterationState, ad: &Vector, breakdown_eps: f64) -> Result<f64> {
    let dtad = dot(&state.d, ad)?;
    let d_norm_sq = dot(&state.d, &state.d)?;
    if dtad <= breakdown_eps * d_norm_sq {
        return Err(Error::Breakdown {
            iteration: state.i,
            dtad,
            d_norm_sq,
        });
    }
    Ok(state.rho / dtad)
}

/// Direction coefficient `rho_next / rho`.
pub fn compute_beta(rho_next: f64, rho: f64) -> Result<f64> {
    if rho == 0.0 {
        return Err(Error::InvalidState(
            "direction coefficient undefined at zero residual; iteration should have stopped"
                .into(),
        ));
    }
    Ok(rho_next / rho)
}

pub(crate) struct StepOutcome {
    pub state: IterationState,
    pub alpha: f64,
    pub beta: f64,
}

/// One conjugate gradient step; requires `state.rho > 0`.
pub fn cg_step(
    state: &IterationState,
    system: &LinearSystem,
    config: &SolverConfig,
) -> Result<IterationState> {
    cg_step_detailed(state, system, config).map(|o| o.state)
}

pub(crate) fn cg_step_detailed(
    state: &IterationState,
    system: &LinearSystem,
    config: &SolverConfig,
) -> Result<StepOutcome> {
    let ad = system.operator().matvec(&state.d)?;
    let alpha = compute_alpha(state, &ad, config.breakdown_eps)?;
    if !alpha.is_finite() {
        return Err(Error::NonFinite("step size"));
    }
    let x_next = axpy(alpha, &state.d, &state.x)?;
    let r_next = refresh_residual(state.i + 1, &x_next, axpy(-alpha, &ad, &state.r), system, config)?;
    let rho_next = dot(&r_next, &r_next)?;
    if !rho_next.is_finite() {
        return Err(Error::NonFinite("residual norm"));
    }
    let beta = compute_beta(rho_next, state.rho)?;
    let d_next = axpy(beta, &state.d, &r_next)?;
    Ok(StepOutcome {
        state: IterationState {
            i: state.i + 1,
            x: x_next,
            r: r_next,
            d: d_next,
            rho: rho_next,
        },
        alpha,
        beta,
    })
}

/// Applies the optional true-residual re-anchoring to a recurred residual.
fn refresh_residual(
    iteration: usize,
    x: &Vector,
    recurred: Result<Vector>,
    system: &LinearSystem,
    config: &SolverConfig,
) -> Result<Vector> {
    let interval = config.true_residual_check_interval;
    if interval > 0 && iteration.is_multiple_of(interval) {
        let ax = system.operator().matvec(x)?;
        return axpy(-1.0, &ax, system.rhs());
    }
    recurred
}

/// Runs conjugate gradient from `x0` (zero vector when `None`).
///
/// Breakdown and non-finite iterates end the loop with a `Breakdown` stop
/// reason instead of an error so the partial histories stay available;
/// only dimension and configuration problems are returned as errors.
pub fn solve(
    system: &LinearSystem,
    x0: Option<&Vector>,
    config: &SolverConfig,
) -> Result<SolveReport> {
    run_loop(system, x0, config, Method::ConjugateGradient)
}

/// Same loop, but the search direction is reset to the residual each
/// iteration (no conjugacy correction). Baseline for comparisons.
pub fn steepest_descent_solve(
    system: &LinearSystem,
    x0: Option<&Vector>,
    config: &SolverConfig,
) -> Result<SolveReport> {
    run_loop(system, x0, config, Method::SteepestDescent)
}

#[derive(Clone, Copy, PartialEq)]
enum Method {
    ConjugateGradient,
    SteepestDescent,
}

fn run_loop(
    system: &LinearSystem,
    x0: Option<&Vector>,
    config: &SolverConfig,
    method: Method,
) -> Result<SolveReport> {
    config.validate()?;
    let zero = Vector::zeros(system.n())?;
    let x0 = x0.unwrap_or(&zero);

    let b_norm = system.rhs().norm();
    if b_norm == 0.0 {
        // x = 0 solves A x = 0 exactly for any invertible operator
        return Ok(SolveReport {
            iterations: 0,
            stop_reason: StopReason::ZeroRhs,
            x: zero,
            residual_norms: vec![0.0],
            alphas: Vec::new(),
            betas: Vec::new(),
            trace: config.capture_trace.then(Vec::new),
            tol_rel: config.tol_rel,
        });
    }

    let mut state = init_state(system, x0)?;
    let mut residual_norms = vec![state.rho.sqrt()];
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let mut trace = config.capture_trace.then(|| vec![state.clone()]);

    let stop_reason = loop {
        if state.rho.sqrt() <= config.tol_rel * b_norm {
            break StopReason::Converged;
        }
        if state.i >= config.max_iter {
            break StopReason::MaxIterations;
        }
        let step = match method {
            Method::ConjugateGradient => cg_step_detailed(&state, system, config),
            Method::SteepestDescent => sd_step_detailed(&state, system, config),
        };
        match step {
            Ok(outcome) => {
                alphas.push(outcome.alpha);
                if method == Method::ConjugateGradient {
                    betas.push(outcome.beta);
                }
                state = outcome.state;
                residual_norms.push(state.rho.sqrt());
                if let Some(t) = trace.as_mut() {
                    t.push(state.clone());
                }
            }
            Err(Error::Breakdown { .. }) | Err(Error::NonFinite(_)) => {
                break StopReason::Breakdown;
            }
            Err(e) => return Err(e),
        }
    };

    let iterations = alphas.len();
    betas.truncate(iterations.saturating_sub(1));
    Ok(SolveReport {
        iterations,
        stop_reason,
        x: state.x,
        residual_norms,
        alphas,
        betas,
        trace,
        tol_rel: config.tol_rel,
    })
}

/// One steepest-descent step: identical updates with `d = r` throughout.
fn sd_step_detailed(
    state: &IterationState,
    system: &LinearSystem,
    config: &SolverConfig,
) -> Result<StepOutcome> {
    let ar = system.operator().matvec(&state.r)?;
    let alpha = compute_alpha(state, &ar, config.breakdown_eps)?;
    if !alpha.is_finite() {
        return Err(Error::NonFinite("step size"));
    }
    let x_next = axpy(alpha, &state.r, &state.x)?;
    let r_next = refresh_residual(state.i + 1, &x_next, axpy(-alpha, &ar, &state.r), system, config)?;
    let rho_next = dot(&r_next, &r_next)?;
    if !rho_next.is_finite() {
        return Err(Error::NonFinite("residual norm"));
    }
    Ok(StepOutcome {
        state: IterationState {
            i: state.i + 1,
            x: x_next,
            r: r_next.clone(),
            d: r_next,
            rho: rho_next,
        },
        alpha,
        beta: 0.0,
    })
}
