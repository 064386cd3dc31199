//! The four subcommands. Each returns the text to emit on success and an
//! exit status.

use std::fmt::Write as _;
use std::time::Instant;

use log::{debug, info, warn};
use nalgebra::DVector;

use t2soco::checks::run_suite;
use t2soco::kernel::parse_kernel;
use t2soco::solver::{generate_instance, solve, InstanceKind, LogEvent, SolveReport, StartPoint};
use t2soco::transform::{blowup_report, lift_point, to_soco, ConeKind, TransformedProblem};
use t2soco::{BlockShape, BoundConstants, ConeVector, ProblemData, SolverConfig, Status};

use crate::files::{
    BoundOut, ConstantsOut, InputError, IterationsOut, PointFile, ProblemFile, ReportFile, ResidualsOut, SolutionFile,
};

/// Process exit statuses.
pub mod exit {
    pub const CONVERGED: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const ITERATION_CAP: i32 = 2;
    pub const BREAKDOWN: i32 = 3;
    pub const CHECK_VIOLATION: i32 = 4;
}

/// Tolerance used to accept `x = e`, `s = e` as a start when the file has
/// none.
const DEFAULT_START_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub theta: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub kernel: String,
    pub max_outer: usize,
    pub max_inner: usize,
    pub bound: Option<(f64, f64)>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            theta: d.theta,
            tau: d.tau,
            epsilon: d.epsilon,
            kernel: "log".into(),
            max_outer: d.max_outer,
            max_inner: d.max_inner,
            bound: None,
        }
    }
}

impl SolveOptions {
    fn config(&self) -> Result<SolverConfig, InputError> {
        let kernel = parse_kernel(&self.kernel).map_err(|e| InputError(format!("--kernel: {e}")))?;
        let bound_constants = match self.bound {
            Some((kappa, gamma)) => {
                Some(BoundConstants::new(kappa, gamma).map_err(|e| InputError(format!("--bound-kappa/--bound-gamma: {e}")))?)
            }
            None => None,
        };
        let cfg = SolverConfig {
            tau: self.tau,
            epsilon: self.epsilon,
            theta: self.theta,
            kernel,
            max_outer: self.max_outer,
            max_inner: self.max_inner,
            bound_constants,
            ..SolverConfig::default()
        };
        cfg.validate().map_err(|e| InputError(e.to_string()))?;
        Ok(cfg)
    }
}

/// `x = s = e` with the least-squares `y`, provided it is feasible.
fn unit_start(p: &ProblemData) -> Result<StartPoint, InputError> {
    let e = ConeVector::unit(&p.shape);
    let ev = DVector::from_column_slice(e.data());
    let primal = (&p.a * &ev - &p.b).norm();
    let rhs = &p.c - &ev;
    let aat = &p.a * p.a.transpose();
    let y = aat
        .cholesky()
        .ok_or_else(|| InputError("A A' is not positive definite".into()))?
        .solve(&(&p.a * &rhs));
    let dual = (p.a.transpose() * &y - &rhs).norm();
    let primal_ok = primal <= DEFAULT_START_TOL * (1.0 + p.b.norm());
    let dual_ok = dual <= DEFAULT_START_TOL * (1.0 + p.c.norm());
    if primal_ok && dual_ok {
        return Ok(StartPoint { x: e.clone(), y, s: e });
    }
    Err(InputError(format!(
        "no start given (x0, y0, s0) and the unit point is not feasible: |Ae - b| = {primal:e}, \
         min_y |A'y + e - c| = {dual:e}; supply a strictly feasible start"
    )))
}

fn report_file(r: &SolveReport, wall: f64) -> ReportFile {
    let n_blocks = r.x.shape().num_blocks() as f64;
    ReportFile {
        status: r.status.as_str().into(),
        objective: r.objective,
        dual_objective: r.dual_objective,
        x: r.x.data().to_vec(),
        y: r.y.iter().copied().collect(),
        s: r.s.data().to_vec(),
        mu: r.mu,
        gap: 3.0 * n_blocks * r.mu,
        residuals: ResidualsOut { primal: r.residuals.primal, dual: r.residuals.dual, gap: r.residuals.gap },
        iterations: IterationsOut {
            outer: r.outer_iterations,
            inner_total: r.inner_total,
            initial_centering: r.initial_centering,
            inner_per_outer: r.inner_per_outer.clone(),
        },
        bound: r.bound.map(|b| BoundOut {
            l: b.l,
            value: b.total,
            per_outer: b.inner_per_outer,
            constants: ConstantsOut { kappa: b.constants.kappa, gamma: b.constants.gamma },
        }),
        message: r.message.clone(),
        wall_time_seconds: wall,
    }
}

/// Runs the solver on a problem document.
pub fn cmd_solve(text: &str, opts: &SolveOptions) -> Result<(ReportFile, i32), InputError> {
    let file = ProblemFile::parse(text)?;
    let problem = file.to_problem()?;
    let cfg = opts.config()?;
    let start = match file.start()? {
        Some(s) => s,
        None => unit_start(&problem)?,
    };
    let clock = Instant::now();
    let report = solve(&problem, start, &cfg).map_err(|e| InputError(format!("start rejected: {e}")))?;
    let wall = clock.elapsed().as_secs_f64();
    for entry in &report.log {
        match entry.event {
            LogEvent::Update { barrier_before } => debug!(
                "outer {} mu {:.3e} barrier {:.3e} -> {:.3e}",
                entry.outer, entry.mu, barrier_before, entry.barrier
            ),
            LogEvent::Inner(s) => debug!(
                "  inner {} alpha {:.3e} barrier {:.3e} proximity {:.3e}",
                entry.inner, s.alpha, s.barrier_after, s.proximity_after
            ),
            LogEvent::Start => debug!("start mu {:.3e} barrier {:.3e}", entry.mu, entry.barrier),
        }
    }
    info!(
        "{} after {} outer and {} inner iterations, objective {:.10e}",
        report.status.as_str(),
        report.outer_iterations,
        report.inner_total,
        report.objective
    );
    if let Some(m) = &report.message {
        warn!("{m}");
    }
    let code = match report.status {
        Status::Converged => exit::CONVERGED,
        Status::MaxIterations => exit::ITERATION_CAP,
        Status::NumericalBreakdown => exit::BREAKDOWN,
    };
    Ok((report_file(&report, wall), code))
}

fn transformed_file(t: &TransformedProblem) -> ProblemFile {
    let (rows, cols) = t.a_hat.shape();
    let a = (0..rows).flat_map(|i| (0..cols).map(move |k| (i, k))).map(|(i, k)| t.a_hat[(i, k)]).collect();
    let tags = t
        .cones
        .iter()
        .map(|c| match c.kind {
            ConeKind::Lorentz => format!("{}:{}", c.kind.tag(), c.dim),
            _ => c.kind.tag().to_string(),
        })
        .collect();
    ProblemFile {
        m: rows,
        blocks: t.cones.iter().map(|c| c.dim).collect(),
        a,
        b: t.b_hat.iter().copied().collect(),
        c: t.c_bar.iter().copied().collect(),
        x0: None,
        y0: None,
        s0: None,
        cones: Some(tags),
    }
}

/// Rewrites a type-2 problem as an ordinary conic problem. When a point is
/// given, its lift is checked for equal objective and feasibility.
pub fn cmd_transform(text: &str, check_point: Option<&str>) -> Result<String, InputError> {
    let file = ProblemFile::parse(text)?;
    if !file.all_type2() {
        return Err(InputError("transform needs a file whose cones are all \"type2\"".into()));
    }
    let problem = file.to_problem()?;
    let t = to_soco(&problem);
    let br = blowup_report(&problem);
    eprintln!(
        "transform: (m, n) = ({}, {}) -> ({}, {}); usual statement ({}, {}); row growth {:.3}, normal equations {:.3}",
        br.m, br.n, br.rows, br.cols, br.stated_rows, br.stated_cols, br.row_growth, br.normal_equation_growth
    );
    if let Some(pt) = check_point {
        let pt: PointFile =
            serde_json::from_str(pt).map_err(|e| InputError(format!("check point at line {} column {}: {e}", e.line(), e.column())))?;
        let x = ConeVector::new(problem.shape.clone(), pt.x).map_err(|e| InputError(format!("check point \"x\": {e}")))?;
        let z = lift_point(&t, &x).map_err(|e| InputError(format!("check point: {e}")))?;
        let (before, after) = (problem.objective(&x), t.objective(&z));
        let err = (before - after).abs();
        eprintln!(
            "check point: objective {before:.17e} -> {after:.17e} (difference {err:e}), residual {:e}, cone violation {:e}",
            t.residual(&z),
            t.cone_violation(&z)
        );
        let cone_tol = 1e-10 * (1.0 + x.norm());
        if t.cone_violation(&z) > cone_tol {
            return Err(InputError(format!("check point lies outside the cone by more than {cone_tol:e}")));
        }
        if err > 1e-12 * (1.0 + before.abs()) {
            return Err(InputError(format!("check point objective changed by {err:e}")));
        }
    }
    Ok(transformed_file(&t).to_json())
}

/// Output of `gen`.
pub struct Generated {
    pub problem: String,
    pub solution: Option<String>,
}

pub fn parse_blocks(spec: &str) -> Result<Vec<usize>, InputError> {
    spec.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| InputError(format!("--blocks: cannot parse '{t}' in '{spec}'"))))
        .collect()
}

/// A seeded instance with its central start and, on request, the optimal
/// triple.
pub fn cmd_gen(blocks: &str, m: usize, seed: u64, known_solution: bool) -> Result<Generated, InputError> {
    let shape = BlockShape::new(parse_blocks(blocks)?).map_err(|e| InputError(format!("--blocks: {e}")))?;
    let g = generate_instance(&shape, m, seed, InstanceKind::CentralStart).map_err(|e| InputError(e.to_string()))?;
    let problem = ProblemFile::from_problem(&g.problem, Some(&g.start)).to_json();
    let solution = if known_solution {
        let cert = g.certificate.expect("generated instances carry a certificate");
        Some(
            SolutionFile {
                x: cert.x.data().to_vec(),
                y: cert.y.iter().copied().collect(),
                s: cert.s.data().to_vec(),
                objective: cert.objective,
            }
            .to_json(),
        )
    } else {
        None
    };
    Ok(Generated { problem, solution })
}

/// Runs the randomized identity suite; returns the summary and whether
/// every check held.
pub fn cmd_check(trials: usize, seed: u64, inject_fault: bool) -> (String, bool) {
    let outcomes = run_suite(trials, seed, inject_fault);
    let mut out = String::new();
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    for o in &outcomes {
        let _ = writeln!(
            out,
            "{} {:<width$}  trials {:>5}  worst {:.3e}  tolerance {:.0e}  margin {:+.3e}",
            if o.passed { "ok  " } else { "FAIL" },
            o.name,
            o.trials,
            o.worst_error,
            o.tolerance,
            o.margin()
        );
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(out, "{} checks, {} failed, {trials} trials each, seed {seed}", outcomes.len(), failed);
    (out, failed == 0)
}
