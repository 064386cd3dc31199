//! Large-update path-following loop.
//!
//! Outer iterations shrink `μ` by the factor `1 - θ` while `3Nμ >= ε`.
//! After each shrink, inner iterations take damped Newton steps until the
//! barrier `Ψ(v)` drops to `τ` or below. The default step is
//! `α = min(α̂, boundary_fraction · ᾱ_max)` where `α̂ = 1/ψ''(ρ(2√2 δ(v)))`
//! and `ᾱ_max` is the largest step that keeps both iterates in the closed
//! cone.

mod generate;

use std::f64::consts::SQRT_2;

use nalgebra::DVector;

pub use generate::{generate_instance, Certificate, GeneratedInstance, InstanceKind};

use crate::error::{Error, Result};
use crate::jordan::{block, membership, ConeVector};
use crate::kernel::{barrier, bound_l, iteration_bound, log_kernel, proximity, rho, BoundConstants, Kernel, KernelRef};
use crate::newton::{model_slope, residuals, solve_directions, Directions, ProblemData, Residuals};
use crate::scaling::{scaled_v, NtScaling};

/// Step-length policy for inner iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `α = min(α̂, boundary_fraction · ᾱ_max)`.
    Theory,
    /// `α = min(value, boundary_fraction · ᾱ_max)`.
    Fixed(f64),
}

/// Parameters of a solve.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Barrier threshold `τ > 1`.
    pub tau: f64,
    /// Accuracy `ε > 0` for the stopping rule `3Nμ < ε`.
    pub epsilon: f64,
    /// Barrier update `θ ∈ (0, 1)`.
    pub theta: f64,
    pub kernel: KernelRef,
    pub max_outer: usize,
    /// Cap on inner iterations within one outer pass.
    pub max_inner: usize,
    /// Fraction of `ᾱ_max` allowed for a step, in `(0, 1)`.
    pub boundary_fraction: f64,
    pub step: StepRule,
    pub bound_constants: Option<BoundConstants>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tau: 3.0,
            epsilon: 1e-6,
            theta: 0.5,
            kernel: log_kernel(),
            max_outer: 200,
            max_inner: 500,
            boundary_fraction: 0.99,
            step: StepRule::Theory,
            bound_constants: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, reason: String| Err(Error::InvalidParameter { name: name.into(), reason });
        if !(self.tau > 1.0) || !self.tau.is_finite() {
            return bad("tau", format!("must be > 1, got {}", self.tau));
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon", format!("must be > 0, got {}", self.epsilon));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return bad("theta", format!("must lie in (0,1), got {}", self.theta));
        }
        if !(self.boundary_fraction > 0.0 && self.boundary_fraction < 1.0) {
            return bad("boundary_fraction", format!("must lie in (0,1), got {}", self.boundary_fraction));
        }
        if let StepRule::Fixed(a) = self.step {
            if !(a > 0.0) || !a.is_finite() {
                return bad("step", format!("fixed step must be > 0, got {a}"));
            }
        }
        if let Some(c) = self.bound_constants {
            BoundConstants::new(c.kappa, c.gamma)?;
        }
        Ok(())
    }
}

/// A primal-dual triple.
#[derive(Debug, Clone, PartialEq)]
pub struct StartPoint {
    pub x: ConeVector,
    pub y: DVector<f64>,
    pub s: ConeVector,
}

/// Terminal status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterations,
    NumericalBreakdown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxIterations => "MaxIterations",
            Status::NumericalBreakdown => "NumericalBreakdown",
        }
    }
}

/// Diagnostics of one inner iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Step actually taken.
    pub alpha: f64,
    /// Theory step `1/ψ''(ρ(2√2 δ))`.
    pub alpha_hat: f64,
    /// Largest step keeping both iterates in the closed cone.
    pub alpha_max: f64,
    pub barrier_before: f64,
    pub proximity_before: f64,
    pub barrier_after: f64,
    pub proximity_after: f64,
    /// `f1'(0)` evaluated from the directional derivative formula.
    pub model_slope: f64,
    /// `Ψ` after a step of exactly `α̂`, when `α̂` is strictly feasible.
    pub barrier_at_alpha_hat: Option<f64>,
}

/// What a log entry records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogEvent {
    /// The starting point, possibly before an initial centering pass.
    Start,
    /// A μ update; `barrier_before` is `Ψ(v)` at the old μ.
    Update { barrier_before: f64 },
    /// An inner iteration.
    Inner(StepInfo),
}

/// One line of the iteration log; values describe the state after the
/// event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEntry {
    pub outer: usize,
    pub inner: usize,
    pub mu: f64,
    pub barrier: f64,
    pub proximity: f64,
    pub residuals: Residuals,
    pub event: LogEvent,
}

/// Current iterate with counters and log.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub x: ConeVector,
    pub y: DVector<f64>,
    pub s: ConeVector,
    pub mu: f64,
    pub outer: usize,
    pub inner_total: usize,
    pub log: Vec<LogEntry>,
}

impl SolverState {
    /// State at `μ = x's/N`, the value for which a central point has
    /// `x ⋄ s = μe`.
    pub fn new(start: StartPoint) -> Self {
        let n = start.x.shape().num_blocks() as f64;
        let mu = start.x.dot(&start.s) / n;
        Self { x: start.x, y: start.y, s: start.s, mu, outer: 0, inner_total: 0, log: Vec::new() }
    }
}

/// Theoretical bound summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub constants: BoundConstants,
    pub l: f64,
    pub inner_per_outer: f64,
    pub total: f64,
}

/// Outcome of [`solve`].
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: ConeVector,
    pub y: DVector<f64>,
    pub s: ConeVector,
    pub mu: f64,
    pub status: Status,
    /// `c'x`.
    pub objective: f64,
    /// `b'y`.
    pub dual_objective: f64,
    pub residuals: Residuals,
    pub outer_iterations: usize,
    pub inner_total: usize,
    /// Inner iterations spent centering the start before the first update.
    pub initial_centering: usize,
    pub inner_per_outer: Vec<usize>,
    pub bound: Option<BoundReport>,
    pub log: Vec<LogEntry>,
    pub message: Option<String>,
}

/// Scaling, scaled point and barrier measures at `(x, s, μ)`.
#[derive(Debug, Clone)]
pub struct Centrality {
    pub scaling: NtScaling,
    pub v: ConeVector,
    pub barrier: f64,
    pub proximity: f64,
}

/// Evaluates [`Centrality`].
pub fn centrality(x: &ConeVector, s: &ConeVector, mu: f64, k: &dyn Kernel) -> Result<Centrality> {
    let scaling = NtScaling::new(x, s)?;
    let v = scaled_v(x, s, mu, &scaling)?;
    let barrier = barrier(&v, k)?;
    let proximity = proximity(&v, k)?;
    Ok(Centrality { scaling, v, barrier, proximity })
}

/// `α̂ = 1/ψ''(ρ(2√2 δ))` for a given proximity.
pub fn step_size_from_proximity(delta: f64, k: &dyn Kernel) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "delta".into(),
            reason: format!("the theory step needs delta > 0, got {delta}"),
        });
    }
    Ok(1.0 / k.d2(rho(k, 2.0 * SQRT_2 * delta)?))
}

/// `α̂ = 1/ψ''(ρ(2√2 δ(v)))`.
pub fn step_size(v: &ConeVector, k: &dyn Kernel) -> Result<f64> {
    step_size_from_proximity(proximity(v, k)?, k)
}

/// Largest `α` for which `z + α dz` stays in the closed cone, for one block.
fn block_max_step(z: &[f64], dz: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    // orthant part: λ1 = z1 - z2
    let l1 = z[0] - z[1];
    let dl1 = dz[0] - dz[1];
    if dl1 < 0.0 {
        best = best.min(l1 / -dl1);
    }
    // Lorentz part in u coordinates: u1 = z1 + z2, tail = √2 z_tail.
    let u1 = z[0] + z[1];
    let du1 = dz[0] + dz[1];
    let tn = block::tail_norm(z) * SQRT_2;
    let qa = du1 * du1 - 2.0 * dz[2..].iter().map(|t| t * t).sum::<f64>();
    let qb = u1 * du1 - 2.0 * z[2..].iter().zip(&dz[2..]).map(|(a, b)| a * b).sum::<f64>();
    let qc = (u1 - tn) * (u1 + tn);
    // q(α) = qa α² + 2 qb α + qc, with qc > 0; find the first positive root.
    let first = if qa == 0.0 {
        if qb < 0.0 {
            -qc / (2.0 * qb)
        } else {
            f64::INFINITY
        }
    } else {
        let disc = qb * qb - qa * qc;
        if disc < 0.0 {
            f64::INFINITY
        } else {
            let q = -(qb + qb.signum() * disc.sqrt());
            let r1 = q / qa;
            let r2 = if q != 0.0 { qc / q } else { f64::INFINITY };
            [r1, r2].into_iter().filter(|r| *r > 0.0).fold(f64::INFINITY, f64::min)
        }
    };
    best.min(first)
}

/// Largest `ᾱ_max` such that `x + αΔx` and `s + αΔs` stay in the closed
/// cone for all `α ∈ [0, ᾱ_max]`; `+∞` when no boundary is reached.
pub fn max_feasible_step(x: &ConeVector, dx: &ConeVector, s: &ConeVector, ds: &ConeVector) -> f64 {
    let mut best = f64::INFINITY;
    for j in 0..x.shape().num_blocks() {
        best = best.min(block_max_step(x.block(j), dx.block(j)));
        best = best.min(block_max_step(s.block(j), ds.block(j)));
    }
    best
}

fn record(state: &mut SolverState, p: &ProblemData, inner: usize, barrier: f64, proximity: f64, event: LogEvent) {
    let residuals = residuals(p, &state.x, &state.y, &state.s);
    state.log.push(LogEntry { outer: state.outer, inner, mu: state.mu, barrier, proximity, residuals, event });
}

/// One damped Newton step at the current `μ`. Updates the state in place
/// and returns the step diagnostics; the log is left to the caller.
pub fn inner_step(state: &mut SolverState, p: &ProblemData, cfg: &SolverConfig) -> Result<StepInfo> {
    let k = &*cfg.kernel;
    let c = centrality(&state.x, &state.s, state.mu, k)?;
    let dirs = solve_directions(p, &c.scaling, state.mu, &c.v, k)?;
    let alpha_hat = step_size_from_proximity(c.proximity, k)?;
    let alpha_max = max_feasible_step(&state.x, &dirs.dx, &state.s, &dirs.ds);
    let cap = cfg.boundary_fraction * alpha_max;
    let alpha = match cfg.step {
        StepRule::Theory => alpha_hat.min(cap),
        StepRule::Fixed(a) => a.min(cap),
    };
    if !(alpha >= 1e-14) {
        return Err(Error::Stagnation(format!("step length {alpha:e} below 1e-14")));
    }
    let slope = model_slope(&c.v, &dirs.dx_scaled, &dirs.ds_scaled, 0.0, k)?;
    let barrier_at_alpha_hat = if alpha == alpha_hat {
        None
    } else if alpha_hat < alpha_max {
        trial_barrier(state, &dirs, alpha_hat, k).ok()
    } else {
        None
    };
    state.x = state.x.axpy(alpha, &dirs.dx);
    state.s = state.s.axpy(alpha, &dirs.ds);
    state.y += &dirs.dy * alpha;
    let after = centrality(&state.x, &state.s, state.mu, k)?;
    state.inner_total += 1;
    Ok(StepInfo {
        alpha,
        alpha_hat,
        alpha_max,
        barrier_before: c.barrier,
        proximity_before: c.proximity,
        barrier_after: after.barrier,
        proximity_after: after.proximity,
        model_slope: slope,
        barrier_at_alpha_hat: barrier_at_alpha_hat.or(if alpha == alpha_hat { Some(after.barrier) } else { None }),
    })
}

fn trial_barrier(state: &SolverState, dirs: &Directions, alpha: f64, k: &dyn Kernel) -> Result<f64> {
    let x = state.x.axpy(alpha, &dirs.dx);
    let s = state.s.axpy(alpha, &dirs.ds);
    Ok(centrality(&x, &s, state.mu, k)?.barrier)
}

fn check_start(p: &ProblemData, start: &StartPoint) -> Result<()> {
    if start.x.shape() != &p.shape || start.s.shape() != &p.shape {
        return Err(Error::DimensionMismatch("start point blocks differ from the problem blocks".into()));
    }
    if start.y.len() != p.m() {
        return Err(Error::DimensionMismatch(format!("y0 has length {} but A has {} rows", start.y.len(), p.m())));
    }
    if !membership(&start.x, true) {
        return Err(Error::NotInterior("x0 is not strictly inside the cone".into()));
    }
    if !membership(&start.s, true) {
        return Err(Error::NotInterior("s0 is not strictly inside the cone".into()));
    }
    let r = residuals(p, &start.x, &start.y, &start.s);
    if r.primal > 1e-8 * (1.0 + p.b.norm()) {
        return Err(Error::InfeasibleStart(format!("|A x0 - b| = {:e}", r.primal)));
    }
    if r.dual > 1e-8 * (1.0 + p.c.norm()) {
        return Err(Error::InfeasibleStart(format!("|A'y0 + s0 - c| = {:e}", r.dual)));
    }
    Ok(())
}

enum PassEnd {
    Centered { barrier: f64 },
    Stop(Status, String),
}

/// Inner loop at fixed μ until `Ψ(v) <= τ`.
fn centering_pass(
    state: &mut SolverState,
    p: &ProblemData,
    cfg: &SolverConfig,
    mut barrier_now: f64,
    count: &mut usize,
) -> PassEnd {
    let mut non_decreasing = 0;
    while barrier_now > cfg.tau {
        if *count >= cfg.max_inner {
            return PassEnd::Stop(
                Status::MaxIterations,
                format!("inner iteration cap {} reached in outer pass {}", cfg.max_inner, state.outer),
            );
        }
        let info = match inner_step(state, p, cfg) {
            Ok(info) => info,
            Err(e) => return PassEnd::Stop(Status::NumericalBreakdown, e.to_string()),
        };
        *count += 1;
        record(state, p, *count, info.barrier_after, info.proximity_after, LogEvent::Inner(info));
        if info.barrier_after >= info.barrier_before {
            non_decreasing += 1;
            if non_decreasing >= 5 {
                return PassEnd::Stop(Status::NumericalBreakdown, "barrier failed to decrease for 5 consecutive steps".into());
            }
        } else {
            non_decreasing = 0;
        }
        barrier_now = info.barrier_after;
    }
    PassEnd::Centered { barrier: barrier_now }
}

/// Runs the path-following method from a strictly feasible start.
///
/// Invalid input (configuration, shapes, infeasible or non-interior start)
/// is an error; every failure during the iteration is reported through
/// [`SolveReport::status`].
pub fn solve(p: &ProblemData, start: StartPoint, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    check_start(p, &start)?;
    let k = &*cfg.kernel;
    let n_blocks = p.shape.num_blocks();
    let nf = n_blocks as f64;
    let bound = match cfg.bound_constants {
        Some(c) if cfg.epsilon < 3.0 * nf => {
            let ib = iteration_bound(n_blocks, cfg.tau, cfg.theta, cfg.epsilon, c, k)?;
            Some(BoundReport { constants: c, l: bound_l(n_blocks, cfg.tau, cfg.theta, k)?, inner_per_outer: ib.inner_per_outer, total: ib.total })
        }
        _ => None,
    };

    let mut state = SolverState::new(start);
    let mut inner_per_outer = Vec::new();
    let mut initial_centering = 0;
    let (status, message) = 'run: {
        let c0 = match centrality(&state.x, &state.s, state.mu, k) {
            Ok(c) => c,
            Err(e) => break 'run (Status::NumericalBreakdown, Some(e.to_string())),
        };
        record(&mut state, p, 0, c0.barrier, c0.proximity, LogEvent::Start);
        let mut barrier_now = match centering_pass(&mut state, p, cfg, c0.barrier, &mut initial_centering) {
            PassEnd::Centered { barrier, .. } => barrier,
            PassEnd::Stop(s, m) => break 'run (s, Some(m)),
        };
        loop {
            if 3.0 * nf * state.mu < cfg.epsilon {
                break 'run (Status::Converged, None);
            }
            if state.outer >= cfg.max_outer {
                break 'run (Status::MaxIterations, Some(format!("outer iteration cap {} reached", cfg.max_outer)));
            }
            state.mu *= 1.0 - cfg.theta;
            state.outer += 1;
            let c = match centrality(&state.x, &state.s, state.mu, k) {
                Ok(c) => c,
                Err(e) => break 'run (Status::NumericalBreakdown, Some(e.to_string())),
            };
            record(&mut state, p, 0, c.barrier, c.proximity, LogEvent::Update { barrier_before: barrier_now });
            let mut count = 0;
            let end = centering_pass(&mut state, p, cfg, c.barrier, &mut count);
            inner_per_outer.push(count);
            match end {
                PassEnd::Centered { barrier, .. } => barrier_now = barrier,
                PassEnd::Stop(s, m) => break 'run (s, Some(m)),
            }
        }
    };

    let res = residuals(p, &state.x, &state.y, &state.s);
    let (status, message) = if status == Status::Converged {
        let tol = 1e-8 * (1.0 + p.b.norm() + p.c.norm());
        if res.primal > tol || res.dual > tol {
            (
                Status::NumericalBreakdown,
                Some(format!("residuals grew beyond {tol:e}: primal {:e}, dual {:e}", res.primal, res.dual)),
            )
        } else {
            (status, message)
        }
    } else {
        (status, message)
    };
    Ok(SolveReport {
        objective: p.objective(&state.x),
        dual_objective: p.b.dot(&state.y),
        residuals: res,
        outer_iterations: state.outer,
        inner_total: state.inner_total,
        initial_centering,
        inner_per_outer,
        bound,
        mu: state.mu,
        status,
        message,
        log: state.log,
        x: state.x,
        y: state.y,
        s: state.s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::BlockShape;
    use crate::kernel::{varrho, LogKernel};
    use approx::assert_relative_eq;

    #[test]
    fn theory_step_limits() {
        let k = LogKernel;
        assert_relative_eq!(step_size_from_proximity(1e-9, &k).unwrap(), 0.5, epsilon = 1e-8);
        // δ = 1: ρ(2√2) solves 1/t - t = 4√2
        let s = 2.0 * SQRT_2;
        let t = -s + (s * s + 1.0).sqrt();
        assert_relative_eq!(step_size_from_proximity(1.0, &k).unwrap(), 1.0 / (1.0 + 1.0 / (t * t)), max_relative = 1e-10);
        let mut prev = 1.0;
        for i in 1..40 {
            let a = step_size_from_proximity(0.1 * i as f64, &k).unwrap();
            assert!(a <= prev);
            prev = a;
        }
        assert!(step_size_from_proximity(0.0, &k).is_err());
        let e = ConeVector::unit(&BlockShape::new(vec![3]).unwrap());
        assert!(step_size(&e, &k).is_err());
    }

    #[test]
    fn max_step_examples() {
        let shape = BlockShape::new(vec![3]).unwrap();
        let e = ConeVector::unit(&shape);
        let z = ConeVector::zeros(&shape);
        assert_eq!(max_feasible_step(&e, &z, &e, &z), f64::INFINITY);
        assert_relative_eq!(max_feasible_step(&e, &e.scaled(-1.0), &e, &z), 1.0, epsilon = 1e-15);
        // tail direction: e + α(0, 0, 1) leaves when (1)² = 2α², α = 1/√2
        let d = ConeVector::from_blocks(&[vec![0.0, 0.0, 1.0]]).unwrap();
        assert_relative_eq!(max_feasible_step(&e, &d, &e, &z), 1.0 / SQRT_2, epsilon = 1e-15);
        // orthant direction: e + α(0, 1, 0) leaves when λ1 = 1 - α = 0
        let d = ConeVector::from_blocks(&[vec![0.0, 1.0, 0.0]]).unwrap();
        assert_relative_eq!(max_feasible_step(&e, &d, &e, &z), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig { tau: 1.0, ..SolverConfig::default() }.validate().is_err());
        assert!(SolverConfig { theta: 1.0, ..SolverConfig::default() }.validate().is_err());
        assert!(SolverConfig { boundary_fraction: 1.0, ..SolverConfig::default() }.validate().is_err());
        assert!(SolverConfig { step: StepRule::Fixed(0.0), ..SolverConfig::default() }.validate().is_err());
    }

    #[test]
    fn central_start_needs_no_initial_centering() {
        let g = generate_instance(&BlockShape::new(vec![3]).unwrap(), 1, 3, InstanceKind::CentralStart).unwrap();
        let report = solve(&g.problem, g.start.clone(), &SolverConfig::default()).unwrap();
        assert_eq!(report.initial_centering, 0);
        match report.log[0].event {
            LogEvent::Start => assert_eq!(report.log[0].barrier, 0.0),
            _ => panic!("first entry must be the start"),
        }
        assert_eq!(report.log[0].mu, 1.0);
        // N = 1: after the first cut Ψ = 2ψ(√2)·... stays below τ = 3
        assert_eq!(report.inner_per_outer[0], 0);
        assert_eq!(report.status, Status::Converged);
    }

    #[test]
    fn one_inner_step_decreases_the_barrier() {
        let g = generate_instance(&BlockShape::new(vec![4]).unwrap(), 2, 11, InstanceKind::CentralStart).unwrap();
        let cfg = SolverConfig::default();
        let mut state = SolverState::new(g.start);
        state.mu *= 0.05;
        let info = inner_step(&mut state, &g.problem, &cfg).unwrap();
        assert!(info.barrier_after < info.barrier_before);
        let d2 = info.proximity_before * info.proximity_before;
        assert!(info.barrier_after - info.barrier_before <= -info.alpha * d2 + 1e-8);
        assert!(membership(&state.x, true) && membership(&state.s, true));
    }

    #[test]
    fn infeasible_starts_are_rejected() {
        let g = generate_instance(&BlockShape::new(vec![3, 3]).unwrap(), 2, 5, InstanceKind::CentralStart).unwrap();
        let mut bad = g.start.clone();
        bad.x.data_mut()[0] += 1.0;
        assert!(matches!(solve(&g.problem, bad, &SolverConfig::default()), Err(Error::InfeasibleStart(_))));
        let mut outside = g.start.clone();
        outside.s.data_mut()[1] = 5.0;
        assert!(matches!(solve(&g.problem, outside, &SolverConfig::default()), Err(Error::NotInterior(_))));
    }

    #[test]
    fn outer_cap_is_reported() {
        let g = generate_instance(&BlockShape::new(vec![3]).unwrap(), 1, 1, InstanceKind::CentralStart).unwrap();
        let cfg = SolverConfig { max_outer: 2, ..SolverConfig::default() };
        let r = solve(&g.problem, g.start, &cfg).unwrap();
        assert_eq!(r.status, Status::MaxIterations);
        assert_eq!(r.outer_iterations, 2);
    }

    #[test]
    fn mu_shrinks_by_the_update_factor() {
        let g = generate_instance(&BlockShape::new(vec![3, 4]).unwrap(), 2, 8, InstanceKind::CentralStart).unwrap();
        let cfg = SolverConfig { theta: 0.3, ..SolverConfig::default() };
        let r = solve(&g.problem, g.start, &cfg).unwrap();
        assert_eq!(r.status, Status::Converged);
        let mus: Vec<f64> = r.log.iter().filter(|e| matches!(e.event, LogEvent::Update { .. })).map(|e| e.mu).collect();
        for w in mus.windows(2) {
            assert_relative_eq!(w[1], 0.7 * w[0], max_relative = 1e-15);
        }
        assert!(3.0 * 2.0 * r.mu < cfg.epsilon);
        let _ = varrho(&LogKernel, 1.0).unwrap();
    }
}
