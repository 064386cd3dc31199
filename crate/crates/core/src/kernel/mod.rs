//! Kernel functions, their inverse maps, and the barrier and proximity
//! measures they induce on the type-2 cone.
//!
//! Every kernel is written as `ψ(t) = (t² - 1)/2 + b(t)`: a fixed growth term
//! plus a kernel-specific barrier term `b`. Implementors supply `b` and its
//! first three derivatives. Keeping the split explicit lets the eligibility
//! sweep cancel the growth term analytically instead of subtracting two
//! large numbers at extreme arguments.

mod bounds;
mod eligibility;

use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

pub use bounds::{
    bound_l, decrease_lhs, estimate_bound_constants, iteration_bound, scaled_barrier_bound, BoundConstants,
    IterationBound,
};
pub use eligibility::{eligibility_check, Condition, ConditionResult, EligibilityGrid, EligibilityReport};

use crate::error::{Error, Result};
use crate::jordan::{block, ConeVector};

/// A univariate kernel `ψ` on `(0, ∞)` with `ψ(1) = ψ'(1) = 0`.
pub trait Kernel: Send + Sync + fmt::Debug {
    /// Identifier in the command-line grammar, e.g. `log` or `param:q=3`.
    fn name(&self) -> String;
    /// Barrier term `b(t) = ψ(t) - (t² - 1)/2`.
    fn barrier_term(&self, t: f64) -> f64;
    /// `b'(t)`.
    fn barrier_d1(&self, t: f64) -> f64;
    /// `b''(t)`.
    fn barrier_d2(&self, t: f64) -> f64;
    /// `b'''(t)`.
    fn barrier_d3(&self, t: f64) -> f64;

    /// `ψ(t)`; the argument must be positive.
    fn psi(&self, t: f64) -> f64 {
        0.5 * (t * t - 1.0) + self.barrier_term(t)
    }
    /// `ψ'(t)`.
    fn d1(&self, t: f64) -> f64 {
        t + self.barrier_d1(t)
    }
    /// `ψ''(t)`.
    fn d2(&self, t: f64) -> f64 {
        1.0 + self.barrier_d2(t)
    }
    /// `ψ'''(t)`.
    fn d3(&self, t: f64) -> f64 {
        self.barrier_d3(t)
    }
}

/// Shared handle to a kernel.
pub type KernelRef = Arc<dyn Kernel>;

/// `(ψ, ψ', ψ'', ψ''')` at `t`, failing unless `t` is positive and finite.
pub fn evaluate(k: &dyn Kernel, t: f64) -> Result<[f64; 4]> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::DomainViolation { function: format!("kernel {}", k.name()), value: t });
    }
    Ok([k.psi(t), k.d1(t), k.d2(t), k.d3(t)])
}

/// The logarithmic kernel `ψ(t) = (t² - 1)/2 - ln t`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LogKernel;

impl Kernel for LogKernel {
    fn name(&self) -> String {
        "log".into()
    }
    fn barrier_term(&self, t: f64) -> f64 {
        -t.ln()
    }
    fn barrier_d1(&self, t: f64) -> f64 {
        -1.0 / t
    }
    fn barrier_d2(&self, t: f64) -> f64 {
        1.0 / (t * t)
    }
    fn barrier_d3(&self, t: f64) -> f64 {
        -2.0 / (t * t * t)
    }
}

/// The kernel `ψ(t) = (t² - 1)/2 + (t^(1-q) - 1)/(q - 1)` for `q > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricKernel {
    q: f64,
}

impl ParametricKernel {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidParameter { name: "q".into(), reason: format!("must be a finite real > 1, got {q}") });
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl Kernel for ParametricKernel {
    fn name(&self) -> String {
        format!("param:q={}", self.q)
    }
    fn barrier_term(&self, t: f64) -> f64 {
        ((1.0 - self.q) * t.ln()).exp_m1() / (self.q - 1.0)
    }
    fn barrier_d1(&self, t: f64) -> f64 {
        -t.powf(-self.q)
    }
    fn barrier_d2(&self, t: f64) -> f64 {
        self.q * t.powf(-self.q - 1.0)
    }
    fn barrier_d3(&self, t: f64) -> f64 {
        -self.q * (self.q + 1.0) * t.powf(-self.q - 2.0)
    }
}

/// The default logarithmic kernel.
pub fn log_kernel() -> KernelRef {
    Arc::new(LogKernel)
}

/// The parametric kernel with exponent `q > 1`.
pub fn parametric_kernel(q: f64) -> Result<KernelRef> {
    Ok(Arc::new(ParametricKernel::new(q)?))
}

/// Parses the selection grammar `log | param:q=<real>`.
pub fn parse_kernel(spec: &str) -> Result<KernelRef> {
    let spec = spec.trim();
    if spec == "log" {
        return Ok(log_kernel());
    }
    if let Some(rest) = spec.strip_prefix("param:q=") {
        let q: f64 = rest.parse().map_err(|_| Error::InvalidParameter {
            name: "kernel".into(),
            reason: format!("cannot parse exponent '{rest}' in '{spec}'"),
        })?;
        return parametric_kernel(q);
    }
    Err(Error::InvalidParameter {
        name: "kernel".into(),
        reason: format!("unknown kernel '{spec}'; expected 'log' or 'param:q=<real>'"),
    })
}

const ROOT_ITERATION_CAP: usize = 200;

/// Safeguarded Newton iteration for an increasing or decreasing function on
/// a bracket `[lo, hi]` whose endpoint values have opposite signs.
fn bracketed_root(
    what: &str,
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    // Orient the bracket so that f(lo) <= 0 <= f(hi).
    let increasing = f(hi) >= f(lo);
    let sign = if increasing { 1.0 } else { -1.0 };
    let g = |t: f64| sign * f(t);
    let dg = |t: f64| sign * df(t);
    let mut t = 0.5 * (lo + hi);
    for _ in 0..ROOT_ITERATION_CAP {
        let gt = g(t);
        if gt.abs() <= tol {
            return Ok(t);
        }
        if gt < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(f64::MIN_POSITIVE) {
            return Ok(t);
        }
        let step = t - gt / dg(t);
        t = if step > lo && step < hi && step.is_finite() { step } else { 0.5 * (lo + hi) };
    }
    Err(Error::NoConvergence { what: what.into(), iterations: ROOT_ITERATION_CAP })
}

/// `ρ(s)`: the unique `t ∈ (0, 1]` with `-ψ'(t) = 2s`.
pub fn rho(k: &dyn Kernel, s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter { name: "s".into(), reason: format!("rho needs a finite s >= 0, got {s}") });
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let f = |t: f64| -k.d1(t) - 2.0 * s;
    let mut lo = 0.5;
    let mut expansions = 0;
    while f(lo) < 0.0 {
        lo *= 0.5;
        expansions += 1;
        if expansions > 1074 {
            return Err(Error::NoConvergence { what: format!("rho bracket for {}", k.name()), iterations: expansions });
        }
    }
    bracketed_root("rho", f, |t| -k.d2(t), lo, 1.0, 1e-12 * (1.0 + 2.0 * s))
}

/// `ϱ(s)`: the unique `t >= 1` with `ψ(t) = s`.
pub fn varrho(k: &dyn Kernel, s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter {
            name: "s".into(),
            reason: format!("varrho needs a finite s >= 0, got {s}"),
        });
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let f = |t: f64| k.psi(t) - s;
    let mut hi = 2.0;
    let mut expansions = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 1023 {
            return Err(Error::NoConvergence { what: format!("varrho bracket for {}", k.name()), iterations: expansions });
        }
    }
    bracketed_root("varrho", f, |t| k.d1(t), 1.0, hi, 1e-12 * (1.0 + s))
}

fn require_positive_spectrum(v: &ConeVector) -> Result<()> {
    for (j, b) in v.blocks().enumerate() {
        let l = block::lambda_min(b);
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::NotInterior(format!("block {j} has smallest eigenvalue {l:e}")));
        }
    }
    Ok(())
}

/// `Ψ(v) = Σ_j [ψ(λ1) + (ψ(λ2) + ψ(λ4))/2]` for strictly interior `v`.
pub fn barrier(v: &ConeVector, k: &dyn Kernel) -> Result<f64> {
    require_positive_spectrum(v)?;
    Ok(v.blocks()
        .map(|b| {
            let [l1, l2, _, l4] = block::eigenvalues(b);
            k.psi(l1) + 0.5 * (k.psi(l2) + k.psi(l4))
        })
        .sum())
}

/// `δ(v) = (1/(2√2)) √(Σ_j [2ψ'(λ1)² + ψ'(λ2)² + ψ'(λ4)²])`.
pub fn proximity(v: &ConeVector, k: &dyn Kernel) -> Result<f64> {
    require_positive_spectrum(v)?;
    let sum: f64 = v
        .blocks()
        .map(|b| {
            let [l1, l2, _, l4] = block::eigenvalues(b);
            2.0 * k.d1(l1).powi(2) + k.d1(l2).powi(2) + k.d1(l4).powi(2)
        })
        .sum();
    Ok(sum.sqrt() / (2.0 * SQRT_2))
}

/// `ψ'(v)` lifted spectrally.
pub fn gradient(v: &ConeVector, k: &dyn Kernel) -> Result<ConeVector> {
    require_positive_spectrum(v)?;
    Ok(crate::jordan::lift_scalar_fn(v, |t| k.d1(t)))
}
