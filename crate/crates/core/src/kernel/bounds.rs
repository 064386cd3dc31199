//! Barrier growth after a μ update and the resulting iteration bound.

use super::{rho, varrho, Kernel};
use crate::error::{Error, Result};

/// Constants `κ > 0`, `γ ∈ (0, 1]` of the per-step decrease bound
/// `Ψ_k - Ψ_{k+1} >= κ Ψ_k^(1-γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub kappa: f64,
    pub gamma: f64,
}

impl BoundConstants {
    pub fn new(kappa: f64, gamma: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParameter { name: "kappa".into(), reason: format!("must be > 0, got {kappa}") });
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParameter { name: "gamma".into(), reason: format!("must lie in (0,1], got {gamma}") });
        }
        Ok(Self { kappa, gamma })
    }
}

/// The theoretical outer-times-inner bound and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationBound {
    /// `L = 2N ψ(ϱ(τ/4N)/√(1-θ))`.
    pub l: f64,
    /// Inner iterations per outer pass, `L^γ/(κγ)`.
    pub inner_per_outer: f64,
    /// `(1/(θκγ)) L^γ log(3N/ε)`.
    pub total: f64,
}

fn check_common(n_blocks: usize, tau: f64, theta: f64) -> Result<()> {
    if n_blocks == 0 {
        return Err(Error::InvalidParameter { name: "N".into(), reason: "must be >= 1".into() });
    }
    if !(tau > 1.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter { name: "tau".into(), reason: format!("must be > 1, got {tau}") });
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter { name: "theta".into(), reason: format!("must lie in (0,1), got {theta}") });
    }
    Ok(())
}

/// `L = 2N ψ(ϱ(τ/4N)/√(1-θ))`, the barrier value bound used after each
/// μ update.
pub fn bound_l(n_blocks: usize, tau: f64, theta: f64, k: &dyn Kernel) -> Result<f64> {
    check_common(n_blocks, tau, theta)?;
    let n = n_blocks as f64;
    let t = varrho(k, tau / (4.0 * n))? / (1.0 - theta).sqrt();
    Ok(2.0 * n * k.psi(t))
}

/// `2N ψ(β ϱ(Ψ/2N))`: an upper bound on `Ψ(βv)` for `β >= 1` and any
/// strictly interior `v` with `Ψ(v) = psi_value`. The barrier weighs the
/// eigenvalues of a block by `1, ½, ½`, so the total weight is `2N` and the
/// mean barrier value per unit weight is `Ψ/2N`.
pub fn scaled_barrier_bound(n_blocks: usize, psi_value: f64, beta: f64, k: &dyn Kernel) -> Result<f64> {
    if n_blocks == 0 || !(beta >= 1.0) || !(psi_value >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "scaled barrier bound".into(),
            reason: format!("need N >= 1, beta >= 1, psi >= 0; got N={n_blocks}, beta={beta}, psi={psi_value}"),
        });
    }
    let n = n_blocks as f64;
    Ok(2.0 * n * k.psi(beta * varrho(k, psi_value / (2.0 * n))?))
}

/// The bound value and the per-outer inner bound `L^γ/(κγ)`.
pub fn iteration_bound(
    n_blocks: usize,
    tau: f64,
    theta: f64,
    epsilon: f64,
    c: BoundConstants,
    k: &dyn Kernel,
) -> Result<IterationBound> {
    check_common(n_blocks, tau, theta)?;
    let n = n_blocks as f64;
    if !(epsilon > 0.0 && epsilon < 3.0 * n) {
        return Err(Error::InvalidParameter {
            name: "epsilon".into(),
            reason: format!("must lie in (0, 3N) = (0, {}), got {epsilon}", 3.0 * n),
        });
    }
    let c = BoundConstants::new(c.kappa, c.gamma)?;
    let l = bound_l(n_blocks, tau, theta, k)?;
    let inner = l.powf(c.gamma) / (c.kappa * c.gamma);
    let total = inner / theta * (3.0 * n / epsilon).ln();
    Ok(IterationBound { l, inner_per_outer: inner, total })
}

/// Left-hand side of the decrease condition,
/// `ψ'(ϱ(2Ψ))² / (8 ψ''(ρ(ψ'(ϱ(2Ψ)))))`, evaluated as printed.
pub fn decrease_lhs(k: &dyn Kernel, psi_value: f64) -> Result<f64> {
    let z = k.d1(varrho(k, 2.0 * psi_value)?);
    Ok(z * z / (8.0 * k.d2(rho(k, z)?)))
}

const PSI_GRID: usize = 400;
const GAMMA_STEPS: usize = 100;

/// Finds `(κ, γ)` with `decrease_lhs(Ψ) >= κ Ψ^(1-γ)` on a log-spaced grid
/// over `psi_range`. Candidate `γ` runs from 1 down to 0.01 in steps of
/// 0.01; the first (largest) `γ` with a positive, finite infimum wins.
pub fn estimate_bound_constants(k: &dyn Kernel, psi_range: (f64, f64), tau: f64) -> Result<BoundConstants> {
    let (lo, hi) = psi_range;
    if !(lo > tau) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidParameter {
            name: "psi_range".into(),
            reason: format!("need tau < lo < hi < inf, got tau={tau}, range=({lo}, {hi})"),
        });
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut samples = Vec::with_capacity(PSI_GRID);
    for i in 0..PSI_GRID {
        let psi = (a + (b - a) * i as f64 / (PSI_GRID - 1) as f64).exp();
        samples.push((psi, decrease_lhs(k, psi)?));
    }
    for step in 0..GAMMA_STEPS {
        let gamma = 1.0 - step as f64 / GAMMA_STEPS as f64;
        let kappa = samples.iter().map(|&(psi, lhs)| lhs / psi.powf(1.0 - gamma)).fold(f64::INFINITY, f64::min);
        if kappa > 0.0 && kappa.is_finite() {
            return Ok(BoundConstants { kappa, gamma });
        }
    }
    Err(Error::NoBoundConstants(format!("kernel {} on Psi in [{lo}, {hi}]", k.name())))
}
