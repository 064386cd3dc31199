//! Nesterov-Todd type scaling for the type-2 cone.
//!
//! The type-2 cone is linearly isomorphic to `R_+ × Λ^(n-1)` through
//! `u1 = x1 + x2`, `u2 = x1 - x2`, `tail(u) = √2 tail(x)`. Its automorphisms
//! therefore scale the orthant direction `(½, -½, 0)` and the Lorentz part
//! independently. A scaling with `W² x = s` must scale the orthant part by
//! `λ = λ1(s)/λ1(x)` and the Lorentz part by `λ_L = √(det̄(s)/det̄(x))`.
//!
//! This module uses the family
//!
//! ```text
//! W_a = [[a1, a2, ā'], [a2, a1, ā'], [ā, ā, σI + 2āā'/(σ + a1 + a2)]],  σ = √det̄(a)
//! ```
//!
//! with `a1 - a2 = 1`, and sets `W = √λ W_a`. The single-factor form with
//! `det(a) = det̄(a) = 1` (hence `σ = 1`) is the special case `λ = λ_L`; it
//! can only satisfy `W x = W⁻¹ s` when `λ1(s)/λ1(x) = √(det̄(s)/det̄(x))`.
//! For general pairs the construction picks `σ² = λ_L/λ`, which keeps every
//! identity that involves traces, `λ1` or `det̄` of the scaled point.
//! [`nt_point_closed_form`] solves for the single-factor `a` directly and
//! reports an error when no such `a` exists.

use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jordan::{block, dot, BlockShape, ConeVector};

/// Scaling data for one block: `W = √λ W_a` and its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockScaling {
    pub lambda: f64,
    pub a: Vec<f64>,
    /// `σ = √det̄(a)`, the extra Lorentz factor of `W_a`; one for the
    /// single-factor form.
    pub sigma: f64,
    pub w: DMatrix<f64>,
    pub w_inv: DMatrix<f64>,
}

impl BlockScaling {
    /// Scale of the Lorentz part of `W²`, equal to `λ σ²`.
    pub fn lorentz_factor(&self) -> f64 {
        self.lambda * self.sigma * self.sigma
    }

    /// True when `det(a) = det̄(a) = 1` within `tol`, i.e. the scaling is of
    /// the single-factor form.
    pub fn is_single_factor(&self, tol: f64) -> bool {
        let (d, db, _) = block::dets(&self.a);
        (d - 1.0).abs() <= tol && (db - 1.0).abs() <= tol
    }
}

/// Block-diagonal scaling `W = diag(W^1, ..., W^N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NtScaling {
    shape: BlockShape,
    blocks: Vec<BlockScaling>,
}

impl NtScaling {
    /// Builds the scaling with `W x = W⁻¹ s` for strictly interior `x, s`.
    pub fn new(x: &ConeVector, s: &ConeVector) -> Result<Self> {
        x.check_same_shape(s)?;
        let mut blocks = Vec::with_capacity(x.shape().num_blocks());
        for j in 0..x.shape().num_blocks() {
            let (xb, sb) = (x.block(j), s.block(j));
            let lambda = nt_lambda(xb, sb).map_err(|e| with_block(e, j))?;
            let (a, sigma) = nt_point_with_sigma(xb, sb).map_err(|e| with_block(e, j))?;
            blocks.push(build_block(&a, sigma, lambda).map_err(|e| with_block(e, j))?);
        }
        Ok(Self { shape: x.shape().clone(), blocks })
    }

    /// Assembles a scaling from per-block data.
    pub fn from_blocks(shape: BlockShape, blocks: Vec<BlockScaling>) -> Result<Self> {
        if blocks.len() != shape.num_blocks()
            || blocks.iter().zip(shape.sizes()).any(|(b, &n)| b.a.len() != n)
        {
            return Err(Error::DimensionMismatch("scaling blocks do not match the shape".into()));
        }
        Ok(Self { shape, blocks })
    }

    /// `W = I`.
    pub fn identity(shape: &BlockShape) -> Self {
        let blocks = shape
            .sizes()
            .iter()
            .map(|&n| {
                let mut a = vec![0.0; n];
                a[0] = 1.0;
                w_matrix(&a, 1.0).expect("the unit element is a valid scaling point")
            })
            .collect();
        Self { shape: shape.clone(), blocks }
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn block(&self, j: usize) -> &BlockScaling {
        &self.blocks[j]
    }

    pub fn blocks(&self) -> &[BlockScaling] {
        &self.blocks
    }

    /// `W x`.
    pub fn apply(&self, x: &ConeVector) -> ConeVector {
        self.apply_with(x, |b| &b.w)
    }

    /// `W⁻¹ s`.
    pub fn apply_inverse(&self, s: &ConeVector) -> ConeVector {
        self.apply_with(s, |b| &b.w_inv)
    }

    /// `max_j (‖W_j‖_F ‖x_j‖ + ‖W_j⁻¹‖_F ‖s_j‖)`, the size of the terms
    /// summed when applying the scaling to the pair.
    pub fn product_scale(&self, x: &ConeVector, s: &ConeVector) -> f64 {
        self.blocks
            .iter()
            .enumerate()
            .map(|(j, b)| b.w.norm() * dot(x.block(j), x.block(j)).sqrt() + b.w_inv.norm() * dot(s.block(j), s.block(j)).sqrt())
            .fold(0.0, f64::max)
    }

    fn apply_with(&self, x: &ConeVector, pick: impl Fn(&BlockScaling) -> &DMatrix<f64>) -> ConeVector {
        assert_eq!(x.shape(), &self.shape, "scaling applied to a vector of another shape");
        let mut out = ConeVector::zeros(&self.shape);
        for (j, b) in self.blocks.iter().enumerate() {
            let m = pick(b);
            let xb = x.block(j);
            for (i, o) in out.block_mut(j).iter_mut().enumerate() {
                *o = (0..xb.len()).map(|k| m[(i, k)] * xb[k]).sum();
            }
        }
        out
    }

    /// Dense `n × n` block-diagonal `W⁻¹`.
    pub fn dense_inverse(&self) -> DMatrix<f64> {
        let n = self.shape.dim();
        let mut m = DMatrix::zeros(n, n);
        for (j, b) in self.blocks.iter().enumerate() {
            let r = self.shape.range(j);
            m.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(&b.w_inv);
        }
        m
    }
}

fn with_block(e: Error, j: usize) -> Error {
    match e {
        Error::NotInterior(m) => Error::NotInterior(format!("block {j}: {m}")),
        Error::ScalingBreakdown(m) => Error::ScalingBreakdown(format!("block {j}: {m}")),
        other => other,
    }
}

fn require_interior(x: &[f64], what: &str) -> Result<()> {
    if block::in_interior(x) {
        Ok(())
    } else {
        let [l1, l2, _, _] = block::eigenvalues(x);
        Err(Error::NotInterior(format!("{what} has lambda1 = {l1:e}, lambda2 = {l2:e}")))
    }
}

/// `λ = λ1(s)/λ1(x) = (s1 - s2)/(x1 - x2)`.
pub fn nt_lambda(x: &[f64], s: &[f64]) -> Result<f64> {
    require_interior(x, "x")?;
    require_interior(s, "s")?;
    if x.len() != s.len() {
        return Err(Error::DimensionMismatch("x and s blocks differ in length".into()));
    }
    Ok((s[0] - s[1]) / (x[0] - x[1]))
}

/// Scaling point `a` (with `a1 - a2 = 1`) such that `W = √λ W_a` satisfies
/// `W x = W⁻¹ s`, where `λ = λ1(s)/λ1(x)`.
pub fn nt_point(x: &[f64], s: &[f64]) -> Result<Vec<f64>> {
    nt_point_with_sigma(x, s).map(|(a, _)| a)
}

/// [`nt_point`] together with `σ = √det̄(a)` computed directly from the
/// pair rather than recovered from `a`.
fn nt_point_with_sigma(x: &[f64], s: &[f64]) -> Result<(Vec<f64>, f64)> {
    let lambda = nt_lambda(x, s)?;
    let n = x.len();
    // Lorentz coordinates normalised to unit determinant.
    let dx = block::det_bar_factored(x);
    let ds = block::det_bar_factored(s);
    let (rx, rs) = (dx.sqrt(), ds.sqrt());
    let xt0 = (x[0] + x[1]) / rx;
    let st0 = (s[0] + s[1]) / rs;
    let xt: Vec<f64> = x[2..].iter().map(|t| SQRT_2 * t / rx).collect();
    let st: Vec<f64> = s[2..].iter().map(|t| SQRT_2 * t / rs).collect();
    let gamma = (0.5 * (1.0 + xt0 * st0 + dot(&xt, &st))).sqrt();
    let w0 = (st0 + xt0) / (2.0 * gamma);
    let sigma = ((ds / dx).sqrt() / lambda).sqrt();
    let mut a = Vec::with_capacity(n);
    a.push(0.5 * (sigma * w0 + 1.0));
    a.push(0.5 * (sigma * w0 - 1.0));
    a.extend(st.iter().zip(&xt).map(|(si, xi)| sigma * (si - xi) / (2.0 * gamma) / SQRT_2));
    if !a.iter().all(|t| t.is_finite()) || !block::in_interior(&a) {
        return Err(Error::ScalingBreakdown(format!("scaling point is not interior: {a:?}")));
    }
    Ok((a, sigma))
}

/// Single-factor scaling point: `a` with `det(a) = det̄(a) = 1` and
/// `λ W_a² x = s`. Writing `t = a'x`, `v = s + λQx` and `P` for the swap of
/// the first two coordinates, the defining relation
/// `v/λ = 2t a + 2(t - d) P a` (with `d = x1 - x2`) inverts to
/// `a = (αv - βPv)/(λ(α² - β²))`, `α = 2t`, `β = 2(t - d)`. Taking the inner
/// product with `x` gives the quadratic
/// `8λd t² - (4λd² + 2v'x - 2(Pv)'x) t - 2d(Pv)'x = 0`. Each real root is
/// tried and accepted when `a` is interior with both determinants equal to
/// one within `1e-8`.
pub fn nt_point_closed_form(x: &[f64], s: &[f64]) -> Result<Vec<f64>> {
    let lambda = nt_lambda(x, s)?;
    let n = x.len();
    let d = x[0] - x[1];
    let v: Vec<f64> = (0..n).map(|i| s[i] + lambda * if i < 2 { x[i] } else { -x[i] }).collect();
    let mut pv = v.clone();
    pv.swap(0, 1);
    let (big_a, big_b) = (dot(&v, x), dot(&pv, x));
    let qa = 8.0 * lambda * d;
    let qb = -(4.0 * lambda * d * d + 2.0 * big_a - 2.0 * big_b);
    let qc = -2.0 * d * big_b;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Err(Error::ScalingBreakdown(format!("no real root (discriminant {disc:e})")));
    }
    let sq = disc.sqrt();
    // numerically stable pair of roots
    let q = -0.5 * (qb + qb.signum() * sq);
    let roots = [q / qa, if q != 0.0 { qc / q } else { -qb / qa }];
    let mut best: Option<(f64, Vec<f64>)> = None;
    for t in roots {
        let (al, be) = (2.0 * t, 2.0 * (t - d));
        let den = lambda * (al * al - be * be);
        if den == 0.0 || !den.is_finite() {
            continue;
        }
        let a: Vec<f64> = v.iter().zip(&pv).map(|(vi, pvi)| (al * vi - be * pvi) / den).collect();
        let (da, dba, _) = block::dets(&a);
        let err = (da - 1.0).abs().max((dba - 1.0).abs());
        if err <= 1e-8 && block::in_interior(&a) && best.as_ref().map_or(true, |(e, _)| err < *e) {
            best = Some((err, a));
        }
    }
    best.map(|(_, a)| a).ok_or_else(|| {
        Error::ScalingBreakdown(format!(
            "no admissible root: a single-factor scaling needs lambda1(s)/lambda1(x) = sqrt(detbar(s)/detbar(x)), \
             got {lambda:e} vs {:e}",
            (block::det_bar_factored(s) / block::det_bar_factored(x)).sqrt()
        ))
    })
}

/// `W_a` for a point with `a1 - a2 = 1`.
pub fn w_a_matrix(a: &[f64]) -> DMatrix<f64> {
    w_a_matrix_sigma(a, block::det_bar_factored(a).sqrt())
}

fn w_a_matrix_sigma(a: &[f64], sigma: f64) -> DMatrix<f64> {
    let n = a.len();
    let den = sigma + a[0] + a[1];
    let mut w = DMatrix::zeros(n, n);
    w[(0, 0)] = a[0];
    w[(1, 1)] = a[0];
    w[(0, 1)] = a[1];
    w[(1, 0)] = a[1];
    for i in 2..n {
        w[(0, i)] = a[i];
        w[(1, i)] = a[i];
        w[(i, 0)] = a[i];
        w[(i, 1)] = a[i];
        for k in 2..n {
            w[(i, k)] = 2.0 * a[i] * a[k] / den + if i == k { sigma } else { 0.0 };
        }
    }
    w
}

/// The point `a'` with `W_a⁻¹ = W_{a'}`: `a1' - a2' = 1`,
/// `a1' + a2' = (a1 + a2)/σ²`, `ā' = -ā/σ²`. For `σ = 1` this is `Qa`.
pub fn inverse_point(a: &[f64]) -> Vec<f64> {
    inverse_point_sigma(a, block::det_bar_factored(a).sqrt())
}

fn inverse_point_sigma(a: &[f64], sigma: f64) -> Vec<f64> {
    let s2 = sigma * sigma;
    let sum = (a[0] + a[1]) / s2;
    let mut out = Vec::with_capacity(a.len());
    out.push(0.5 * (sum + 1.0));
    out.push(0.5 * (sum - 1.0));
    out.extend(a[2..].iter().map(|t| -t / s2));
    out
}

/// `W = √λ W_a` and `W⁻¹ = W_{a'}/√λ`.
pub fn w_matrix(a: &[f64], lambda: f64) -> Result<BlockScaling> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter { name: "lambda".into(), reason: format!("must be > 0, got {lambda}") });
    }
    if a.len() < 2 {
        return Err(Error::InvalidParameter { name: "a".into(), reason: "needs at least two coordinates".into() });
    }
    if !block::in_interior(a) {
        return Err(Error::InvalidParameter { name: "a".into(), reason: format!("not strictly interior: {a:?}") });
    }
    if (a[0] - a[1] - 1.0).abs() > 1e-10 * (1.0 + a[0].abs() + a[1].abs()) {
        return Err(Error::InvalidParameter { name: "a".into(), reason: format!("needs a1 - a2 = 1, got {}", a[0] - a[1]) });
    }
    build_block(a, block::det_bar_factored(a).sqrt(), lambda)
}

fn build_block(a: &[f64], sigma: f64, lambda: f64) -> Result<BlockScaling> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::ScalingBreakdown(format!("Lorentz factor sigma = {sigma:e} is not positive")));
    }
    let r = lambda.sqrt();
    let w = w_a_matrix_sigma(a, sigma) * r;
    let w_inv = w_a_matrix_sigma(&inverse_point_sigma(a, sigma), 1.0 / sigma) / r;
    Ok(BlockScaling { lambda, a: a.to_vec(), sigma, w, w_inv })
}

/// `v = W x/√μ`, verified against `W⁻¹ s/√μ` to relative `1e-9`.
pub fn scaled_v(x: &ConeVector, s: &ConeVector, mu: f64, w: &NtScaling) -> Result<ConeVector> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter { name: "mu".into(), reason: format!("must be > 0, got {mu}") });
    }
    x.check_same_shape(s)?;
    let r = mu.sqrt();
    let v = w.apply(x).scaled(1.0 / r);
    let v2 = w.apply_inverse(s).scaled(1.0 / r);
    let gap = v.max_abs_diff(&v2);
    // Forming W x and W⁻¹ s loses about ε‖W‖‖x‖, which dominates once the
    // iterates approach the boundary and W becomes ill-conditioned.
    let rounding = 1e3 * f64::EPSILON * w.product_scale(x, s) / r;
    if gap > 1e-9 * (1.0 + v.norm()) + rounding {
        return Err(Error::InconsistentScaling(format!("|W x - W^-1 s|/sqrt(mu) = {gap:e}")));
    }
    for (j, b) in v.blocks().enumerate() {
        if !(block::lambda_min(b) > 0.0) {
            return Err(Error::NotInterior(format!("scaled point block {j} left the cone")));
        }
    }
    Ok(v)
}

/// `(I + β a a')^(1/2) = I + β a a'/(1 + √(1 + β a'a))`.
pub fn half_power_rank_one(a: &[f64], beta: f64) -> DMatrix<f64> {
    let n = a.len();
    let c = beta / (1.0 + (1.0 + beta * dot(a, a)).sqrt());
    DMatrix::from_fn(n, n, |i, k| c * a[i] * a[k] + if i == k { 1.0 } else { 0.0 })
}

/// `Q = diag(1, 1, -1, ..., -1)`, the matrix of `det`.
pub fn q_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| if i != k { 0.0 } else if i < 2 { 1.0 } else { -1.0 })
}

/// `Q̄ = [[1, 1, 0], [1, 1, 0], [0, 0, -2I]]`, the matrix of `det̄`.
pub fn q_bar_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| match (i < 2, k < 2) {
        (true, true) => 1.0,
        (false, false) if i == k => -2.0,
        _ => 0.0,
    })
}

/// `P`: swaps the first two coordinates.
pub fn p_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| match (i, k) {
        (0, 1) | (1, 0) => 1.0,
        _ if i == k && i >= 2 => 1.0,
        _ => 0.0,
    })
}

/// `P̄ = Q P`, the matrix of `det̲`.
pub fn p_bar_matrix(n: usize) -> DMatrix<f64> {
    q_matrix(n) * p_matrix(n)
}

/// A random single-factor scaling point: tail drawn by the caller,
/// `a1 + a2 = √(1 + 2‖ā‖²)`, `a1 - a2 = 1`.
pub fn single_factor_point(tail: &[f64]) -> Vec<f64> {
    let c = (1.0 + 2.0 * dot(tail, tail)).sqrt();
    let mut a = vec![0.5 * (c + 1.0), 0.5 * (c - 1.0)];
    a.extend_from_slice(tail);
    a
}
