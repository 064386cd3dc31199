//! Scaled Newton system: `Ā = A W⁻¹/√μ`, the normal equations for `Δy`,
//! back substitution for the scaled directions and unscaling.
//!
//! The scaled system is
//!
//! ```text
//! Ā d_x = 0,   Āᵀ Δy + d_s = 0,   d_x + d_s = -ψ'(v)
//! ```
//!
//! The minus sign makes the directions descent directions for the barrier.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jordan::{jordan_product, lift_positive_fn, BlockShape, ConeVector};
use crate::kernel::{gradient, Kernel};
use crate::scaling::NtScaling;

/// Data of `min c'x  s.t.  Ax = b, x ∈ Υ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub shape: BlockShape,
}

impl ProblemData {
    /// Validates dimensions and full row rank of `A`.
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>, shape: BlockShape) -> Result<Self> {
        let (m, n) = a.shape();
        if n != shape.dim() {
            return Err(Error::DimensionMismatch(format!("A has {n} columns but the blocks sum to {}", shape.dim())));
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch(format!("b has length {} but A has {m} rows", b.len())));
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch(format!("c has length {} but A has {n} columns", c.len())));
        }
        if m == 0 || m > n {
            return Err(Error::DimensionMismatch(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
        }
        if let Some(bad) = a.iter().chain(b.iter()).chain(c.iter()).find(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter { name: "problem data".into(), reason: format!("non-finite entry {bad}") });
        }
        let sv = a.clone().singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if !(smin > smax * (m.max(n) as f64) * f64::EPSILON * 16.0) {
            return Err(Error::RankDeficient(format!(
                "A does not have full row rank (singular values in [{smin:e}, {smax:e}])"
            )));
        }
        Ok(Self { a, b, c, shape })
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    /// `c'x`.
    pub fn objective(&self, x: &ConeVector) -> f64 {
        self.c.iter().zip(x.data()).map(|(c, x)| c * x).sum()
    }
}

/// Scaled and unscaled search directions.
#[derive(Debug, Clone, PartialEq)]
pub struct Directions {
    pub dx_scaled: ConeVector,
    pub ds_scaled: ConeVector,
    pub dy: DVector<f64>,
    pub dx: ConeVector,
    pub ds: ConeVector,
}

/// `Ā = A W⁻¹/√μ`.
pub fn build_a_bar(p: &ProblemData, w: &NtScaling, mu: f64) -> DMatrix<f64> {
    let r = mu.sqrt();
    let mut out = DMatrix::zeros(p.m(), p.n());
    for (j, blk) in w.blocks().iter().enumerate() {
        let range = p.shape.range(j);
        let cols = p.a.columns(range.start, range.len()) * &blk.w_inv / r;
        out.columns_mut(range.start, range.len()).copy_from(&cols);
    }
    out
}

fn to_dvector(x: &ConeVector) -> DVector<f64> {
    DVector::from_column_slice(x.data())
}

fn from_dvector(shape: &BlockShape, v: &DVector<f64>) -> ConeVector {
    ConeVector::new(shape.clone(), v.iter().copied().collect()).expect("length follows the shape")
}

/// Solves the scaled system by Cholesky on `Ā Āᵀ` with one round of
/// iterative refinement, then unscales: `Δx = √μ W⁻¹ d_x`,
/// `Δs = √μ W d_s`.
pub fn solve_directions(p: &ProblemData, w: &NtScaling, mu: f64, v: &ConeVector, k: &dyn Kernel) -> Result<Directions> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter { name: "mu".into(), reason: format!("must be > 0, got {mu}") });
    }
    let g = to_dvector(&gradient(v, k)?);
    let a_bar = build_a_bar(p, w, mu);
    let normal = &a_bar * a_bar.transpose();
    let chol = normal
        .clone()
        .cholesky()
        .ok_or_else(|| Error::RankDeficient("normal equations are not positive definite".into()))?;
    let rhs = &a_bar * &g;
    let mut dy = chol.solve(&rhs);
    let residual = &rhs - &normal * &dy;
    dy += chol.solve(&residual);
    let ds_scaled = -(a_bar.transpose() * &dy);
    let dx_scaled = -&g - &ds_scaled;
    let dx_scaled = from_dvector(&p.shape, &dx_scaled);
    let ds_scaled = from_dvector(&p.shape, &ds_scaled);
    let r = mu.sqrt();
    let dx = w.apply_inverse(&dx_scaled).scaled(r);
    let ds = w.apply(&ds_scaled).scaled(r);
    Ok(Directions { dx_scaled, ds_scaled, dy, dx, ds })
}

/// Linear residuals and complementarity gap of a triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `‖Ax - b‖`.
    pub primal: f64,
    /// `‖Aᵀy + s - c‖`.
    pub dual: f64,
    /// `x's`.
    pub gap: f64,
}

/// `(‖Ax - b‖, ‖Aᵀy + s - c‖, x's)`.
pub fn residuals(p: &ProblemData, x: &ConeVector, y: &DVector<f64>, s: &ConeVector) -> Residuals {
    let xv = to_dvector(x);
    let sv = to_dvector(s);
    Residuals {
        primal: (&p.a * &xv - &p.b).norm(),
        dual: (p.a.transpose() * y + &sv - &p.c).norm(),
        gap: xv.dot(&sv),
    }
}

/// Derivative of `f1(α) = ½[Ψ(v + α d_x) + Ψ(v + α d_s)]`, namely
/// `ψ'(v + α d_x)' d_x + ψ'(v + α d_s)' d_s`.
pub fn model_slope(v: &ConeVector, dx: &ConeVector, ds: &ConeVector, alpha: f64, k: &dyn Kernel) -> Result<f64> {
    let gx = gradient(&v.axpy(alpha, dx), k)?;
    let gs = gradient(&v.axpy(alpha, ds), k)?;
    Ok(gx.dot(dx) + gs.dot(ds))
}

/// Second-order model term
/// `½ Tr((d_x ⋄ d_x) ⋄ ψ''(v + α d_x)) + ½ Tr((d_s ⋄ d_s) ⋄ ψ''(v + α d_s))`.
pub fn model_curvature(v: &ConeVector, dx: &ConeVector, ds: &ConeVector, alpha: f64, k: &dyn Kernel) -> Result<f64> {
    let hx = lift_positive_fn(&v.axpy(alpha, dx), "psi''", |t| k.d2(t))?;
    let hs = lift_positive_fn(&v.axpy(alpha, ds), "psi''", |t| k.d2(t))?;
    let sx = jordan_product(dx, dx)?;
    let ss = jordan_product(ds, ds)?;
    Ok(sx.dot(&hx) + ss.dot(&hs))
}
