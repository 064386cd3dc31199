//! Reduction of a type-2 instance to an ordinary second-order cone program.
//!
//! For a block `x ∈ ℝⁿ` the auxiliary variables are
//!
//! ```text
//! z1 = x1 - x2,   z̄1 = (x1 + x2)/√2,   z̄i = x(i+1) for i = 2..n-1
//! ```
//!
//! so `x` lies in the type-2 cone exactly when `z1 >= 0` and `z̄` lies in
//! the Lorentz cone `z̄1 >= ‖z̄2..‖`. The stacked variable is
//! `z = (x, z1, z̄)` with constraint matrix
//!
//! ```text
//! [ A    0   0 ]
//! [ fᵀ  -1   0 ]      fᵀ = (1, -1, 0, …, 0)
//! [ Á    0  -I ]      Á  = [[1/√2, 1/√2, 0], [0, 0, I]]
//! ```
//!
//! The row vector `fᵀ` is written `e` in some presentations; it is not the
//! Jordan unit. Multi-block problems get one `(z1, z̄)` group and one set of
//! auxiliary rows per block.
//!
//! The auxiliary rows number `1 + (n - 1) = n` per block, so `Â` has
//! `m + n` rows and `2n` columns. The original `x` carries no sign
//! constraint of its own: `x2` is negative for points such as `(1, -½, 0)`
//! that lie in the type-2 cone, so `x` is tagged free.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jordan::{block, ConeVector};
use crate::newton::ProblemData;

/// Cone attached to a contiguous range of `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    Free,
    Nonneg,
    /// `z1 >= ‖z2..‖`.
    Lorentz,
}

impl ConeKind {
    pub fn tag(self) -> &'static str {
        match self {
            ConeKind::Free => "free",
            ConeKind::Nonneg => "nonneg",
            ConeKind::Lorentz => "lorentz",
        }
    }
}

/// A cone tag with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeBlock {
    pub kind: ConeKind,
    pub dim: usize,
}

/// Where the auxiliary variables of one type-2 block sit in `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockIndex {
    /// Range of the block inside `x` (and inside `z`).
    pub x: std::ops::Range<usize>,
    /// Index of `z1`.
    pub z1: usize,
    /// Range of `z̄`.
    pub z_bar: std::ops::Range<usize>,
}

/// The ordinary instance `min c̄'z  s.t.  Âz = b̂`, `z` in the tagged cones.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedProblem {
    pub a_hat: DMatrix<f64>,
    pub b_hat: DVector<f64>,
    pub c_bar: DVector<f64>,
    /// Cone tags covering `z` in order.
    pub cones: Vec<ConeBlock>,
    pub index: Vec<BlockIndex>,
    /// Length of the original `x`.
    pub n: usize,
    pub m: usize,
}

impl TransformedProblem {
    /// `‖Âz - b̂‖`.
    pub fn residual(&self, z: &DVector<f64>) -> f64 {
        (&self.a_hat * z - &self.b_hat).norm()
    }

    /// Largest violation of the cone tags; zero when every tag holds.
    pub fn cone_violation(&self, z: &DVector<f64>) -> f64 {
        let mut worst = 0.0f64;
        let mut at = 0;
        for c in &self.cones {
            let part = &z.as_slice()[at..at + c.dim];
            let v = match c.kind {
                ConeKind::Free => 0.0,
                ConeKind::Nonneg => part.iter().fold(0.0f64, |w, t| w.max(-t)),
                ConeKind::Lorentz => {
                    let tail = part[1..].iter().map(|t| t * t).sum::<f64>().sqrt();
                    (tail - part[0]).max(0.0)
                }
            };
            worst = worst.max(v);
            at += c.dim;
        }
        worst
    }

    pub fn objective(&self, z: &DVector<f64>) -> f64 {
        // sequential sum so the zero tail leaves the original value untouched
        self.c_bar.iter().zip(z.iter()).map(|(c, z)| c * z).sum()
    }
}

/// Builds the ordinary instance.
pub fn to_soco(p: &ProblemData) -> TransformedProblem {
    let (m, n) = (p.m(), p.n());
    let shape = &p.shape;
    let rows = m + n;
    let cols = 2 * n;
    let mut a_hat = DMatrix::zeros(rows, cols);
    a_hat.view_mut((0, 0), (m, n)).copy_from(&p.a);

    let mut cones = vec![ConeBlock { kind: ConeKind::Free, dim: n }];
    let mut index = Vec::with_capacity(shape.num_blocks());
    let mut row = m;
    let mut col = n;
    for j in 0..shape.num_blocks() {
        let r = shape.range(j);
        let nj = r.len();
        let (z1, z_bar) = (col, col + 1..col + nj);
        // fᵀ x - z1 = 0
        a_hat[(row, r.start)] = 1.0;
        a_hat[(row, r.start + 1)] = -1.0;
        a_hat[(row, z1)] = -1.0;
        row += 1;
        // Á x - z̄ = 0
        a_hat[(row, r.start)] = FRAC_1_SQRT_2;
        a_hat[(row, r.start + 1)] = FRAC_1_SQRT_2;
        a_hat[(row, z_bar.start)] = -1.0;
        row += 1;
        for i in 2..nj {
            a_hat[(row, r.start + i)] = 1.0;
            a_hat[(row, z_bar.start + i - 1)] = -1.0;
            row += 1;
        }
        cones.push(ConeBlock { kind: ConeKind::Nonneg, dim: 1 });
        cones.push(ConeBlock { kind: ConeKind::Lorentz, dim: nj - 1 });
        index.push(BlockIndex { x: r, z1, z_bar: z_bar.clone() });
        col = z_bar.end;
    }
    debug_assert_eq!(row, rows);
    debug_assert_eq!(col, cols);

    let mut b_hat = DVector::zeros(rows);
    b_hat.rows_mut(0, m).copy_from(&p.b);
    let mut c_bar = DVector::zeros(cols);
    c_bar.rows_mut(0, n).copy_from(&p.c);
    TransformedProblem { a_hat, b_hat, c_bar, cones, index, n, m }
}

/// Pushes `x` through the defining equations to obtain `z`.
pub fn lift_point(t: &TransformedProblem, x: &ConeVector) -> Result<DVector<f64>> {
    if x.len() != t.n {
        return Err(Error::DimensionMismatch(format!("x has length {} but the instance has n = {}", x.len(), t.n)));
    }
    let mut z = DVector::zeros(2 * t.n);
    z.rows_mut(0, t.n).copy_from_slice(x.data());
    for bi in &t.index {
        let xb = &x.data()[bi.x.clone()];
        z[bi.z1] = xb[0] - xb[1];
        z[bi.z_bar.start] = (xb[0] + xb[1]) * FRAC_1_SQRT_2;
        for (i, xi) in xb[2..].iter().enumerate() {
            z[bi.z_bar.start + 1 + i] = *xi;
        }
    }
    Ok(z)
}

/// Recovers `x` as the leading coordinates of `z` and certifies type-2
/// membership up to `1e-8 (1 + ‖x_j‖)` per block.
pub fn map_solution(t: &TransformedProblem, z: &DVector<f64>) -> Result<ConeVector> {
    if z.len() != 2 * t.n {
        return Err(Error::DimensionMismatch(format!("z has length {} but the instance has 2n = {}", z.len(), 2 * t.n)));
    }
    let sizes = t.index.iter().map(|b| b.x.len()).collect();
    let shape = crate::jordan::BlockShape::new(sizes)?;
    let x = ConeVector::new(shape, z.as_slice()[..t.n].to_vec())?;
    for (j, xb) in x.blocks().enumerate() {
        let tol = 1e-8 * (1.0 + crate::jordan::norm(xb));
        let lmin = block::lambda_min(xb);
        if lmin < -tol {
            return Err(Error::Membership(format!("block {j} has smallest eigenvalue {lmin:e}")));
        }
    }
    Ok(x)
}

/// Size comparison between the type-2 and the transformed instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupReport {
    pub m: usize,
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    /// Row count stated in the usual presentation, `m + 2n - 1`.
    pub stated_rows: usize,
    /// Column count stated in the usual presentation, `2n`.
    pub stated_cols: usize,
    /// `rows / m`.
    pub row_growth: f64,
    /// Growth of the normal-equation system, `(rows / m)²` entries.
    pub normal_equation_growth: f64,
}

/// `(m + 2n - 1, 2n)`: the dimensions as usually stated for one block.
pub fn stated_dimensions(m: usize, n: usize) -> (usize, usize) {
    (m + 2 * n - 1, 2 * n)
}

/// Dimensions actually produced by [`to_soco`].
pub fn actual_dimensions(m: usize, n: usize) -> (usize, usize) {
    (m + n, 2 * n)
}

pub fn blowup_report(p: &ProblemData) -> BlowupReport {
    let (m, n) = (p.m(), p.n());
    let (rows, cols) = actual_dimensions(m, n);
    let (stated_rows, stated_cols) = stated_dimensions(m, n);
    let row_growth = rows as f64 / m as f64;
    BlowupReport { m, n, rows, cols, stated_rows, stated_cols, row_growth, normal_equation_growth: row_growth * row_growth }
}
