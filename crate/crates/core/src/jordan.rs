//! Type-2 cone algebra: block shapes, cone vectors, the Jordan product,
//! eigenstructure, determinants, traces, membership and spectral lifting of
//! scalar functions.
//!
//! Each block of dimension `n >= 2` holds coordinates `(x1, x2, x3..xn)`. The
//! tail `x3..xn` is empty when `n = 2`. The product on one block is
//!
//! ```text
//! x ⋄ y = [x'y, x2 y1 + x1 y2 + tail(x)'tail(y), tail(x)(y1 + y2) + tail(y)(x1 + x2)]
//! ```
//!
//! with unit `e = (1, 0, ..., 0)`. Every vector has the spectral form
//! `x = λ1 v1 + λ2 v2 + λ4 v4` with `λ1 = x1 - x2` and
//! `λ2, λ4 = x1 + x2 ∓ √2 ‖tail(x)‖`.

use std::ops::Range;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Block structure of a product of type-2 cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockShape {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockShape {
    /// Builds a shape from block dimensions. Every block needs at least two
    /// coordinates and there must be at least one block.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidShape("at least one block is required".into()));
        }
        if let Some((j, &n)) = sizes.iter().enumerate().find(|(_, &n)| n < 2) {
            return Err(Error::InvalidShape(format!(
                "block {j} has dimension {n}; every block needs dimension >= 2"
            )));
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &n in &sizes {
            acc += n;
            offsets.push(acc);
        }
        Ok(Self { sizes, offsets })
    }

    /// A shape with `blocks` copies of a block of dimension `size`.
    pub fn uniform(blocks: usize, size: usize) -> Result<Self> {
        Self::new(vec![size; blocks])
    }

    /// Block dimensions `n_1, ..., n_N`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of blocks `N`.
    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    /// Total dimension `n = Σ n_j`.
    pub fn dim(&self) -> usize {
        *self.offsets.last().expect("offsets always hold at least one entry")
    }

    /// Coordinate range of block `j`. Panics when `j` is out of range.
    pub fn range(&self, j: usize) -> Range<usize> {
        self.offsets[j]..self.offsets[j + 1]
    }

    /// Returns an error unless `j` names a block of this shape.
    pub fn check_block(&self, j: usize) -> Result<()> {
        if j < self.num_blocks() {
            Ok(())
        } else {
            Err(Error::BlockIndex { index: j, blocks: self.num_blocks() })
        }
    }
}

/// A real vector partitioned according to a [`BlockShape`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConeVector {
    shape: BlockShape,
    data: Vec<f64>,
}

impl ConeVector {
    /// Wraps coordinates; the length must equal the shape's dimension.
    pub fn new(shape: BlockShape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.dim() {
            return Err(Error::DimensionMismatch(format!(
                "data has length {} but the shape has dimension {}",
                data.len(),
                shape.dim()
            )));
        }
        Ok(Self { shape, data })
    }

    /// Builds a vector from per-block coordinate lists.
    pub fn from_blocks(blocks: &[Vec<f64>]) -> Result<Self> {
        let shape = BlockShape::new(blocks.iter().map(Vec::len).collect())?;
        Ok(Self { shape, data: blocks.concat() })
    }

    /// The zero vector.
    pub fn zeros(shape: &BlockShape) -> Self {
        Self { shape: shape.clone(), data: vec![0.0; shape.dim()] }
    }

    /// The unit element `e`, equal to `(1, 0, ..., 0)` on every block.
    pub fn unit(shape: &BlockShape) -> Self {
        let mut e = Self::zeros(shape);
        for j in 0..shape.num_blocks() {
            e.data[shape.range(j).start] = 1.0;
        }
        e
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Coordinates of block `j`. Panics when `j` is out of range.
    pub fn block(&self, j: usize) -> &[f64] {
        &self.data[self.shape.range(j)]
    }

    /// Mutable coordinates of block `j`. Panics when `j` is out of range.
    pub fn block_mut(&mut self, j: usize) -> &mut [f64] {
        let r = self.shape.range(j);
        &mut self.data[r]
    }

    /// Iterator over the blocks.
    pub fn blocks(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.shape.num_blocks()).map(move |j| self.block(j))
    }

    /// Errors unless `other` has the same block structure.
    pub fn check_same_shape(&self, other: &ConeVector) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "block shapes differ: {:?} vs {:?}",
                self.shape.sizes(),
                other.shape.sizes()
            )))
        }
    }

    /// Euclidean inner product. Panics on a length mismatch.
    pub fn dot(&self, other: &ConeVector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot product of vectors with different lengths");
        dot(&self.data, &other.data)
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        norm(&self.data)
    }

    /// `alpha * self`.
    pub fn scaled(&self, alpha: f64) -> ConeVector {
        self.map(|t| alpha * t)
    }

    /// `self + alpha * other`. Panics on a length mismatch.
    pub fn axpy(&self, alpha: f64, other: &ConeVector) -> ConeVector {
        assert_eq!(self.len(), other.len(), "axpy on vectors with different lengths");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        ConeVector { shape: self.shape.clone(), data }
    }

    /// `self - other`. Panics on a length mismatch.
    pub fn sub(&self, other: &ConeVector) -> ConeVector {
        self.axpy(-1.0, other)
    }

    /// `self + other`. Panics on a length mismatch.
    pub fn add(&self, other: &ConeVector) -> ConeVector {
        self.axpy(1.0, other)
    }

    /// Applies `f` coordinate-wise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ConeVector {
        ConeVector { shape: self.shape.clone(), data: self.data.iter().map(|&t| f(t)).collect() }
    }

    /// Largest absolute coordinate difference to `other`.
    pub fn max_abs_diff(&self, other: &ConeVector) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Single-block formulas on raw coordinate slices. The public functions of
/// the parent module apply these block by block.
pub mod block {
    use std::f64::consts::SQRT_2;

    use super::{dot, norm};

    /// Euclidean norm of the tail `x3..xn`.
    pub fn tail_norm(x: &[f64]) -> f64 {
        norm(&x[2..])
    }

    /// Jordan product of two blocks of equal length.
    pub fn product(x: &[f64], y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), y.len());
        let mut out = Vec::with_capacity(x.len());
        let (xs, ys) = (x[0] + x[1], y[0] + y[1]);
        out.push(dot(x, y));
        out.push(x[1] * y[0] + x[0] * y[1] + dot(&x[2..], &y[2..]));
        out.extend(x[2..].iter().zip(&y[2..]).map(|(xi, yi)| xi * ys + yi * xs));
        out
    }

    /// Eigenvalues `(λ1, λ2, λ3, λ4)`.
    pub fn eigenvalues(x: &[f64]) -> [f64; 4] {
        let u = x[0] + x[1];
        let r = SQRT_2 * tail_norm(x);
        [x[0] - x[1], u - r, u, u + r]
    }

    /// Determinant forms `(det, det̄, det̲)` evaluated from their definitions.
    pub fn dets(x: &[f64]) -> (f64, f64, f64) {
        let t2 = dot(&x[2..], &x[2..]);
        let det = x[0] * x[0] + x[1] * x[1] - t2;
        let u = x[0] + x[1];
        let det_bar = u * u - 2.0 * t2;
        let det_under = 2.0 * x[0] * x[1] - t2;
        (det, det_bar, det_under)
    }

    /// `det̄(x) = λ2 λ4` evaluated in factored form, which stays accurate
    /// close to the cone boundary.
    pub fn det_bar_factored(x: &[f64]) -> f64 {
        let [_, l2, _, l4] = eigenvalues(x);
        l2 * l4
    }

    /// Smallest of `λ1` and `λ2`, i.e. the smallest eigenvalue.
    pub fn lambda_min(x: &[f64]) -> f64 {
        let [l1, l2, _, _] = eigenvalues(x);
        l1.min(l2)
    }

    /// Largest of `λ1` and `λ4`, i.e. the largest eigenvalue.
    pub fn lambda_max(x: &[f64]) -> f64 {
        let [l1, _, _, l4] = eigenvalues(x);
        l1.max(l4)
    }

    /// Closed-cone membership by exact inequalities on computed values.
    pub fn in_cone(x: &[f64]) -> bool {
        let u = x[0] + x[1];
        u * u >= 2.0 * dot(&x[2..], &x[2..]) && x[0] >= x[1] && u >= 0.0
    }

    /// Interior membership: `λ1 > η` and `λ2 > η` with
    /// `η = 1e-12 (1 + ‖x‖)`.
    pub fn in_interior(x: &[f64]) -> bool {
        let eta = 1e-12 * (1.0 + norm(x));
        let [l1, l2, _, _] = eigenvalues(x);
        l1 > eta && l2 > eta
    }

    /// Unit tail direction, or the first tail axis when the tail vanishes.
    pub fn tail_direction(x: &[f64]) -> Vec<f64> {
        let t = tail_norm(x);
        let mut u = vec![0.0; x.len() - 2];
        if t > 0.0 {
            for (ui, xi) in u.iter_mut().zip(&x[2..]) {
                *ui = xi / t;
            }
        } else if let Some(first) = u.first_mut() {
            *first = 1.0;
        }
        u
    }

    /// `λ1 v1 + λ2 v2 + λ4 v4` for the frame built on the unit tail
    /// direction `dir`.
    pub fn compose(l1: f64, l2: f64, l4: f64, dir: &[f64]) -> Vec<f64> {
        let mid = 0.25 * (l2 + l4);
        let coef = (l4 - l2) / (2.0 * SQRT_2);
        let mut out = Vec::with_capacity(dir.len() + 2);
        out.push(0.5 * l1 + mid);
        out.push(-0.5 * l1 + mid);
        out.extend(dir.iter().map(|d| coef * d));
        out
    }

    /// `f(λ1) v1 + f(λ2) v2 + f(λ4) v4`.
    pub fn lift(x: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
        let [l1, l2, _, l4] = eigenvalues(x);
        compose(f(l1), f(l2), f(l4), &tail_direction(x))
    }
}

/// Eigenvalues, unit tail direction of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda4: f64,
    /// Unit vector of length `n_j - 2`; empty when `n_j = 2`.
    pub tail_direction: Vec<f64>,
}

/// Per-block spectral data `(λ1, λ2, λ4)` together with the tail direction
/// that fixes the frames `v1, v2, v4`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub shape: BlockShape,
    pub blocks: Vec<BlockSpectrum>,
}

/// Jordan product `x ⋄ y`, block by block.
pub fn jordan_product(x: &ConeVector, y: &ConeVector) -> Result<ConeVector> {
    x.check_same_shape(y)?;
    let mut data = Vec::with_capacity(x.len());
    for j in 0..x.shape.num_blocks() {
        data.extend(block::product(x.block(j), y.block(j)));
    }
    Ok(ConeVector { shape: x.shape.clone(), data })
}

/// Arrow matrix `R(x)` of block `j`, the matrix of `y ↦ x ⋄ y`.
pub fn arrow_matrix(x: &ConeVector, j: usize) -> Result<DMatrix<f64>> {
    x.shape.check_block(j)?;
    Ok(block_arrow_matrix(x.block(j)))
}

/// Arrow matrix of a raw block.
pub fn block_arrow_matrix(x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let xs = x[0] + x[1];
    let mut r = DMatrix::zeros(n, n);
    r[(0, 0)] = x[0];
    r[(0, 1)] = x[1];
    r[(1, 0)] = x[1];
    r[(1, 1)] = x[0];
    for i in 2..n {
        r[(0, i)] = x[i];
        r[(i, 0)] = x[i];
        r[(1, i)] = x[i];
        r[(i, 1)] = x[i];
        r[(i, i)] = xs;
    }
    r
}

/// Eigenvalues `(λ1, λ2, λ3, λ4)` of block `j`.
pub fn eigenvalues(x: &ConeVector, j: usize) -> Result<[f64; 4]> {
    x.shape.check_block(j)?;
    Ok(block::eigenvalues(x.block(j)))
}

/// Spectral decomposition of every block.
pub fn decompose(x: &ConeVector) -> SpectralDecomposition {
    let blocks = x
        .blocks()
        .map(|b| {
            let [l1, l2, _, l4] = block::eigenvalues(b);
            BlockSpectrum { lambda1: l1, lambda2: l2, lambda4: l4, tail_direction: block::tail_direction(b) }
        })
        .collect();
    SpectralDecomposition { shape: x.shape.clone(), blocks }
}

/// Inverse of [`decompose`].
pub fn reconstruct(d: &SpectralDecomposition) -> ConeVector {
    let mut data = Vec::with_capacity(d.shape.dim());
    for b in &d.blocks {
        data.extend(block::compose(b.lambda1, b.lambda2, b.lambda4, &b.tail_direction));
    }
    ConeVector { shape: d.shape.clone(), data }
}

/// `Tr(x) = Σ_j 2 x1^(j)`.
pub fn trace(x: &ConeVector) -> f64 {
    x.blocks().map(|b| 2.0 * b[0]).sum()
}

/// `(det, det̄, det̲)` of block `j`.
pub fn dets(x: &ConeVector, j: usize) -> Result<(f64, f64, f64)> {
    x.shape.check_block(j)?;
    Ok(block::dets(x.block(j)))
}

/// Membership in the product cone; `strict` asks for the interior.
pub fn membership(x: &ConeVector, strict: bool) -> bool {
    if strict {
        x.blocks().all(block::in_interior)
    } else {
        x.blocks().all(block::in_cone)
    }
}

/// The unit element of the product cone.
pub fn unit(shape: &BlockShape) -> ConeVector {
    ConeVector::unit(shape)
}

/// Smallest eigenvalue over all blocks.
pub fn lambda_min(x: &ConeVector) -> f64 {
    x.blocks().map(block::lambda_min).fold(f64::INFINITY, f64::min)
}

/// Spectral lifting `f(x) = Σ f(λ_i) v_i` of a scalar map defined on all of
/// the real line.
pub fn lift_scalar_fn(x: &ConeVector, f: impl Fn(f64) -> f64) -> ConeVector {
    let mut data = Vec::with_capacity(x.len());
    for b in x.blocks() {
        data.extend(block::lift(b, &f));
    }
    ConeVector { shape: x.shape.clone(), data }
}

/// Spectral lifting of a scalar map defined only for positive arguments.
/// Fails with a domain violation naming `f_name` when an eigenvalue is not
/// positive.
pub fn lift_positive_fn(x: &ConeVector, f_name: &str, f: impl Fn(f64) -> f64) -> Result<ConeVector> {
    for b in x.blocks() {
        let l = block::lambda_min(b);
        if !(l > 0.0) {
            return Err(Error::DomainViolation { function: f_name.to_string(), value: l });
        }
    }
    Ok(lift_scalar_fn(x, f))
}

/// Norm of a lifted vector computed from the eigenvalue images:
/// `‖f(x)‖ = ½ √(2 f(λ1)² + f(λ2)² + f(λ4)²)` per block.
pub fn lifted_norm(x: &ConeVector, f: impl Fn(f64) -> f64) -> f64 {
    x.blocks()
        .map(|b| {
            let [l1, l2, _, l4] = block::eigenvalues(b);
            0.25 * (2.0 * f(l1).powi(2) + f(l2).powi(2) + f(l4).powi(2))
        })
        .sum::<f64>()
        .sqrt()
}
