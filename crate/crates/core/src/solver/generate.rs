//! Seeded random instances with a known optimal pair.
//!
//! A strictly complementary pair `(x*, s*)` is built block by block from
//! its spectral data and scaled so that `Σ (x*_1 + s*_1) = N`. With
//! `d = e - x*` and `g = e - s*` this makes `g'd = 0`. The first row of `A`
//! is `g`, the remaining rows are Gaussian rows projected onto the
//! orthogonal complement of `d`. Then `b = Ax*` and `c = A'y* + s*` make
//! `x = e`, `s = e`, `y = y* - e_1` strictly feasible and central at
//! `μ = 1`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::StartPoint;
use crate::error::{Error, Result};
use crate::jordan::{block, BlockShape, ConeVector};
use crate::newton::ProblemData;

/// Which starting point accompanies the instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InstanceKind {
    /// `x = s = e`, on the central path at `μ = 1`.
    CentralStart,
    /// `x = (1 - w) e + w x*`, `s = e`, off the central path for `w > 0`.
    /// The weight must lie in `[0, 1)`.
    OffCentral { weight: f64 },
}

/// Known optimal triple with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub x: ConeVector,
    pub y: DVector<f64>,
    pub s: ConeVector,
    /// `c'x* = b'y*`.
    pub objective: f64,
}

/// A generated problem with a strictly feasible start.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub problem: ProblemData,
    pub start: StartPoint,
    pub certificate: Option<Certificate>,
}

const RANK_RETRIES: usize = 20;

fn unit_direction(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if len == 0 {
            return v;
        }
        if n > 1e-8 {
            return v.into_iter().map(|t| t / n).collect();
        }
    }
}

/// Complementary blocks: the orthant eigenvalue goes to one side and the
/// Lorentz pair splits into opposite boundary rays (or, for blocks of size
/// two, to one side).
fn complementary_pair(rng: &mut ChaCha8Rng, shape: &BlockShape) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(shape.dim());
    let mut s = Vec::with_capacity(shape.dim());
    for &nj in shape.sizes() {
        let dir = unit_direction(rng, nj - 2);
        let a: f64 = rng.gen_range(0.5..2.0);
        let b: f64 = rng.gen_range(0.5..2.0);
        let (xl1, sl1) = if rng.gen_bool(0.5) { (a, 0.0) } else { (0.0, a) };
        let ((xl2, xl4), (sl2, sl4)) = if nj == 2 {
            if rng.gen_bool(0.5) {
                ((b, b), (0.0, 0.0))
            } else {
                ((0.0, 0.0), (b, b))
            }
        } else {
            let c: f64 = rng.gen_range(0.5..2.0);
            ((0.0, b), (c, 0.0))
        };
        x.extend(block::compose(xl1, xl2, xl4, &dir));
        s.extend(block::compose(sl1, sl2, sl4, &dir));
    }
    (x, s)
}

/// Builds a seeded instance with `m` equality constraints over `shape`.
/// Needs `1 <= m < n`, since every row of `A` is orthogonal to `e - x*`.
pub fn generate_instance(shape: &BlockShape, m: usize, seed: u64, kind: InstanceKind) -> Result<GeneratedInstance> {
    let n = shape.dim();
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter { name: "m".into(), reason: format!("need 1 <= m < n = {n}, got {m}") });
    }
    if let InstanceKind::OffCentral { weight } = kind {
        if !(0.0..1.0).contains(&weight) {
            return Err(Error::InvalidParameter { name: "weight".into(), reason: format!("must lie in [0,1), got {weight}") });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nb = shape.num_blocks() as f64;
    let e = ConeVector::unit(shape);

    for _ in 0..RANK_RETRIES {
        let (mut xs, mut ss) = complementary_pair(&mut rng, shape);
        let total: f64 = shape.sizes().iter().enumerate().map(|(j, _)| xs[shape.range(j).start] + ss[shape.range(j).start]).sum();
        let f = nb / total;
        xs.iter_mut().chain(ss.iter_mut()).for_each(|t| *t *= f);
        let x_star = ConeVector::new(shape.clone(), xs)?;
        let s_star = ConeVector::new(shape.clone(), ss)?;
        let d = DVector::from_column_slice(e.sub(&x_star).data());
        let g = DVector::from_column_slice(e.sub(&s_star).data());
        let dd = d.dot(&d);

        let mut a = DMatrix::<f64>::zeros(m, n);
        a.row_mut(0).copy_from(&g.transpose());
        for i in 1..m {
            let mut r = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
            if dd > 0.0 {
                let coef = r.dot(&d) / dd;
                r.axpy(-coef, &d, 1.0);
            }
            a.row_mut(i).copy_from(&r.transpose());
        }
        let y_star = DVector::from_iterator(m, (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let xv = DVector::from_column_slice(x_star.data());
        let sv = DVector::from_column_slice(s_star.data());
        let b = &a * &xv;
        let c = a.transpose() * &y_star + &sv;
        let problem = match ProblemData::new(a, b, c, shape.clone()) {
            Ok(p) => p,
            Err(Error::RankDeficient(_)) => continue,
            Err(other) => return Err(other),
        };
        let objective = problem.c.dot(&xv);
        let mut y0 = y_star.clone();
        y0[0] -= 1.0;
        let x0 = match kind {
            InstanceKind::CentralStart => e.clone(),
            InstanceKind::OffCentral { weight } => e.scaled(1.0 - weight).axpy(weight, &x_star),
        };
        return Ok(GeneratedInstance {
            problem,
            start: StartPoint { x: x0, y: y0, s: e.clone() },
            certificate: Some(Certificate { x: x_star, y: y_star, s: s_star, objective }),
        });
    }
    Err(Error::RankDeficient(format!("no full-rank instance after {RANK_RETRIES} draws")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{jordan_product, lambda_min, membership};
    use crate::newton::residuals;

    #[test]
    fn certificate_is_optimal_and_start_is_feasible() {
        for (sizes, m, seed) in [(vec![3], 1, 0u64), (vec![2, 3, 5], 4, 1), (vec![4, 4, 4], 6, 2)] {
            let shape = BlockShape::new(sizes).unwrap();
            let g = generate_instance(&shape, m, seed, InstanceKind::CentralStart).unwrap();
            let cert = g.certificate.as_ref().unwrap();
            let p = &g.problem;
            let r = residuals(p, &cert.x, &cert.y, &cert.s);
            assert!(r.primal < 1e-12 && r.dual < 1e-12 && r.gap.abs() < 1e-12, "{r:?}");
            let prod = jordan_product(&cert.x, &cert.s).unwrap();
            assert!(prod.norm() < 1e-12);
            // boundary points: membership up to rounding of the eigenvalues
            assert!(lambda_min(&cert.x) > -1e-12 && lambda_min(&cert.s) > -1e-12);
            assert!((p.b.dot(&cert.y) - cert.objective).abs() < 1e-10);
            let r0 = residuals(p, &g.start.x, &g.start.y, &g.start.s);
            assert!(r0.primal < 1e-12 && r0.dual < 1e-12, "{r0:?}");
            assert_eq!(g.start.x, ConeVector::unit(&shape));
        }
    }

    #[test]
    fn off_central_start_is_feasible_and_not_central() {
        let shape = BlockShape::new(vec![3, 4]).unwrap();
        let g = generate_instance(&shape, 2, 9, InstanceKind::OffCentral { weight: 0.8 }).unwrap();
        let r0 = residuals(&g.problem, &g.start.x, &g.start.y, &g.start.s);
        assert!(r0.primal < 1e-12 && r0.dual < 1e-12);
        assert!(membership(&g.start.x, true));
        assert!(g.start.x.max_abs_diff(&ConeVector::unit(&shape)) > 0.1);
    }

    #[test]
    fn same_seed_same_instance() {
        let shape = BlockShape::new(vec![3, 3]).unwrap();
        let a = generate_instance(&shape, 3, 42, InstanceKind::CentralStart).unwrap();
        let b = generate_instance(&shape, 3, 42, InstanceKind::CentralStart).unwrap();
        assert_eq!(a, b);
        let c = generate_instance(&shape, 3, 43, InstanceKind::CentralStart).unwrap();
        assert_ne!(a.problem, c.problem);
    }

    #[test]
    fn invalid_row_counts_are_rejected() {
        let shape = BlockShape::new(vec![3]).unwrap();
        assert!(generate_instance(&shape, 0, 0, InstanceKind::CentralStart).is_err());
        assert!(generate_instance(&shape, 3, 0, InstanceKind::CentralStart).is_err());
        assert!(generate_instance(&shape, 1, 0, InstanceKind::OffCentral { weight: 1.0 }).is_err());
    }
}
