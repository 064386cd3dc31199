//! Randomized identity suite over the algebra, kernel, scaling and transform
//! layers.
//!
//! Every check draws its own seeded stream, evaluates a normalized error per
//! trial (zero when an inequality holds with slack) and passes when the
//! worst error stays within the check's tolerance.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jordan::{block, dot, norm, trace, BlockShape, ConeVector};
use crate::kernel::{barrier, rho, varrho, Kernel, LogKernel, ParametricKernel};
use crate::scaling::{half_power_rank_one, p_bar_matrix, q_bar_matrix, q_matrix, scaled_v, single_factor_point, w_matrix, NtScaling};

/// Result of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    /// Largest normalized error over all trials; zero for no trials.
    pub worst_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    /// `tolerance - worst_error`; non-negative exactly when the check passed.
    pub fn margin(&self) -> f64 {
        self.tolerance - self.worst_error
    }
}

type Trial = fn(&mut ChaCha8Rng, bool) -> f64;

struct Check {
    name: &'static str,
    tolerance: f64,
    trial: Trial,
}

const TOL: f64 = 1e-9;

fn rel(err: f64, scale: f64) -> f64 {
    err.abs() / (1.0 + scale.abs())
}

fn excess(lhs: f64, rhs: f64, scale: f64) -> f64 {
    ((lhs - rhs).max(0.0)) / (1.0 + scale.abs())
}

fn mat_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / (1.0 + b.amax())
}

fn block_size(rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(2..=8)
}

/// Coordinates uniform in `[-10, 10]`.
fn general(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()
}

fn unit_dir(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    loop {
        let d: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nd = norm(&d);
        if len == 0 {
            return d;
        }
        if nd > 1e-3 {
            return d.into_iter().map(|t| t / nd).collect();
        }
    }
}

/// Strictly interior point from spectral data: `λ1`, `λ2` log-uniform in
/// `[1e-2, 10]`, `λ4 = λ2 + gap`; blocks of size two have `λ4 = λ2`.
fn interior(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let l1 = 10f64.powf(rng.gen_range(-2.0..1.0));
    let l2 = 10f64.powf(rng.gen_range(-2.0..1.0));
    let l4 = if n == 2 { l2 } else { l2 + rng.gen_range(0.0..10.0) };
    block::compose(l1, l2, l4, &unit_dir(rng, n - 2))
}

fn cv(x: &[f64]) -> ConeVector {
    ConeVector::new(BlockShape::new(vec![x.len()]).expect("block size >= 2"), x.to_vec()).expect("length matches")
}

fn product_trace(x: &[f64], s: &[f64]) -> f64 {
    2.0 * block::product(x, s)[0]
}

fn trace_identities(rng: &mut ChaCha8Rng, flip: bool) -> f64 {
    let n = block_size(rng);
    let (x, s) = (general(rng, n), general(rng, n));
    let sign = if flip { -1.0 } else { 1.0 };
    let xs = dot(&x, &s);
    let e1 = rel(product_trace(&x, &s) - sign * 2.0 * xs, xs);
    let xx = dot(&x, &x);
    let e2 = rel(product_trace(&x, &x) - 2.0 * xx, xx);
    let (d, db, du) = block::dets(&x);
    let [l1, l2, _, l4] = block::eigenvalues(&x);
    let e3 = rel(db - l2 * l4, db);
    let e4 = rel(d - 0.5 * (l1 * l1 + l2 * l4), d);
    let e5 = rel(du - (db - d), du);
    e1.max(e2).max(e3).max(e4).max(e5)
}

fn eigenvalue_norm_identity(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let x = general(rng, n);
    let [l1, l2, _, l4] = block::eigenvalues(&x);
    let four = 4.0 * dot(&x, &x);
    rel(2.0 * l1 * l1 + l2 * l2 + l4 * l4 - four, four)
}

fn eigenvalue_magnitude_bound(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let x = general(rng, n);
    let [_, l2, _, l4] = block::eigenvalues(&x);
    let b = 2.0 * norm(&x);
    excess(l2.abs(), b, b).max(excess(l4.abs(), b, b))
}

fn eigenvalue_perturbation(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let (x, s) = (general(rng, n), general(rng, n));
    let sum: Vec<f64> = x.iter().zip(&s).map(|(a, b)| a + b).collect();
    let lhs = block::eigenvalues(&sum)[1];
    let rhs = block::eigenvalues(&x)[1] - 2.0 * norm(&s);
    excess(rhs, lhs, rhs)
}

fn trace_associativity(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let (x, s, t) = (general(rng, n), general(rng, n), general(rng, n));
    let left = product_trace(&block::product(&x, &s), &t);
    let right = product_trace(&x, &block::product(&s, &t));
    rel(left - right, left)
}

fn trace_eigenvalue_bounds(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let (x, s) = (general(rng, n), general(rng, n));
    let [a1, a2, _, a4] = block::eigenvalues(&x);
    let [b1, b2, _, b4] = block::eigenvalues(&s);
    let tr = product_trace(&x, &s);
    let lo = a1 * b1 + 0.5 * (a2 * b4 + a4 * b2);
    let hi = a1 * b1 + 0.5 * (a2 * b2 + a4 * b4);
    excess(lo, tr, tr).max(excess(tr, hi, tr))
}

/// `λmin(x) Tr(s) <= Tr(x ⋄ s) <= λmax(x) Tr(s)` for `s` in the cone.
fn trace_extreme_eigenvalue_bounds(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let x = general(rng, n);
    let s = interior(rng, n);
    let ts = 2.0 * s[0];
    let tr = product_trace(&x, &s);
    let lo = block::lambda_min(&x) * ts;
    let hi = block::lambda_max(&x) * ts;
    excess(lo, tr, tr).max(excess(tr, hi, tr))
}

fn det_bar_submultiplicative(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let (x, s) = (general(rng, n), general(rng, n));
    let p = block::product(&x, &s);
    let lhs = block::dets(&p).1;
    let rhs = block::dets(&x).1 * block::dets(&s).1;
    let bound = excess(lhs, rhs, rhs);
    // equality for dependent tails
    let c: f64 = rng.gen_range(-3.0..3.0);
    let mut s2 = s.clone();
    for i in 2..n {
        s2[i] = c * x[i];
    }
    let lhs2 = block::dets(&block::product(&x, &s2)).1;
    let rhs2 = block::dets(&x).1 * block::dets(&s2).1;
    bound.max(rel(lhs2 - rhs2, rhs2))
}

fn mixed_determinant_bounds(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let (x, s) = (general(rng, n), general(rng, n));
    let (dp, _, dup) = block::dets(&block::product(&x, &s));
    let (dx, _, dux) = block::dets(&x);
    let (ds, _, dus) = block::dets(&s);
    let r1 = dx * ds + dux * dus;
    let r2 = dx * dus + dux * ds;
    excess(dp, r1, r1).max(excess(dup, r2, r2))
}

fn lifted_nonnegative_function_stays_in_cone(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let x = interior(rng, n);
    let k = LogKernel;
    let mut worst = 0.0f64;
    let fs: [&dyn Fn(f64) -> f64; 3] = [&|t| k.psi(t), &|t| t * t, &|t: f64| (-t).exp()];
    for f in fs {
        let y = block::lift(&x, f);
        let lm = block::lambda_min(&y);
        worst = worst.max((-lm).max(0.0) / (1.0 + norm(&y)));
    }
    worst
}

fn barrier_midpoint_convexity(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let (x, s) = (interior(rng, n), interior(rng, n));
    let mid: Vec<f64> = x.iter().zip(&s).map(|(a, b)| 0.5 * (a + b)).collect();
    let k = LogKernel;
    let f = |v: &[f64]| barrier(&cv(v), &k).expect("interior point");
    let rhs = 0.5 * f(&x) + 0.5 * f(&s);
    excess(f(&mid), rhs, rhs)
}

fn rank_one_square_root(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = rng.gen_range(1..=7);
    let a = general(rng, n).into_iter().map(|t| t / 10.0).collect::<Vec<_>>();
    let beta = rng.gen_range(0.0..5.0);
    let m = half_power_rank_one(&a, beta);
    let target = DMatrix::from_fn(n, n, |i, k| beta * a[i] * a[k] + if i == k { 1.0 } else { 0.0 });
    mat_err(&(&m * &m), &target)
}

fn scaling_form_preservation(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let tail: Vec<f64> = (0..n - 2).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let lam = 10f64.powf(rng.gen_range(-2.0..1.0));
    let a = single_factor_point(&tail);
    let b = w_matrix(&a, lam).expect("valid single-factor point");
    let (w, wi) = (&b.w, &b.w_inv);
    let (q, qb, pb) = (q_matrix(n), q_bar_matrix(n), p_bar_matrix(n));
    mat_err(&(w * &q * w), &(&q * lam))
        .max(mat_err(&(w * &qb * w), &(&qb * lam)))
        .max(mat_err(&(w * &pb * w), &(&pb * lam)))
        .max(mat_err(&(wi * &qb * wi), &(&qb / lam)))
}

fn random_scaled_pair(rng: &mut ChaCha8Rng) -> (ConeVector, ConeVector, NtScaling) {
    let n = block_size(rng);
    let (x, s) = (cv(&interior(rng, n)), cv(&interior(rng, n)));
    let w = NtScaling::new(&x, &s).expect("interior pair");
    (x, s, w)
}

/// The Lorentz factor of `W²` equals `√(det̄(s)/det̄(x))`.
fn scaling_determinant_ratio(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let (x, s, w) = random_scaled_pair(rng);
    let lf = w.block(0).lorentz_factor();
    let ratio = block::det_bar_factored(s.data()) / block::det_bar_factored(x.data());
    rel(lf * lf - ratio, ratio)
}

/// Trace, orthant eigenvalue and `det̄` of `x̄ = Wx`, `s̄ = W⁻¹s`, plus
/// membership equivalence.
fn scaled_pair_invariants(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let (x, s, w) = random_scaled_pair(rng);
    let (xb, sb) = (w.apply(&x), w.apply_inverse(&s));
    let b = w.block(0);
    let t0 = trace(&crate::jordan::jordan_product(&x, &s).expect("same shape"));
    let t1 = trace(&crate::jordan::jordan_product(&xb, &sb).expect("same shape"));
    let lf = b.lorentz_factor();
    let (dbx, dbs) = (block::det_bar_factored(x.data()), block::det_bar_factored(s.data()));
    let (dbxb, dbsb) = (block::det_bar_factored(xb.data()), block::det_bar_factored(sb.data()));
    let l1x = block::eigenvalues(x.data())[0];
    let l1xb = block::eigenvalues(xb.data())[0];
    let member = if block::in_interior(xb.data()) && block::in_interior(sb.data()) { 0.0 } else { 1.0 };
    rel(t1 - t0, t0)
        .max(rel(dbxb - lf * dbx, dbxb))
        .max(rel(dbsb - dbs / lf, dbsb))
        .max(rel(l1xb - b.lambda.sqrt() * l1x, l1xb))
        .max(member)
}

/// `λ1(v) = √(λ1(x) λ1(s)/μ)` together with the `v ⋄ v` set
/// `μ λ1(v ⋄ v) = λ1(x) λ1(s)`, `μ Tr(v ⋄ v) = Tr(x ⋄ s)` and
/// `μ² det̄(v ⋄ v) = det̄(x) det̄(s)`.
fn scaled_point_eigenvalues(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let (x, s, w) = random_scaled_pair(rng);
    let mu = 10f64.powf(rng.gen_range(-3.0..1.0));
    let v = scaled_v(&x, &s, mu, &w).expect("consistent scaling");
    let l1 = |z: &[f64]| block::eigenvalues(z)[0];
    let p = l1(x.data()) * l1(s.data());
    let vv = block::product(v.data(), v.data());
    let e1 = rel(l1(v.data()) - (p / mu).sqrt(), l1(v.data()));
    let e2 = rel(mu * l1(&vv) - p, p);
    let txs = product_trace(x.data(), s.data());
    let e3 = rel(mu * 2.0 * vv[0] - txs, txs);
    let g = block::det_bar_factored(x.data()) * block::det_bar_factored(s.data());
    let e4 = rel(mu * mu * block::det_bar_factored(&vv) - g, g);
    e1.max(e2).max(e3).max(e4)
}

/// `x = √μ W⁻¹e`, `s = √μ We` give `x ⋄ s = μe`.
fn central_pair_from_scaling(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let tail: Vec<f64> = (0..n - 2).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let lam = 10f64.powf(rng.gen_range(-2.0..1.0));
    let mu: f64 = 10f64.powf(rng.gen_range(-3.0..1.0));
    let b = w_matrix(&single_factor_point(&tail), lam).expect("valid point");
    let mut e = DVector::zeros(n);
    e[0] = 1.0;
    let x: Vec<f64> = (&b.w_inv * &e * mu.sqrt()).iter().copied().collect();
    let s: Vec<f64> = (&b.w * &e * mu.sqrt()).iter().copied().collect();
    let p = block::product(&x, &s);
    let target: Vec<f64> = (0..n).map(|i| if i == 0 { mu } else { 0.0 }).collect();
    let err = p.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    err / (1.0 + mu)
}

fn spectral_round_trip(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let mut x = general(rng, n);
    if rng.gen_bool(0.2) {
        x[2..].iter_mut().for_each(|t| *t = 0.0);
    }
    let y = block::lift(&x, |t| t);
    let err = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    err / (1.0 + norm(&x))
}

fn kernels() -> Vec<Box<dyn Kernel>> {
    vec![
        Box::new(LogKernel),
        Box::new(ParametricKernel::new(2.0).expect("q > 1")),
        Box::new(ParametricKernel::new(3.0).expect("q > 1")),
    ]
}

fn inverse_maps_round_trip(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let s = 10f64.powf(rng.gen_range(-4.0..3.0));
    let mut worst = 0.0f64;
    for k in kernels() {
        let t = rho(&*k, s).expect("rho converges");
        worst = worst.max(rel(-k.d1(t) - 2.0 * s, s));
        let u = varrho(&*k, s).expect("varrho converges");
        worst = worst.max(rel(k.psi(u) - s, s));
    }
    worst
}

fn gradient_norm_dominates(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let p = rng.gen_range(1..=8);
    let z: Vec<f64> = (0..p).map(|_| 10f64.powf(rng.gen_range(-2.0..2.0))).collect();
    let mut worst = 0.0f64;
    for k in kernels() {
        let lhs = z.iter().map(|&t| k.d1(t).powi(2)).sum::<f64>().sqrt();
        let rhs = k.d1(varrho(&*k, z.iter().map(|&t| k.psi(t)).sum()).expect("varrho converges"));
        worst = worst.max(excess(rhs, lhs, lhs));
    }
    worst
}

fn scaled_sum_bound(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let p = rng.gen_range(1..=8);
    let z: Vec<f64> = (0..p).map(|_| 10f64.powf(rng.gen_range(-2.0..2.0))).collect();
    let beta = rng.gen_range(1.0..5.0);
    let mut worst = 0.0f64;
    for k in kernels() {
        let lhs: f64 = z.iter().map(|&t| k.psi(beta * t)).sum();
        let mean = z.iter().map(|&t| k.psi(t)).sum::<f64>() / p as f64;
        let rhs = p as f64 * k.psi(beta * varrho(&*k, mean).expect("varrho converges"));
        worst = worst.max(excess(lhs, rhs, rhs));
    }
    worst
}

fn transform_round_trip(rng: &mut ChaCha8Rng, _: bool) -> f64 {
    let n = block_size(rng);
    let x = interior(rng, n);
    // the auxiliary variables satisfy the cone tags exactly when x is a member
    let z1 = x[0] - x[1];
    let zb0 = (x[0] + x[1]) / SQRT_2;
    let tail = norm(&x[2..]);
    let lorentz = (tail - zb0).max(0.0) / (1.0 + zb0.abs());
    (-z1).max(0.0) / (1.0 + z1.abs()) + lorentz
}

fn catalogue() -> Vec<Check> {
    let c = |name, trial| Check { name, tolerance: TOL, trial };
    vec![
        c("trace and determinant identities", trace_identities as Trial),
        c("eigenvalue norm identity", eigenvalue_norm_identity),
        c("eigenvalue magnitude bound", eigenvalue_magnitude_bound),
        c("eigenvalue perturbation bound", eigenvalue_perturbation),
        c("trace associativity", trace_associativity),
        c("trace eigenvalue bounds", trace_eigenvalue_bounds),
        c("trace extreme eigenvalue bounds", trace_extreme_eigenvalue_bounds),
        c("det-bar submultiplicativity", det_bar_submultiplicative),
        c("mixed determinant bounds", mixed_determinant_bounds),
        c("lifted nonnegative function in cone", lifted_nonnegative_function_stays_in_cone),
        c("barrier midpoint convexity", barrier_midpoint_convexity),
        c("rank-one square root", rank_one_square_root),
        c("scaling form preservation", scaling_form_preservation),
        c("scaling determinant ratio", scaling_determinant_ratio),
        c("scaled pair invariants", scaled_pair_invariants),
        c("scaled point eigenvalues", scaled_point_eigenvalues),
        c("central pair from scaling", central_pair_from_scaling),
        c("spectral round trip", spectral_round_trip),
        c("inverse maps round trip", inverse_maps_round_trip),
        c("gradient norm dominates inverse bound", gradient_norm_dominates),
        c("scaled sum bound", scaled_sum_bound),
        c("transform cone tags", transform_round_trip),
    ]
}

/// Names of the checks in suite order.
pub fn check_names() -> Vec<&'static str> {
    catalogue().iter().map(|c| c.name).collect()
}

/// Runs every check for `trials` trials. Check `i` uses the stream seeded by
/// `seed + i`. `inject_sign_flip` flips the sign of one term in the trace
/// identity, which must then fail; it exists to confirm that the suite can
/// detect a broken identity.
pub fn run_suite(trials: usize, seed: u64, inject_sign_flip: bool) -> Vec<CheckOutcome> {
    if trials == 0 {
        return Vec::new();
    }
    catalogue()
        .into_iter()
        .enumerate()
        .map(|(i, check)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let mut worst = 0.0f64;
            for _ in 0..trials {
                let e = (check.trial)(&mut rng, inject_sign_flip);
                if !(e <= worst) {
                    worst = e;
                }
            }
            CheckOutcome {
                name: check.name,
                trials,
                worst_error: worst,
                tolerance: check.tolerance,
                passed: worst <= check.tolerance,
            }
        })
        .collect()
}
