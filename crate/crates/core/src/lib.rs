//! Primal-dual interior point solver for type-2 second-order cone
//! optimization driven by eligible kernel functions.
//!
//! The type-2 cone of dimension `n` is
//! `{x : (x1 + x2)^2 >= 2 * sum_{i>=3} x_i^2, x1 >= x2, x1 + x2 >= 0}`.
//! The crate provides its Jordan algebra ([`jordan`]), kernel functions and
//! the barrier built on them ([`kernel`]), Nesterov-Todd type scaling
//! ([`scaling`]), the scaled Newton system ([`newton`]), the large-update
//! path-following loop ([`solver`]), a reduction to ordinary second-order
//! cone form ([`transform`]) and a randomized identity suite ([`checks`]).

pub mod checks;
pub mod error;
pub mod jordan;
pub mod kernel;
pub mod newton;
pub mod scaling;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use jordan::{BlockShape, ConeVector, SpectralDecomposition};
pub use kernel::{BoundConstants, Kernel, KernelRef, LogKernel, ParametricKernel};
pub use newton::{Directions, ProblemData};
pub use scaling::NtScaling;
pub use solver::{SolveReport, SolverConfig, SolverState, Status};
