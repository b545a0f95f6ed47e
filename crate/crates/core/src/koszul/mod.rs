//! Quantitative Bezout solving through the Koszul complex.
//!
//! Given holomorphic `f_1, …, f_N` with `Σ|f_j| ≥ δ`, a smooth partition of
//! unity ([`partition_of_unity`]) gives the non-holomorphic solution
//! `Σ (χ_j/f_j) f_j = 1`; [`bezout_solve`] then removes the `∂̄` of that
//! solution level by level with the `∂̄` solvers of [`crate::dbar`], using the
//! exterior-algebra operators of [`exterior`].

mod bezout;
pub mod exterior;
mod partition;
mod problem;

pub use bezout::{
    bezout_solve, dbar_eta_form, eta_form, lift, theorem_bound, BezoutOptions, BezoutSolution,
    LevelCheck,
};
pub use exterior::{ExteriorIndex, FormField};
pub use partition::{
    partition_of_unity, smooth_ramp, Partition, PartitionReport, Thresholds,
};
pub use problem::{CoronaProblem, Domain, NORMALIZATION_SLACK};

use crate::dbar::DbarError;
use crate::multiseries::SeriesError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KoszulError {
    #[error("invalid exterior index {0:?}")]
    BadIndex(Vec<usize>),
    #[error("forms of incompatible shape")]
    ShapeMismatch,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("f_{index} has sup {sup} > 1 on the grid")]
    NotNormalized { index: usize, sup: f64 },
    #[error("partition of unity failed: {0}")]
    CoverFailure(String),
    #[error("Bezout residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    ResidualAboveTolerance { residual: f64, tol: f64 },
    #[error(transparent)]
    Dbar(#[from] DbarError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
