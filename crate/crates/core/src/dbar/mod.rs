//! Solvers for the inhomogeneous Cauchy–Riemann equation `∂̄u = ω` on the
//! disc `|z| ≤ ρ` and the bidisc `|z_1|, |z_2| ≤ ρ`.
//!
//! Fields live on polar grids ([`DiscGrid`]) or products of two of them
//! ([`BidiscGrid`]). The one-variable solver is the Cauchy transform
//! `Tω(z) = −(1/π) ∬ ω(ζ)/(ζ − z) dA(ζ)`, evaluated mode by mode in the
//! angular Fourier basis (see [`cauchy`]). Bidisc solvers iterate it one
//! variable at a time. Every solve returns a [`DbarCertificate`] with a
//! finite-difference residual that does not reuse the solver's quadrature.

pub mod cauchy;
mod deriv;
pub mod direct;
mod fourier;
mod grid;
mod solve;

pub use cauchy::{cauchy_transform, holomorphic_projection};
pub use grid::{BidiscGrid, DiscGrid, Grid, ScalarField};
pub use solve::{
    closedness_defect, solve_01_bidisc, solve_02_bidisc, solve_disc, DbarCertificate,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DbarError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field has {got} samples but the grid has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
    #[error("data is not ∂̄-closed: relative mismatch {mismatch:.3e} exceeds {tolerance:.1e}")]
    NotClosed { mismatch: f64, tolerance: f64 },
}
