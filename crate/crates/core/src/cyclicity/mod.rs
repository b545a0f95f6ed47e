//! End-to-end cyclicity experiments for zero-free test functions `U`.
//!
//! For each `n` the Bezout equation `g_{d+1}U + Σ_j g_j z_j^n = 1` is solved
//! with the Harnack floor as `δ`, and `f = g_{d+1}` is read back as a power
//! series so that `‖1 − fU‖_X` can be measured directly in the target space.
//! The splitting scheme replaces `U` by fractional powers `U^{λ_j²}` and
//! multiplies the resulting approximants.

mod decay;
mod reduction;
mod split;
mod witness;

pub use decay::{
    approximate_one, corona_data, exact_remainder_norm, extract_series, decay_bound,
    CyclicityOptions, DecayReport, DecayRow, Resolution,
};
pub use reduction::{polynomial_approx, Branch, PolynomialApprox};
pub use split::{approximate_one_split, split_power_defect, telescoping_defect, SplitReport};
pub use witness::{harnack_floor, HarnackCheck, HarnackGrid, HarnackTable, TestFunction, ZeroFreeWitness};

use crate::dbar::DbarError;
use crate::koszul::KoszulError;
use crate::multiseries::SeriesError;
use crate::spaces::SpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CyclicityError {
    #[error("k = {k} is below the Harnack threshold 4c² = {threshold}")]
    BelowThreshold { k: usize, threshold: f64 },
    #[error("U is not an admissible zero-free witness: {0}")]
    NotZeroFree(String),
    #[error("Harnack inequality fails on the solver grid at n = {n}: {message}")]
    HarnackViolation { n: usize, message: String },
    #[error("Bezout solve failed at n = {n}: {source}")]
    Bezout {
        n: usize,
        #[source]
        source: KoszulError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Dbar(#[from] DbarError),
}
