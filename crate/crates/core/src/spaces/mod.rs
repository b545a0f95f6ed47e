//! Weighted spaces of analytic functions on the polydisc and their norms.
//!
//! Three families are covered: the coefficient spaces `X_{ω,p}` with
//! `‖f‖^p = Σ (|a_I|/ω(I))^p`, the Bergman-type spaces `B^p(λ)` built from a
//! radial probability measure `λ`, and the Hardy space `H²`. The reduced
//! weight `ω̃` with `1/ω̃(k) = Σ_j ‖z_j^k‖` summarises a space for the
//! cyclicity machinery.

mod checks;
mod measure;
mod norms;
mod reduced;
mod weight;

pub use checks::{
    check_compnorm, check_multiplier, check_shift_bound, CompNormReport, MultiplierReport,
    ShiftBoundReport, SUP_RADIUS,
};
pub use measure::{Atom, RadialMeasure};
pub use norms::{bergman_norm, hardy_norm, xnorm, Space};
pub use reduced::{reduced_weight, ReducedWeight};
pub use weight::{moment_weight, ConditionReport, Weight, WeightFamily};

use crate::multiseries::SeriesError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("table weight has {len} entries but index of order {order} was requested")]
    TableTooShort { len: usize, order: usize },
    #[error("measure has a vanishing moment at exponent {0:?}")]
    DegenerateMeasure(Vec<f64>),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("exponent p = {0} must be at least 1")]
    BadExponent(f64),
    #[error("malformed specification at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl SpaceError {
    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        SpaceError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub(crate) fn check_p(p: f64) -> Result<(), SpaceError> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(SpaceError::BadExponent(p))
    }
}
