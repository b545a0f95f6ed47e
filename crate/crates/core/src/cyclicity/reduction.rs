use super::decay::one_minus;
use super::CyclicityError;
use crate::multiseries::PolySeries;
use crate::spaces::Space;
use serde::{Deserialize, Serialize};

/// Which hypothesis carries the reduction from `1` to a polynomial `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Bounded functions multiply `X`: `Q = P·(f truncated at D)`.
    Multiplier,
    /// `p ≥ 2` with the almost-monotone condition: `Q = (Pf)` truncated at `D`.
    Compnorm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialApprox {
    #[serde(skip)]
    pub q: PolySeries,
    pub branch: Branch,
    pub truncation: usize,
    /// `‖P − QU‖_X`.
    pub error: f64,
    /// `‖1 − fU‖_X` at the same degree cap.
    pub one_minus_fu: f64,
    /// `Σ|a_J|·‖1 − fU‖_X` with `a_J` the coefficients of `P`.
    pub l1_estimate: f64,
    pub target: f64,
    pub target_met: bool,
}

/// Approximate `P` by `QU` given an approximate inverse `f` of `U`.
pub fn polynomial_approx(
    p: &PolySeries,
    u: &PolySeries,
    space: &Space,
    f: &PolySeries,
    branch: Branch,
    truncation: usize,
    target: f64,
) -> Result<PolynomialApprox, CyclicityError> {
    let deg_p = p.degree().unwrap_or(0);
    let q = match branch {
        Branch::Multiplier => p.mul(&f.with_max_degree(truncation), deg_p + truncation)?,
        Branch::Compnorm => p.mul(f, truncation)?,
    };
    let cap = q.max_degree() + u.max_degree();
    let qu = q.mul(u, cap)?;
    let error = space.norm(&p.with_max_degree(cap).sub(&qu)?)?;
    let fu_cap = f.max_degree() + u.max_degree();
    let one_minus_fu = space.norm(&one_minus(f, u, fu_cap)?)?;
    let l1: f64 = p.terms().map(|(_, c)| c.norm()).sum();
    Ok(PolynomialApprox {
        q,
        branch,
        truncation,
        error,
        one_minus_fu,
        l1_estimate: l1 * one_minus_fu,
        target,
        target_met: error <= target,
    })
}
