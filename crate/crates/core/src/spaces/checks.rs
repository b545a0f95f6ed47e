use super::norms::{hardy_norm, xnorm, Space};
use super::weight::Weight;
use super::SpaceError;
use crate::multiseries::{sup_norm_grid, MultiIndex, PolySeries, TorusGrid};
use serde::Serialize;

/// Radius of the torus on which sup norms are sampled.
pub const SUP_RADIUS: f64 = 1.0 - 1e-9;

/// Relative slack for multiplier near-violations caused by grid sup
/// underestimating `‖f‖_∞`.
pub const MULTIPLIER_SLACK: f64 = 1e-6;

const ROUNDING: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompNormReport {
    pub p: f64,
    pub xnorm: f64,
    pub bound: f64,
    pub cm: f64,
    pub omega_zero: f64,
    pub holds: bool,
}

/// `‖f‖_{ω,p} ≤ (C_m/ω(0))·‖f‖_{H²}` for `p ≥ 2`.
pub fn check_compnorm(f: &PolySeries, w: &Weight, p: f64) -> Result<CompNormReport, SpaceError> {
    if p < 2.0 {
        return Err(SpaceError::BadExponent(p));
    }
    let cm = w.almost_monotone_constant(f.max_degree())?;
    let omega_zero = w.value(&MultiIndex::zero(w.dim()))?;
    let lhs = xnorm(f, w, p)?;
    let bound = cm / omega_zero * hardy_norm(f);
    Ok(CompNormReport {
        p,
        xnorm: lhs,
        bound,
        cm,
        omega_zero,
        holds: lhs <= bound * (1.0 + ROUNDING),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftBoundReport {
    pub shift: Vec<usize>,
    pub shifted_norm: f64,
    /// `C_m/ω(J)·‖g‖_{H²}`, valid for `p ≥ 2`.
    pub hardy_bound: f64,
    /// `C_m/ω(J)·` grid sup of `g`.
    pub sup_bound: f64,
    pub holds: bool,
    pub sup_form_holds: bool,
}

/// `‖z^J g‖_{ω,p} ≤ C_m/ω(J)·‖g‖` checked against both the `H²` norm and
/// the grid sup of `g` (which dominates it up to sampling error).
pub fn check_shift_bound(
    g: &PolySeries,
    shift: &MultiIndex,
    w: &Weight,
    p: f64,
) -> Result<ShiftBoundReport, SpaceError> {
    if p < 2.0 {
        return Err(SpaceError::BadExponent(p));
    }
    let cap = g.max_degree() + shift.order();
    let shifted = g.mul(&PolySeries::monomial(shift.clone(), 1.0.into()), cap)?;
    let cm = w.almost_monotone_constant(cap)?;
    let lhs = xnorm(&shifted, w, p)?;
    let factor = cm / w.value(shift)?;
    let hardy_bound = factor * hardy_norm(g);
    let sup_bound = factor * grid_sup(g)?;
    Ok(ShiftBoundReport {
        shift: shift.entries(),
        shifted_norm: lhs,
        hardy_bound,
        sup_bound,
        holds: lhs <= hardy_bound * (1.0 + ROUNDING),
        sup_form_holds: lhs <= sup_bound * (1.0 + MULTIPLIER_SLACK),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierReport {
    pub product_norm: f64,
    pub bound: f64,
    pub cm: f64,
    pub grid_sup: f64,
    pub slack: f64,
    /// Exceeded the bound but within the slack.
    pub near_violation: bool,
    pub holds: bool,
}

/// `‖fg‖_X ≤ C_m·sup|f|·‖g‖_X` with `sup|f|` sampled on a torus of radius
/// [`SUP_RADIUS`].
pub fn check_multiplier(
    f: &PolySeries,
    g: &PolySeries,
    space: &Space,
) -> Result<MultiplierReport, SpaceError> {
    let cap = f.max_degree() + g.max_degree();
    let product = f.mul(g, cap)?;
    let cm = space.cm(cap)?;
    let sup = grid_sup(f)?;
    let lhs = space.norm(&product)?;
    let bound = cm * sup * space.norm(g)?;
    let exceeded = lhs > bound * (1.0 + ROUNDING);
    let holds = lhs <= bound * (1.0 + MULTIPLIER_SLACK);
    Ok(MultiplierReport {
        product_norm: lhs,
        bound,
        cm,
        grid_sup: sup,
        slack: MULTIPLIER_SLACK,
        near_violation: exceeded && holds,
        holds,
    })
}

fn grid_sup(f: &PolySeries) -> Result<f64, SpaceError> {
    let deg = f.degree().unwrap_or(0);
    let nodes = (8 * (deg + 1)).max(64);
    let grid = TorusGrid::new(vec![SUP_RADIUS; f.dim()], nodes)?;
    Ok(sup_norm_grid(f, &[grid])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::RadialMeasure;
    use crate::C64;

    #[test]
    fn constant_weight_is_equality() {
        let f = PolySeries::univariate(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0), 3.0.into()]);
        let r = check_compnorm(&f, &Weight::constant(1, 1.0).unwrap(), 2.0).unwrap();
        assert!(r.holds);
        assert!((r.xnorm - r.bound).abs() < 1e-14);
    }

    #[test]
    fn constant_multiplier_is_equality() {
        let c = PolySeries::constant(1, 0, C64::new(0.0, 0.6)).unwrap();
        let g = PolySeries::univariate(vec![1.0.into(), 2.0.into(), C64::new(0.0, 1.0)]);
        let s = Space::Weighted {
            weight: Weight::exp_pow(1, 1.0, 0.5).unwrap(),
            p: 2.0,
        };
        let r = check_multiplier(&c, &g, &s).unwrap();
        assert!(r.holds && !r.near_violation);
        assert!((r.product_norm - r.bound).abs() < 1e-14);
    }

    #[test]
    fn shift_in_bergman_space_contracts() {
        let s = Space::Bergman {
            measure: RadialMeasure::lebesgue_midpoint(16).unwrap(),
            p: 2.0,
        };
        let z = PolySeries::monomial(MultiIndex::one(1), 1.0.into());
        let g = PolySeries::univariate(vec![1.0.into(), (-1.0).into(), 0.5.into()]);
        let r = check_multiplier(&z, &g, &s).unwrap();
        assert!(r.holds);
        assert!(r.product_norm < s.norm(&g).unwrap());
    }

    #[test]
    fn shift_bound_on_monomial() {
        let w = Weight::exp_pow(2, 1.0, 0.5).unwrap();
        let g = PolySeries::monomial(MultiIndex::two(1, 2), 1.0.into());
        let r = check_shift_bound(&g, &MultiIndex::two(3, 0), &w, 2.0).unwrap();
        assert!(r.holds && r.sup_form_holds);
    }
}
