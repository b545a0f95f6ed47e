use super::cauchy::CauchyPlan;
use super::grid::{BidiscGrid, DiscGrid, Grid, ScalarField};
use super::DbarError;
use crate::{par, C64};
use serde::Serialize;

/// A posteriori evidence for a `∂̄` solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DbarCertificate {
    /// Largest `|∂̄u − ω|` over the grid, with `∂̄` by finite differences.
    pub residual: f64,
    /// `residual / sup|ω|`.
    pub relative_residual: f64,
    pub data_sup: f64,
    pub solution_sup: f64,
    /// `sup|u| / sup|ω|`, to compare with the operator-norm bound of `T`.
    pub bound_ratio: f64,
    /// Total number of grid nodes.
    pub nodes: usize,
}

impl DbarCertificate {
    fn new(residual: f64, data_sup: f64, solution_sup: f64, nodes: usize) -> Self {
        let denom = data_sup.max(f64::MIN_POSITIVE);
        DbarCertificate {
            residual,
            relative_residual: residual / denom,
            data_sup,
            solution_sup,
            bound_ratio: solution_sup / denom,
            nodes,
        }
    }
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    par::max_range(a.len(), |k| (a[k] - b[k]).norm()).max(0.0)
}

/// Solve `∂̄u = ω` on the disc with the Cauchy transform.
pub fn solve_disc(
    grid: &DiscGrid,
    data: &ScalarField,
) -> Result<(ScalarField, DbarCertificate), DbarError> {
    grid.check(data)?;
    let u = CauchyPlan::new(grid).transform(&data.values);
    let residual = max_diff(&grid.dbar(&u, 0), &data.values);
    let u = ScalarField::new(u);
    let cert = DbarCertificate::new(residual, data.sup(), u.sup(), grid.node_count());
    Ok((u, cert))
}

/// Relative mismatch `sup|∂̄_2ω_1 − ∂̄_1ω_2| / max(sup|∂̄_2ω_1|, sup|∂̄_1ω_2|)`
/// of a `(0,1)`-form on the bidisc; zero for closed forms up to
/// discretisation error.
pub fn closedness_defect(grid: &BidiscGrid, w1: &ScalarField, w2: &ScalarField) -> f64 {
    let a = grid.dbar(&w1.values, 1);
    let b = grid.dbar(&w2.values, 0);
    let scale = par::max_range(a.len(), |k| a[k].norm().max(b[k].norm()));
    if scale <= 0.0 {
        0.0
    } else {
        max_diff(&a, &b) / scale
    }
}

/// Solve `∂̄u = ω_1 dz̄_1 + ω_2 dz̄_2` on the bidisc for closed data, as
/// `u = T_1ω_1 + T_2(P_1ω_2)` where `T_i` is the Cauchy transform in `z_i`
/// and `P_1` the holomorphic projection in `z_1`.
///
/// With `closedness_tol = Some(t)` the data is rejected when
/// [`closedness_defect`] exceeds `t`.
pub fn solve_01_bidisc(
    grid: &BidiscGrid,
    w1: &ScalarField,
    w2: &ScalarField,
    closedness_tol: Option<f64>,
) -> Result<(ScalarField, DbarCertificate), DbarError> {
    grid.check(w1)?;
    grid.check(w2)?;
    if let Some(tol) = closedness_tol {
        let mismatch = closedness_defect(grid, w1, w2);
        if mismatch > tol {
            return Err(DbarError::NotClosed {
                mismatch,
                tolerance: tol,
            });
        }
    }
    let plan1 = CauchyPlan::new(grid.axis(0));
    let plan2 = CauchyPlan::new(grid.axis(1));
    let first = grid.along_axis(&w1.values, 0, |v| plan1.transform(v));
    let projected = grid.along_axis(&w2.values, 0, |v| plan1.holomorphic_projection(v));
    let second = grid.along_axis(&projected, 1, |v| plan2.transform(v));
    let u: Vec<C64> = first.iter().zip(&second).map(|(a, b)| a + b).collect();
    let residual = max_diff(&grid.dbar(&u, 0), &w1.values).max(max_diff(&grid.dbar(&u, 1), &w2.values));
    let data_sup = w1.sup().max(w2.sup());
    let u = ScalarField::new(u);
    let cert = DbarCertificate::new(residual, data_sup, u.sup(), grid.node_count());
    Ok((u, cert))
}

/// Solve `∂̄(v_1 dz̄_1 + v_2 dz̄_2) = g dz̄_1∧dz̄_2` on the bidisc, returning
/// `(v_1, v_2) = (0, T_1 g)`.
pub fn solve_02_bidisc(
    grid: &BidiscGrid,
    g: &ScalarField,
) -> Result<((ScalarField, ScalarField), DbarCertificate), DbarError> {
    grid.check(g)?;
    let plan1 = CauchyPlan::new(grid.axis(0));
    let v2 = grid.along_axis(&g.values, 0, |v| plan1.transform(v));
    let residual = max_diff(&grid.dbar(&v2, 0), &g.values);
    let v2 = ScalarField::new(v2);
    let cert = DbarCertificate::new(residual, g.sup(), v2.sup(), grid.node_count());
    Ok(((ScalarField::zeros(grid.node_count()), v2), cert))
}
