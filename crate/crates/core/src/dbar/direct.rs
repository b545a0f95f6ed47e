//! Direct area quadrature of the Cauchy transform, used as an independent
//! check on [`super::cauchy`]. Each target node is excised from its own sum,
//! so the error is first order in the radial spacing; cost is quadratic in
//! the node count.

use super::grid::{DiscGrid, Grid, ScalarField};
use super::DbarError;
use crate::{par, C64};
use std::f64::consts::PI;

pub fn cauchy_transform_direct(
    grid: &DiscGrid,
    field: &ScalarField,
) -> Result<ScalarField, DbarError> {
    grid.check(field)?;
    let n = grid.node_count();
    let pts: Vec<C64> = (0..n).map(|k| grid.point(k)[0]).collect();
    let wv: Vec<C64> = (0..n).map(|k| field.values[k] * grid.area_weight(k)).collect();
    Ok(ScalarField::new(par::map_range(n, |k| {
        let z = pts[k];
        let s: C64 = (0..n)
            .filter(|&l| l != k)
            .map(|l| wv[l] / (pts[l] - z))
            .sum();
        -s / PI
    })))
}
