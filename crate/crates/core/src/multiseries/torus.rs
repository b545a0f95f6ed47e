//! Equispaced quadrature on tori `{|z_j| = r_j}`.

use super::{PolySeries, SeriesError};
use crate::{par, C64};
use std::f64::consts::PI;

/// Product of circles of radii `r_j` with `M` equispaced nodes per circle.
///
/// The discrete average of `e^{ikθ}` over one circle is exactly 1 for `k = 0`
/// and 0 for `0 < |k| < M`, so polynomial integrands of degree `< M` are
/// integrated exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusGrid {
    radii: Vec<f64>,
    angles_per_axis: usize,
}

impl TorusGrid {
    pub fn new(radii: Vec<f64>, angles_per_axis: usize) -> Result<Self, SeriesError> {
        super::check_dim(radii.len())?;
        if angles_per_axis == 0 {
            return Err(SeriesError::Parse("torus grid needs at least one node".into()));
        }
        if radii.iter().any(|r| !(0.0..1.0).contains(r)) {
            return Err(SeriesError::Parse(format!(
                "torus radii must lie in [0, 1): {radii:?}"
            )));
        }
        Ok(TorusGrid {
            radii,
            angles_per_axis,
        })
    }

    /// Equal radii on every axis with the default node count `4(D+1)`.
    pub fn for_degree(dim: usize, radius: f64, degree: usize) -> Result<Self, SeriesError> {
        Self::new(vec![radius; dim], default_nodes(degree))
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles_per_axis(&self) -> usize {
        self.angles_per_axis
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    pub fn node_count(&self) -> usize {
        self.angles_per_axis.pow(self.dim() as u32)
    }

    /// Point of node `k` (row-major over axes).
    pub fn point(&self, k: usize) -> Vec<C64> {
        let m = self.angles_per_axis;
        let step = 2.0 * PI / m as f64;
        match self.dim() {
            1 => vec![C64::from_polar(self.radii[0], step * k as f64)],
            _ => vec![
                C64::from_polar(self.radii[0], step * (k / m) as f64),
                C64::from_polar(self.radii[1], step * (k % m) as f64),
            ],
        }
    }

    /// Discrete average of `e^{ikθ}` over one circle.
    pub fn circle_average(&self, k: i64) -> C64 {
        let m = self.angles_per_axis;
        let step = 2.0 * PI / m as f64;
        (0..m)
            .map(|j| C64::from_polar(1.0, step * (k * j as i64) as f64))
            .sum::<C64>()
            / m as f64
    }

    /// Node values of a series on this torus.
    pub fn sample(&self, f: &PolySeries) -> Vec<C64> {
        par::map_range(self.node_count(), |k| f.eval(&self.point(k)))
    }
}

/// Default node count `4(D+1)`: exact for trigonometric polynomials of
/// degree `2D` with margin.
pub fn default_nodes(degree: usize) -> usize {
    4 * (degree + 1)
}

/// Normalised mean of `|f|^p` over the torus of the grid.
pub fn torus_mean(f: &PolySeries, grid: &TorusGrid, p: f64) -> Result<f64, SeriesError> {
    if grid.dim() != f.dim() {
        return Err(SeriesError::DimensionMismatch(f.dim(), grid.dim()));
    }
    let vals = grid.sample(f);
    Ok(vals.iter().map(|v| v.norm().powf(p)).sum::<f64>() / vals.len() as f64)
}

/// Largest sampled `|f|` over a family of tori. This is a lower bound for
/// the sup norm on the polydisc.
pub fn sup_norm_grid(f: &PolySeries, grids: &[TorusGrid]) -> Result<f64, SeriesError> {
    let mut best = 0.0f64;
    for g in grids {
        if g.dim() != f.dim() {
            return Err(SeriesError::DimensionMismatch(f.dim(), g.dim()));
        }
        best = g.sample(f).iter().map(|v| v.norm()).fold(best, f64::max);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::super::{exp_affine, MultiIndex};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn discrete_orthogonality() {
        let g = TorusGrid::new(vec![0.5], 16).unwrap();
        assert!((g.circle_average(0) - c(1.0)).norm() < 1e-15);
        for k in 1..16 {
            assert!(g.circle_average(k).norm() < 1e-14);
            assert!(g.circle_average(-k).norm() < 1e-14);
        }
        assert!((g.circle_average(16) - c(1.0)).norm() < 1e-13);
    }

    #[test]
    fn means_of_simple_functions() {
        let one = PolySeries::constant(2, 0, c(1.0)).unwrap();
        for p in [1.0, 2.0, 3.5] {
            let g = TorusGrid::new(vec![0.3, 0.7], 8).unwrap();
            assert!((torus_mean(&one, &g, p).unwrap() - 1.0).abs() < 1e-14);
        }
        let z = PolySeries::monomial(MultiIndex::one(1), c(1.0));
        let g = TorusGrid::new(vec![0.5], 8).unwrap();
        assert!((torus_mean(&z, &g, 2.0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn parseval_on_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [1, 2] {
            let deg = 6;
            let mut f = PolySeries::zero(dim, deg).unwrap();
            let idx: Vec<_> = f.iter().map(|(i, _)| i).collect();
            for i in &idx {
                f.set_coeff(i, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .unwrap();
            }
            let r: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.1..0.99)).collect();
            let grid = TorusGrid::new(r.clone(), default_nodes(deg)).unwrap();
            let quad = torus_mean(&f, &grid, 2.0).unwrap();
            let exact: f64 = f
                .iter()
                .map(|(i, a)| {
                    let w: f64 = (0..dim).map(|j| r[j].powi(2 * i.get(j) as i32)).product();
                    a.norm_sqr() * w
                })
                .sum();
            assert!((quad - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn sup_of_simple_functions() {
        let three = PolySeries::constant(1, 0, c(3.0)).unwrap();
        let g = vec![TorusGrid::new(vec![0.5], 8).unwrap()];
        assert!((sup_norm_grid(&three, &g).unwrap() - 3.0).abs() < 1e-15);
        let z = PolySeries::monomial(MultiIndex::one(1), c(1.0));
        let g = vec![TorusGrid::new(vec![0.95], 8).unwrap()];
        assert!((sup_norm_grid(&z, &g).unwrap() - 0.95).abs() < 1e-15);
    }

    #[test]
    fn grid_sup_of_exp_increases_towards_one() {
        let u = exp_affine(&[1.0], 1.0, 40).unwrap();
        let mut last = 0.0;
        for (r, m) in [(0.5, 8), (0.8, 16), (0.95, 32), (0.99, 64)] {
            let s = sup_norm_grid(&u, &[TorusGrid::new(vec![r], m).unwrap()]).unwrap();
            assert!(s > last && s <= 1.0 + 1e-12);
            last = s;
        }
        assert!(last > 0.98);
    }
}
