use super::{deriv, DbarError};
use crate::{par, C64};
use std::f64::consts::PI;

/// Sampled complex values on the nodes of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub values: Vec<C64>,
}

impl ScalarField {
    pub fn new(values: Vec<C64>) -> Self {
        ScalarField { values }
    }

    pub fn zeros(n: usize) -> Self {
        ScalarField {
            values: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// Sample `f` at every node of `grid`.
    pub fn from_fn<G, F>(grid: &G, f: F) -> Self
    where
        G: Grid + ?Sized,
        F: Fn(&[C64]) -> C64 + Sync + Send,
    {
        let d = grid.dim();
        ScalarField {
            values: par::map_range(grid.node_count(), |k| f(&grid.point(k)[..d])),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest sampled modulus.
    pub fn sup(&self) -> f64 {
        par::max_range(self.values.len(), |k| self.values[k].norm()).max(0.0)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: C64, other: &ScalarField) -> ScalarField {
        ScalarField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn scale(&self, c: C64) -> ScalarField {
        ScalarField {
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    /// Largest pointwise distance to `other`.
    pub fn max_distance(&self, other: &ScalarField) -> f64 {
        par::max_range(self.values.len(), |k| (self.values[k] - other.values[k]).norm()).max(0.0)
    }
}

/// Geometry shared by disc and bidisc grids.
pub trait Grid: Sync {
    fn dim(&self) -> usize;
    fn node_count(&self) -> usize;
    /// Coordinates of node `k`; only the first `dim()` entries are meaningful.
    fn point(&self, k: usize) -> [C64; 2];
    /// Outer radius of every coordinate disc.
    fn rho(&self) -> f64;
    /// Finite-difference `∂u/∂z̄_axis` at every node.
    fn dbar(&self, values: &[C64], axis: usize) -> Vec<C64>;

    fn check(&self, field: &ScalarField) -> Result<(), DbarError> {
        if field.len() == self.node_count() {
            Ok(())
        } else {
            Err(DbarError::SizeMismatch {
                expected: self.node_count(),
                got: field.len(),
            })
        }
    }
}

/// Polar grid on `|z| ≤ ρ`: radii `r_i = (i + ½)h` with `h = ρ/n_r`, and
/// `n_θ` equispaced angles. Node `i·n_θ + k` sits at `r_i e^{2πik/n_θ}`.
///
/// The midpoint radial rule integrates `r dr` exactly, so the area weights
/// sum to `πρ²` up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscGrid {
    rho: f64,
    n_r: usize,
    n_theta: usize,
}

impl DiscGrid {
    /// `n_theta` must be even (the radial stencils reflect through the origin).
    pub fn new(rho: f64, n_r: usize, n_theta: usize) -> Result<Self, DbarError> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(DbarError::InvalidGrid(format!("rho = {rho} not in (0, 1)")));
        }
        if n_r < 8 {
            return Err(DbarError::InvalidGrid(format!("n_r = {n_r} < 8")));
        }
        if n_theta < 4 || n_theta % 2 != 0 {
            return Err(DbarError::InvalidGrid(format!(
                "n_theta = {n_theta} must be even and at least 4"
            )));
        }
        Ok(DiscGrid {
            rho,
            n_r,
            n_theta,
        })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    /// Radial spacing `h`.
    pub fn spacing(&self) -> f64 {
        self.rho / self.n_r as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing()
    }

    pub fn angle(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_theta as f64
    }

    /// Area quadrature weight of node `i·n_θ + k`.
    pub fn area_weight(&self, node: usize) -> f64 {
        let i = node / self.n_theta;
        self.radius(i) * self.spacing() * 2.0 * PI / self.n_theta as f64
    }

    /// Quadrature of `∬ f dA` over the disc.
    pub fn integrate(&self, values: &[C64]) -> C64 {
        values
            .iter()
            .enumerate()
            .map(|(k, v)| v * self.area_weight(k))
            .sum()
    }

    /// Same grid with the radial spacing halved.
    pub fn refined(&self) -> DiscGrid {
        DiscGrid {
            rho: self.rho,
            n_r: 2 * self.n_r,
            n_theta: self.n_theta,
        }
    }
}

impl Grid for DiscGrid {
    fn dim(&self) -> usize {
        1
    }

    fn node_count(&self) -> usize {
        self.n_r * self.n_theta
    }

    fn point(&self, k: usize) -> [C64; 2] {
        let (i, j) = (k / self.n_theta, k % self.n_theta);
        [C64::from_polar(self.radius(i), self.angle(j)), C64::new(0.0, 0.0)]
    }

    fn rho(&self) -> f64 {
        self.rho
    }

    fn dbar(&self, values: &[C64], axis: usize) -> Vec<C64> {
        assert_eq!(axis, 0, "the disc has a single coordinate");
        deriv::dbar_disc(self, values)
    }
}

/// Product of two polar grids; node `a·n_B + b` pairs node `a` of the first
/// disc (coordinate `z_1`) with node `b` of the second (`z_2`).
#[derive(Clone, Debug, PartialEq)]
pub struct BidiscGrid {
    first: DiscGrid,
    second: DiscGrid,
}

impl BidiscGrid {
    pub fn new(first: DiscGrid, second: DiscGrid) -> Result<Self, DbarError> {
        if first.rho != second.rho {
            return Err(DbarError::InvalidGrid(
                "both discs must share the same radius".into(),
            ));
        }
        Ok(BidiscGrid { first, second })
    }

    /// Same polar grid on both axes.
    pub fn square(disc: DiscGrid) -> Self {
        BidiscGrid {
            second: disc.clone(),
            first: disc,
        }
    }

    pub fn axis(&self, axis: usize) -> &DiscGrid {
        if axis == 0 {
            &self.first
        } else {
            &self.second
        }
    }

    /// Same grid with the radial spacing halved on both axes.
    pub fn refined(&self) -> BidiscGrid {
        BidiscGrid {
            first: self.first.refined(),
            second: self.second.refined(),
        }
    }

    /// Apply a one-variable operator along `axis`, treating the other
    /// coordinate as a parameter.
    pub fn along_axis<F>(&self, values: &[C64], axis: usize, op: F) -> Vec<C64>
    where
        F: Fn(&[C64]) -> Vec<C64> + Sync + Send,
    {
        let na = self.first.node_count();
        let nb = self.second.node_count();
        let mut out = vec![C64::new(0.0, 0.0); na * nb];
        if axis == 1 {
            par::for_each_chunk_mut(&mut out, nb, |a, row| {
                row.copy_from_slice(&op(&values[a * nb..(a + 1) * nb]));
            });
        } else {
            let cols = par::map_range(nb, |b| {
                let col: Vec<C64> = (0..na).map(|a| values[a * nb + b]).collect();
                op(&col)
            });
            for (b, col) in cols.into_iter().enumerate() {
                for (a, v) in col.into_iter().enumerate() {
                    out[a * nb + b] = v;
                }
            }
        }
        out
    }
}

impl Grid for BidiscGrid {
    fn dim(&self) -> usize {
        2
    }

    fn node_count(&self) -> usize {
        self.first.node_count() * self.second.node_count()
    }

    fn point(&self, k: usize) -> [C64; 2] {
        let nb = self.second.node_count();
        [self.first.point(k / nb)[0], self.second.point(k % nb)[0]]
    }

    fn rho(&self) -> f64 {
        self.first.rho
    }

    fn dbar(&self, values: &[C64], axis: usize) -> Vec<C64> {
        let disc = self.axis(axis).clone();
        self.along_axis(values, axis, move |v| deriv::dbar_disc(&disc, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_of_disc() {
        for (n_r, n_t) in [(8, 4), (33, 16), (200, 64)] {
            let g = DiscGrid::new(0.95, n_r, n_t).unwrap();
            let ones = vec![C64::new(1.0, 0.0); g.node_count()];
            let a = g.integrate(&ones);
            assert!((a.re - PI * 0.95 * 0.95).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(DiscGrid::new(1.0, 16, 16).is_err());
        assert!(DiscGrid::new(0.9, 4, 16).is_err());
        assert!(DiscGrid::new(0.9, 16, 15).is_err());
    }

    #[test]
    fn bidisc_points() {
        let d = DiscGrid::new(0.9, 8, 4).unwrap();
        let g = BidiscGrid::square(d.clone());
        assert_eq!(g.node_count(), 32 * 32);
        let p = g.point(5 * 32 + 7);
        assert_eq!(p[0], d.point(5)[0]);
        assert_eq!(p[1], d.point(7)[0]);
    }
}
