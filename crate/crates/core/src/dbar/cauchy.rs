//! Fourier–radial evaluation of the Cauchy transform on a polar grid.
//!
//! Writing `ω = Σ_m ω_m(r) e^{imθ}`, the transform `u = Tω` has angular modes
//!
//! ```text
//! u_n(r) = −2 ∫_r^ρ (r/s)^n ω_{n+1}(s) ds        (n ≥ 0)
//! u_n(r) =  2 ∫_0^r (s/r)^{|n|} ω_{n+1}(s) ds    (n ≤ −1)
//! ```
//!
//! Both integrals are accumulated ring by ring with the multiplicative
//! recurrences `I(r_i) = (r_i/r_{i+1})^n I(r_{i+1}) + ∫_{r_i}^{r_{i+1}}` and
//! its inner counterpart, so each mode costs `O(n_r)`. On each radial cell the
//! profile `ω_m` is replaced by a local Lagrange interpolant through nearby
//! rings (extended to negative radii by the parity `ω_m(−s) = (−1)^m ω_m(s)`)
//! and integrated against the kernel by Gauss–Legendre quadrature.
//!
//! The two highest negative frequencies are discarded: the first would alias
//! onto the Nyquist slot of the result.

use super::fourier::{mode_of, slot_of, RingFft};
use super::grid::{DiscGrid, Grid, ScalarField};
use super::DbarError;
use crate::{par, C64};

/// Points of the Lagrange stencil per radial cell.
pub const INTERP_ORDER: usize = 8;
/// Gauss–Legendre points per radial cell.
pub const CELL_POINTS: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let step = p1 / dp;
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Lagrange basis through `nodes`, evaluated at `x`.
fn lagrange_basis(nodes: &[f64], x: f64) -> Vec<f64> {
    (0..nodes.len())
        .map(|k| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, &xl)| (x - xl) / (nodes[k] - xl))
                .product()
        })
        .collect()
}

struct Cell {
    /// Virtual ring index of the first stencil point (negative = reflected).
    start: i64,
    points: Vec<f64>,
    weights: Vec<f64>,
    /// `CELL_POINTS × INTERP_ORDER` basis values, row per quadrature point.
    basis: Vec<f64>,
}

/// Precomputed cell quadratures for one grid; reusable across transforms.
pub struct CauchyPlan {
    grid: DiscGrid,
    fft: RingFft,
    /// Cell 0 is `[0, r_0]`, cell `c` is `[r_{c−1}, r_c]`, the last is `[r_{n−1}, ρ]`.
    cells: Vec<Cell>,
    /// Extrapolation weights from the outermost rings to `r = ρ`.
    trace_weights: Vec<f64>,
}

impl CauchyPlan {
    pub fn new(grid: &DiscGrid) -> Self {
        let n = grid.n_r() as i64;
        let h = grid.spacing();
        let q = INTERP_ORDER.min(grid.n_r()) as i64;
        let (gx, gw) = gauss_legendre(CELL_POINTS);
        let pos = |j: i64| (j as f64 + 0.5) * h;
        let cells = (0..=n)
            .map(|c| {
                let (lo, hi) = if c == 0 {
                    (0.0, pos(0))
                } else if c == n {
                    (pos(n - 1), grid.rho())
                } else {
                    (pos(c - 1), pos(c))
                };
                let left = c - 1;
                let start = (left - q / 2 + 1).clamp(-n, n - q);
                let nodes: Vec<f64> = (start..start + q).map(pos).collect();
                let half = 0.5 * (hi - lo);
                let points: Vec<f64> = gx.iter().map(|t| lo + half * (t + 1.0)).collect();
                let weights: Vec<f64> = gw.iter().map(|w| w * half).collect();
                let basis = points.iter().flat_map(|&x| lagrange_basis(&nodes, x)).collect();
                Cell {
                    start,
                    points,
                    weights,
                    basis,
                }
            })
            .collect();
        let tail: Vec<f64> = (n - q..n).map(pos).collect();
        CauchyPlan {
            grid: grid.clone(),
            fft: RingFft::new(grid.n_theta()),
            cells,
            trace_weights: lagrange_basis(&tail, grid.rho()),
        }
    }

    pub fn grid(&self) -> &DiscGrid {
        &self.grid
    }

    /// Radial profiles per FFT slot: `profiles[slot][i]`.
    fn profiles(&self, values: &[C64]) -> Vec<Vec<C64>> {
        let m = self.grid.n_theta();
        let modes = self.fft.forward_rings(values);
        (0..m)
            .map(|s| (0..self.grid.n_r()).map(|i| modes[i * m + s]).collect())
            .collect()
    }

    fn assemble(&self, profiles: &[(usize, Vec<C64>)]) -> Vec<C64> {
        let m = self.grid.n_theta();
        let mut modes = vec![C64::new(0.0, 0.0); self.grid.node_count()];
        for (slot, prof) in profiles {
            for (i, v) in prof.iter().enumerate() {
                modes[i * m + slot] = *v;
            }
        }
        self.fft.inverse_rings(&modes)
    }

    /// Interpolated profile at every quadrature point of every cell.
    fn at_points(&self, profile: &[C64], parity: f64) -> Vec<C64> {
        let q = INTERP_ORDER.min(self.grid.n_r());
        let sample = |j: i64| {
            if j >= 0 {
                profile[j as usize]
            } else {
                profile[(-j - 1) as usize] * parity
            }
        };
        let mut out = Vec::with_capacity(self.cells.len() * CELL_POINTS);
        for cell in &self.cells {
            let stencil: Vec<C64> = (cell.start..cell.start + q as i64).map(sample).collect();
            for g in 0..CELL_POINTS {
                let row = &cell.basis[g * q..(g + 1) * q];
                out.push(row.iter().zip(&stencil).map(|(b, s)| s * b).sum());
            }
        }
        out
    }

    /// Angular mode `n` of `Tω` from the profile of `ω_{n+1}`.
    fn mode(&self, n: i64, profile: &[C64]) -> Vec<C64> {
        let n_r = self.grid.n_r();
        let parity = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let vals = self.at_points(profile, parity);
        let r = |i: usize| self.grid.radius(i);
        let cell_sum = |c: usize, kernel: &dyn Fn(f64) -> f64| -> C64 {
            let cell = &self.cells[c];
            (0..CELL_POINTS)
                .map(|g| vals[c * CELL_POINTS + g] * (cell.weights[g] * kernel(cell.points[g])))
                .sum()
        };
        let mut out = vec![C64::new(0.0, 0.0); n_r];
        if n >= 0 {
            let p = n as i32;
            let mut acc = cell_sum(n_r, &|s| (r(n_r - 1) / s).powi(p));
            out[n_r - 1] = -2.0 * acc;
            for i in (0..n_r - 1).rev() {
                acc = acc * (r(i) / r(i + 1)).powi(p) + cell_sum(i + 1, &|s| (r(i) / s).powi(p));
                out[i] = -2.0 * acc;
            }
        } else {
            let p = (-n) as i32;
            let mut acc = cell_sum(0, &|s| (s / r(0)).powi(p));
            out[0] = 2.0 * acc;
            for i in 1..n_r {
                acc = acc * (r(i - 1) / r(i)).powi(p) + cell_sum(i, &|s| (s / r(i)).powi(p));
                out[i] = 2.0 * acc;
            }
        }
        out
    }

    /// `Tω` sampled on the grid.
    pub fn transform(&self, values: &[C64]) -> Vec<C64> {
        let m = self.grid.n_theta() as i64;
        let profiles = self.profiles(values);
        let out_modes: Vec<i64> = (-m / 2 + 1..=m / 2 - 2).collect();
        let solved = par::map_range(out_modes.len(), |k| {
            let n = out_modes[k];
            let src = &profiles[slot_of(n + 1, m as usize)];
            (slot_of(n, m as usize), self.mode(n, src))
        });
        self.assemble(&solved)
    }

    /// Projection onto functions holomorphic in the disc, through the Cauchy
    /// integral over `|z| = ρ`: keeps the non-negative modes of the boundary
    /// trace and extends them as `c_m (r/ρ)^m`.
    pub fn holomorphic_projection(&self, values: &[C64]) -> Vec<C64> {
        let m = self.grid.n_theta();
        let n_r = self.grid.n_r();
        let q = self.trace_weights.len();
        let rho = self.grid.rho();
        let profiles = self.profiles(values);
        let projected: Vec<(usize, Vec<C64>)> = profiles
            .iter()
            .enumerate()
            .filter(|(s, _)| {
                let k = mode_of(*s, m);
                k >= 0 && (k as usize) < m / 2
            })
            .map(|(s, prof)| {
                let trace: C64 = self
                    .trace_weights
                    .iter()
                    .zip(&prof[n_r - q..])
                    .map(|(w, v)| v * w)
                    .sum();
                let k = s as i32;
                (s, (0..n_r).map(|i| trace * (self.grid.radius(i) / rho).powi(k)).collect())
            })
            .collect();
        self.assemble(&projected)
    }
}

/// One-off Cauchy transform; prefer [`CauchyPlan`] when transforming repeatedly.
pub fn cauchy_transform(grid: &DiscGrid, field: &ScalarField) -> Result<ScalarField, DbarError> {
    grid.check(field)?;
    Ok(ScalarField::new(CauchyPlan::new(grid).transform(&field.values)))
}

/// One-off holomorphic projection through the boundary circle.
pub fn holomorphic_projection(
    grid: &DiscGrid,
    field: &ScalarField,
) -> Result<ScalarField, DbarError> {
    grid.check(field)?;
    Ok(ScalarField::new(
        CauchyPlan::new(grid).holomorphic_projection(&field.values),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(CELL_POINTS);
        for k in 0..2 * CELL_POINTS {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn transform_of_constant_is_conjugate() {
        let g = DiscGrid::new(0.9, 16, 16).unwrap();
        let one = ScalarField::from_fn(&g, |_| C64::new(1.0, 0.0));
        let u = cauchy_transform(&g, &one).unwrap();
        let want = ScalarField::from_fn(&g, |z| z[0].conj());
        assert!(u.max_distance(&want) < 1e-12);
    }

    #[test]
    fn transform_of_polynomial_data() {
        let rho: f64 = 0.8;
        let g = DiscGrid::new(rho, 16, 16).unwrap();
        let w = ScalarField::from_fn(&g, |z| z[0] * z[0].conj() + 2.0 * z[0].conj() + z[0]);
        let u = cauchy_transform(&g, &w).unwrap();
        let want = ScalarField::from_fn(&g, |z| {
            let zb = z[0].conj();
            z[0] * zb * zb / 2.0 + zb * zb + z[0].norm_sqr() - rho * rho
        });
        assert!(u.max_distance(&want) < 1e-12, "{}", u.max_distance(&want));
    }

    #[test]
    fn projection_keeps_holomorphic_part() {
        let g = DiscGrid::new(0.9, 24, 16).unwrap();
        let f = ScalarField::from_fn(&g, |z| z[0].powi(3) + C64::new(0.5, 1.0) * z[0] + 2.0);
        let p = holomorphic_projection(&g, &f).unwrap();
        assert!(p.max_distance(&f) < 1e-10);
        // z̄ restricted to |z| = ρ is ρ²/z, whose Cauchy integral vanishes.
        let a = ScalarField::from_fn(&g, |z| z[0].conj() * (2.0 + z[0].conj()));
        let p = holomorphic_projection(&g, &a).unwrap();
        assert!(p.sup() < 1e-10);
    }
}
