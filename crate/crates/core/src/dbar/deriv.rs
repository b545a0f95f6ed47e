//! Finite-difference `∂̄` on a polar grid.
//!
//! `∂̄u = (e^{iθ}/2)(∂_r u + (i/r)∂_θ u)`. The angular derivative is spectral;
//! the radial derivative uses fourth-order differences, reflecting through the
//! origin (`u(−r, θ) = u(r, θ + π)`) so interior stencils stay centred, with
//! one-sided stencils on the two outermost rings.

use super::fourier::{mode_of, RingFft};
use super::grid::DiscGrid;
use crate::{par, C64};

pub(crate) fn dbar_disc(grid: &DiscGrid, values: &[C64]) -> Vec<C64> {
    let n_r = grid.n_r();
    let m = grid.n_theta();
    let fft = RingFft::new(m);
    let mut modes = fft.forward_rings(values);
    for ring in modes.chunks_mut(m) {
        for (s, c) in ring.iter_mut().enumerate() {
            let k = mode_of(s, m);
            *c *= if 2 * k.unsigned_abs() as usize == m {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, k as f64)
            };
        }
    }
    let d_theta = fft.inverse_rings(&modes);
    let h = grid.spacing();
    let sample = |j: i64, k: usize| -> C64 {
        if j >= 0 {
            values[j as usize * m + k]
        } else {
            values[(-j - 1) as usize * m + (k + m / 2) % m]
        }
    };
    par::map_range(n_r * m, |node| {
        let (i, k) = (node / m, node % m);
        let j = i as i64;
        let d_r = if i + 2 < n_r {
            (sample(j - 2, k) - 8.0 * sample(j - 1, k) + 8.0 * sample(j + 1, k)
                - sample(j + 2, k))
                / (12.0 * h)
        } else if i + 2 == n_r {
            (3.0 * sample(j + 1, k) + 10.0 * sample(j, k) - 18.0 * sample(j - 1, k)
                + 6.0 * sample(j - 2, k)
                - sample(j - 3, k))
                / (12.0 * h)
        } else {
            (25.0 * sample(j, k) - 48.0 * sample(j - 1, k) + 36.0 * sample(j - 2, k)
                - 16.0 * sample(j - 3, k)
                + 3.0 * sample(j - 4, k))
                / (12.0 * h)
        };
        let r = grid.radius(i);
        let phase = C64::from_polar(0.5, grid.angle(k));
        phase * (d_r + C64::new(0.0, 1.0 / r) * d_theta[node])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbar::grid::{Grid, ScalarField};

    #[test]
    fn holomorphic_polynomials_are_annihilated() {
        let g = DiscGrid::new(0.9, 24, 16).unwrap();
        let f = ScalarField::from_fn(&g, |z| z[0].powi(3) - 2.0 * z[0] + 1.0);
        let d = g.dbar(&f.values, 0);
        assert!(d.iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn low_degree_antiholomorphic_exact() {
        let g = DiscGrid::new(0.9, 24, 16).unwrap();
        let f = ScalarField::from_fn(&g, |z| z[0].conj().powi(2) * z[0] + z[0].conj());
        let want = ScalarField::from_fn(&g, |z| 2.0 * z[0].conj() * z[0] + 1.0);
        let d = ScalarField::new(g.dbar(&f.values, 0));
        assert!(d.max_distance(&want) < 1e-9);
    }

    #[test]
    fn fourth_order_on_smooth_data() {
        let err = |n_r| {
            let g = DiscGrid::new(0.9, n_r, 32).unwrap();
            let f = ScalarField::from_fn(&g, |z| (z[0].norm_sqr() * 3.0).sin().into());
            let want = ScalarField::from_fn(&g, |z| 3.0 * z[0] * (z[0].norm_sqr() * 3.0).cos());
            ScalarField::new(g.dbar(&f.values, 0)).max_distance(&want)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e2 < e1 / 10.0, "{e1} {e2}");
    }
}
