use super::CyclicityError;
use crate::multiseries::{
    read_coefficients, sup_norm_grid, CoefficientRecord, ExpAffine, PolySeries, TorusGrid,
};
use crate::spaces::SUP_RADIUS;
use crate::{par, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative slack on `k ≥ 4c²`, so that `c² = 1` computed as `1 + ε` still
/// admits `k = 4`.
const THRESHOLD_SLACK: f64 = 1e-12;

/// Serialisable description of a test function `U`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `exp(Σ b_j z_j − a)`, truncated where the tail bound drops below
    /// `1e-17` unless `degree` is given.
    ExpAffine {
        linear: Vec<f64>,
        shift: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
    },
    /// Explicit coefficients; with `normalize` the series is divided by its
    /// sampled sup norm, which makes `sup ≤ 1` only approximate.
    Coefficients {
        dim: usize,
        terms: Vec<CoefficientRecord>,
        #[serde(default)]
        normalize: bool,
    },
}

impl TestFunction {
    pub fn exp_affine(linear: Vec<f64>, shift: f64) -> Self {
        TestFunction::ExpAffine {
            linear,
            shift,
            degree: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::ExpAffine { linear, .. } => linear.len(),
            TestFunction::Coefficients { dim, .. } => *dim,
        }
    }

    /// Series of `U` and whether its normalisation is approximate.
    pub fn series(&self) -> Result<(PolySeries, bool), CyclicityError> {
        match self {
            TestFunction::ExpAffine {
                linear,
                shift,
                degree,
            } => {
                let e = ExpAffine::new(linear.clone(), *shift);
                let deg = degree.unwrap_or_else(|| {
                    (1..200)
                        .find(|&d| e.remainder_bound(d) <= 1e-17)
                        .unwrap_or(200)
                });
                Ok((e.series(deg)?, false))
            }
            TestFunction::Coefficients {
                dim,
                terms,
                normalize,
            } => {
                let deg = terms.iter().map(|t| t.index.iter().sum()).max().unwrap_or(0);
                let text = serde_json::to_string(terms).expect("records serialise");
                let u = read_coefficients(&text, *dim, deg)?;
                if !normalize {
                    return Ok((u, false));
                }
                let grid = TorusGrid::new(vec![SUP_RADIUS; *dim], (16 * (deg + 1)).max(256))?;
                let sup = sup_norm_grid(&u, &[grid])?;
                if !(sup > 0.0) {
                    return Err(CyclicityError::NotZeroFree("U vanishes identically".into()));
                }
                Ok((u.scale(C64::new(1.0 / sup, 0.0)), true))
            }
        }
    }
}

/// Closed polar grid on `|z_j| ≤ ρ`: radii `ρ·i/radial` for `i = 0..=radial`
/// and `angular` equispaced angles on every axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnackGrid {
    pub dim: usize,
    pub rho: f64,
    pub radial: usize,
    pub angular: usize,
}

impl HarnackGrid {
    pub fn new(dim: usize, rho: f64, radial: usize, angular: usize) -> Result<Self, CyclicityError> {
        if !(1..=2).contains(&dim) || !(rho > 0.0 && rho <= 1.0) || radial == 0 || angular < 4 {
            return Err(CyclicityError::Config(format!(
                "Harnack grid dim {dim}, ρ {rho}, {radial}×{angular}"
            )));
        }
        Ok(HarnackGrid {
            dim,
            rho,
            radial,
            angular,
        })
    }

    /// Default grids: 128×256 on the closed disc, 24×48 per axis on the
    /// closed bidisc.
    pub fn default_for(dim: usize) -> Self {
        match dim {
            1 => HarnackGrid::new(1, 1.0, 128, 256),
            _ => HarnackGrid::new(2, 1.0, 24, 48),
        }
        .expect("valid default grid")
    }

    fn axis_points(&self) -> Vec<C64> {
        let mut pts = Vec::with_capacity((self.radial + 1) * self.angular);
        for i in 0..=self.radial {
            let r = self.rho * i as f64 / self.radial as f64;
            for k in 0..self.angular {
                pts.push(C64::from_polar(r, 2.0 * PI * k as f64 / self.angular as f64));
            }
        }
        pts
    }

    pub fn node_count(&self) -> usize {
        ((self.radial + 1) * self.angular).pow(self.dim as u32)
    }

    fn point(&self, axis: &[C64], k: usize) -> Vec<C64> {
        match self.dim {
            1 => vec![axis[k]],
            _ => vec![axis[k / axis.len()], axis[k % axis.len()]],
        }
    }
}

/// A zero-free `U` with `sup|U| ≤ 1` and `c² = −ln|U(0)|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroFreeWitness {
    #[serde(skip)]
    pub u: PolySeries,
    pub u0_abs: f64,
    pub c: f64,
    /// `min |U|` over the check grid.
    pub grid_min: f64,
    /// Sampled `sup |U|` on the torus of radius just below 1.
    pub grid_sup: f64,
    /// The normalisation `sup ≤ 1` relies on a sampled sup.
    pub approximate: bool,
}

impl ZeroFreeWitness {
    pub fn new(u: PolySeries, approximate: bool, grid: &HarnackGrid) -> Result<Self, CyclicityError> {
        if u.dim() != grid.dim {
            return Err(CyclicityError::Config(format!(
                "U has dimension {} but the grid {}",
                u.dim(),
                grid.dim
            )));
        }
        let u0_abs = u.constant_term().norm();
        if !(u0_abs > 0.0 && u0_abs <= 1.0 + 1e-15) {
            return Err(CyclicityError::NotZeroFree(format!("|U(0)| = {u0_abs}")));
        }
        let deg = u.degree().unwrap_or(0);
        let torus = TorusGrid::new(vec![SUP_RADIUS; u.dim()], (8 * (deg + 1)).max(128))?;
        let grid_sup = sup_norm_grid(&u, &[torus])?;
        if grid_sup > 1.0 + 1e-12 {
            return Err(CyclicityError::NotZeroFree(format!("sup|U| ≈ {grid_sup}")));
        }
        let axis = grid.axis_points();
        let grid_min = par::min_range(grid.node_count(), |k| u.eval(&grid.point(&axis, k)).norm());
        if !(grid_min > 0.0) {
            return Err(CyclicityError::NotZeroFree("U vanishes on the grid".into()));
        }
        Ok(ZeroFreeWitness {
            c: (-u0_abs.min(1.0).ln()).max(0.0).sqrt(),
            u,
            u0_abs,
            grid_min,
            grid_sup,
            approximate,
        })
    }

    pub fn from_test_function(t: &TestFunction, grid: &HarnackGrid) -> Result<Self, CyclicityError> {
        let (u, approx) = t.series()?;
        Self::new(u, approx, grid)
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// `4c²`.
    pub fn threshold(&self) -> f64 {
        4.0 * self.c * self.c
    }

    /// Least admissible `k`.
    pub fn min_k(&self) -> usize {
        ((self.threshold() * (1.0 - THRESHOLD_SLACK)).ceil() as usize).max(1)
    }
}

/// `e^{−2c√k}`, defined for `k ≥ 4c²`.
pub fn harnack_floor(w: &ZeroFreeWitness, k: usize) -> Result<f64, CyclicityError> {
    if k < w.min_k() {
        return Err(CyclicityError::BelowThreshold {
            k,
            threshold: w.threshold(),
        });
    }
    Ok((-2.0 * w.c * (k as f64).sqrt()).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnackCheck {
    pub k: usize,
    pub floor: f64,
    /// `min (|U| + Σ_j |z_j|^k)` over the grid.
    pub grid_min: f64,
    pub argmin: Vec<[f64; 2]>,
    pub holds: bool,
}

/// `|U|` and `|z_j|` sampled once on a [`HarnackGrid`] for sweeps over `k`.
pub struct HarnackTable {
    abs_u: Vec<f64>,
    abs_z: Vec<Vec<f64>>,
    points: Vec<Vec<C64>>,
}

impl HarnackTable {
    pub fn new(w: &ZeroFreeWitness, grid: &HarnackGrid) -> Result<Self, CyclicityError> {
        if w.dim() != grid.dim {
            return Err(CyclicityError::Config("dimension mismatch".into()));
        }
        let axis = grid.axis_points();
        let points = par::map_range(grid.node_count(), |k| grid.point(&axis, k));
        let abs_u = par::map_range(points.len(), |k| w.u.eval(&points[k]).norm());
        let abs_z = (0..grid.dim)
            .map(|j| points.iter().map(|p| p[j].norm()).collect())
            .collect();
        Ok(HarnackTable {
            abs_u,
            abs_z,
            points,
        })
    }

    /// Check `|U| + Σ|z_j|^k ≥ e^{−2c√k}` at every node, with no tolerance.
    pub fn check(&self, w: &ZeroFreeWitness, k: usize) -> Result<HarnackCheck, CyclicityError> {
        let floor = harnack_floor(w, k)?;
        let vals = par::map_range(self.abs_u.len(), |q| {
            self.abs_u[q] + self.abs_z.iter().map(|z| z[q].powi(k as i32)).sum::<f64>()
        });
        let (arg, &min) = vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty grid");
        Ok(HarnackCheck {
            k,
            floor,
            grid_min: min,
            argmin: self.points[arg].iter().map(|z| [z.re, z.im]).collect(),
            holds: min >= floor,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiseries::MultiIndex;

    fn exp_witness(linear: Vec<f64>, shift: f64) -> (ZeroFreeWitness, HarnackGrid) {
        let grid = HarnackGrid::default_for(linear.len());
        let w = ZeroFreeWitness::from_test_function(&TestFunction::exp_affine(linear, shift), &grid)
            .unwrap();
        (w, grid)
    }

    #[test]
    fn exp_shift_one() {
        let (w, grid) = exp_witness(vec![1.0], 1.0);
        assert!((w.c - 1.0).abs() < 1e-12);
        assert_eq!(w.min_k(), 4);
        let floor = harnack_floor(&w, 4).unwrap();
        assert!((floor - (-4f64).exp()).abs() < 1e-15);
        let check = HarnackTable::new(&w, &grid).unwrap().check(&w, 4).unwrap();
        assert!(check.holds && check.grid_min >= (-2f64).exp() * (1.0 - 1e-12));
        assert!(matches!(
            harnack_floor(&w, 3),
            Err(CyclicityError::BelowThreshold { .. })
        ));
    }

    #[test]
    fn unimodular_constant() {
        let u = PolySeries::constant(1, 0, C64::new(0.0, 1.0)).unwrap();
        let w = ZeroFreeWitness::new(u, false, &HarnackGrid::default_for(1)).unwrap();
        assert_eq!(w.c, 0.0);
        assert_eq!(harnack_floor(&w, 1).unwrap(), 1.0);
    }

    #[test]
    fn rejects_zero_and_large_functions() {
        let grid = HarnackGrid::default_for(1);
        let z = PolySeries::monomial(MultiIndex::one(1), C64::new(1.0, 0.0));
        assert!(ZeroFreeWitness::new(z, false, &grid).is_err());
        let big = PolySeries::univariate(vec![C64::new(0.5, 0.0), C64::new(0.7, 0.0)]);
        assert!(ZeroFreeWitness::new(big, false, &grid).is_err());
    }

    #[test]
    fn normalised_polynomial_is_flagged() {
        let t = TestFunction::from_json(
            r#"{"kind": "coefficients", "dim": 1, "normalize": true,
                "terms": [{"index": [0], "re": 1.0}, {"index": [1], "re": 1.0}]}"#,
        )
        .unwrap();
        let (u, approx) = t.series().unwrap();
        assert!(approx);
        let one = MultiIndex::one(0);
        assert!((u.coeff(&one).re - 0.5).abs() < 1e-9);
    }
}
