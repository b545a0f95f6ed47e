use super::SpaceError;
use crate::multiseries::MultiIndex;
use serde::{Deserialize, Serialize};

/// Point mass of a radial measure at the polyradius `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub r: Vec<f64>,
    pub mass: f64,
}

/// Finitely supported probability measure on `[0,1)^d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct MeasureSpec {
    atoms: Vec<Atom>,
}

/// Tolerance on `Σ mass = 1`.
const MASS_TOL: f64 = 1e-12;

impl RadialMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, SpaceError> {
        let dim = atoms
            .first()
            .map(|a| a.r.len())
            .ok_or_else(|| SpaceError::InvalidMeasure("no atoms".into()))?;
        if !(1..=2).contains(&dim) {
            return Err(SpaceError::InvalidMeasure(format!("dimension {dim}")));
        }
        for a in &atoms {
            if a.r.len() != dim {
                return Err(SpaceError::DimensionMismatch(dim, a.r.len()));
            }
            if !(a.mass > 0.0) {
                return Err(SpaceError::InvalidMeasure(format!("mass {} ≤ 0", a.mass)));
            }
            if a.r.iter().any(|r| !(0.0..1.0).contains(r)) {
                return Err(SpaceError::InvalidMeasure(format!(
                    "radius {:?} outside [0, 1)",
                    a.r
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.mass).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(SpaceError::InvalidMeasure(format!("total mass {total}")));
        }
        Ok(RadialMeasure { dim, atoms })
    }

    /// Parse `{"atoms": [{"r": [..], "mass": ..}, ..]}`.
    pub fn from_json(text: &str) -> Result<Self, SpaceError> {
        let spec: MeasureSpec = serde_json::from_str(text).map_err(SpaceError::from_json)?;
        RadialMeasure::new(spec.atoms)
    }

    pub fn point_mass(r: Vec<f64>) -> Result<Self, SpaceError> {
        RadialMeasure::new(vec![Atom { r, mass: 1.0 }])
    }

    /// Midpoint discretisation of `dr` on `[0,1)` with `n` atoms.
    pub fn lebesgue_midpoint(n: usize) -> Result<Self, SpaceError> {
        RadialMeasure::new(
            (0..n)
                .map(|i| Atom {
                    r: vec![(i as f64 + 0.5) / n as f64],
                    mass: 1.0 / n as f64,
                })
                .collect(),
        )
    }

    /// Product of two one-dimensional measures.
    pub fn product(a: &RadialMeasure, b: &RadialMeasure) -> Result<Self, SpaceError> {
        if a.dim != 1 || b.dim != 1 {
            return Err(SpaceError::InvalidMeasure(
                "product expects one-dimensional factors".into(),
            ));
        }
        let mut atoms = Vec::with_capacity(a.atoms.len() * b.atoms.len());
        for x in &a.atoms {
            for y in &b.atoms {
                atoms.push(Atom {
                    r: vec![x.r[0], y.r[0]],
                    mass: x.mass * y.mass,
                });
            }
        }
        // Renormalise away the rounding of the products.
        let total: f64 = atoms.iter().map(|a| a.mass).sum();
        for at in &mut atoms {
            at.mass /= total;
        }
        RadialMeasure::new(atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `ln ∫ Π_j r_j^{s_j} dλ`, or `-∞` when the moment vanishes.
    pub fn log_moment(&self, exponents: &[f64]) -> f64 {
        let logs: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| {
                a.mass.ln()
                    + a.r
                        .iter()
                        .zip(exponents)
                        .map(|(&r, &s)| if s == 0.0 { 0.0 } else { s * r.ln() })
                        .sum::<f64>()
            })
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
    }

    /// `∫ r^{pI} dλ`.
    pub fn moment(&self, idx: &MultiIndex, p: f64) -> f64 {
        let s: Vec<f64> = idx.entries().iter().map(|&i| p * i as f64).collect();
        self.log_moment(&s).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RadialMeasure::new(vec![]).is_err());
        assert!(RadialMeasure::point_mass(vec![1.0]).is_err());
        assert!(RadialMeasure::new(vec![Atom { r: vec![0.5], mass: 0.5 }]).is_err());
        assert!(RadialMeasure::lebesgue_midpoint(20).is_ok());
    }

    #[test]
    fn lebesgue_moments() {
        let m = RadialMeasure::lebesgue_midpoint(2000).unwrap();
        for k in 0..5 {
            let want = 1.0 / (2.0 * k as f64 + 1.0);
            assert!((m.moment(&MultiIndex::one(k), 2.0) - want).abs() < 1e-5);
        }
    }

    #[test]
    fn atom_at_origin() {
        let m = RadialMeasure::new(vec![
            Atom { r: vec![0.0], mass: 0.5 },
            Atom { r: vec![0.5], mass: 0.5 },
        ])
        .unwrap();
        assert_eq!(m.moment(&MultiIndex::one(0), 2.0), 1.0);
        assert!((m.moment(&MultiIndex::one(1), 2.0) - 0.125).abs() < 1e-15);
        let origin = RadialMeasure::point_mass(vec![0.0]).unwrap();
        assert_eq!(origin.log_moment(&[2.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn parses_json() {
        let m = RadialMeasure::from_json(r#"{"atoms": [{"r": [0.5, 0.25], "mass": 1.0}]}"#)
            .unwrap();
        assert_eq!(m.dim(), 2);
        let err = RadialMeasure::from_json("{\"atoms\": [\n {\"r\": [0.5], \"mass\": }]}")
            .unwrap_err();
        assert!(matches!(err, SpaceError::Parse { line: 2, .. }), "{err:?}");
    }
}
