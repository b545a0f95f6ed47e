use super::measure::RadialMeasure;
use super::weight::{moment_weight, Weight};
use super::{check_p, SpaceError};
use crate::multiseries::{default_nodes, torus_mean, MultiIndex, PolySeries, TorusGrid};
use serde::Deserialize;

/// `(Σ (|a_I|/ω(I))^p)^{1/p}` over the stored coefficients.
pub fn xnorm(f: &PolySeries, w: &Weight, p: f64) -> Result<f64, SpaceError> {
    check_p(p)?;
    if f.dim() != w.dim() {
        return Err(SpaceError::DimensionMismatch(f.dim(), w.dim()));
    }
    let mut sum = 0.0;
    for (idx, a) in f.terms() {
        sum += (p * (a.norm().ln() - w.log_value(&idx)?)).exp();
    }
    Ok(sum.powf(1.0 / p))
}

/// `(Σ_atoms mass · mean_{torus r} |f|^p)^{1/p}`, each torus sampled with
/// `angles_per_axis` nodes (default `4(D+1)`, exact for `p = 2`).
pub fn bergman_norm(
    f: &PolySeries,
    measure: &RadialMeasure,
    p: f64,
    angles_per_axis: Option<usize>,
) -> Result<f64, SpaceError> {
    check_p(p)?;
    if f.dim() != measure.dim() {
        return Err(SpaceError::DimensionMismatch(f.dim(), measure.dim()));
    }
    let m = angles_per_axis.unwrap_or_else(|| default_nodes(f.degree().unwrap_or(0)));
    let mut sum = 0.0;
    for atom in measure.atoms() {
        let grid = TorusGrid::new(atom.r.clone(), m)?;
        sum += atom.mass * torus_mean(f, &grid, p)?;
    }
    Ok(sum.powf(1.0 / p))
}

/// `(Σ |a_I|²)^{1/2}`.
pub fn hardy_norm(f: &PolySeries) -> f64 {
    f.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt()
}

/// A function space in which cyclicity is measured.
#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    /// `X_{ω,p}`.
    Weighted { weight: Weight, p: f64 },
    /// `B^p(λ)`.
    Bergman { measure: RadialMeasure, p: f64 },
    /// `H²` of the polydisc.
    Hardy { dim: usize },
}

#[derive(Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
enum SpaceSpec {
    Weighted {
        #[serde(default = "two")]
        p: f64,
        weight: serde_json::Value,
    },
    Bergman {
        #[serde(default = "two")]
        p: f64,
        measure: serde_json::Value,
    },
    Hardy {
        dim: usize,
    },
}

fn two() -> f64 {
    2.0
}

impl Space {
    /// Parse either a tagged space description
    /// (`{"space": "weighted", "p": 2, "weight": {..}}`, `"bergman"` with a
    /// `"measure"`, or `{"space": "hardy", "dim": d}`) or a bare weight
    /// specification, which is read as `X_{ω,p}` with `p` taken from an
    /// optional `"p"` field (default 2).
    pub fn from_json(text: &str) -> Result<Self, SpaceError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(SpaceError::from_json)?;
        if value.get("space").is_none() {
            let p = value.get("p").and_then(|v| v.as_f64()).unwrap_or(2.0);
            check_p(p)?;
            return Ok(Space::Weighted {
                weight: Weight::from_json(text)?,
                p,
            });
        }
        let spec: SpaceSpec = serde_json::from_value(value).map_err(|e| SpaceError::Parse {
            line: 0,
            column: 0,
            message: e.to_string(),
        })?;
        match spec {
            SpaceSpec::Weighted { p, weight } => {
                check_p(p)?;
                Ok(Space::Weighted {
                    weight: Weight::from_json(&weight.to_string())?,
                    p,
                })
            }
            SpaceSpec::Bergman { p, measure } => {
                check_p(p)?;
                Ok(Space::Bergman {
                    measure: RadialMeasure::from_json(&measure.to_string())?,
                    p,
                })
            }
            SpaceSpec::Hardy { dim } => {
                if !(1..=2).contains(&dim) {
                    return Err(SpaceError::InvalidWeight(format!("dimension {dim}")));
                }
                Ok(Space::Hardy { dim })
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Space::Weighted { weight, p } => {
                serde_json::json!({"space": "weighted", "p": p, "weight": weight.to_json()})
            }
            Space::Bergman { measure, p } => {
                serde_json::json!({"space": "bergman", "p": p, "measure": measure})
            }
            Space::Hardy { dim } => serde_json::json!({"space": "hardy", "dim": dim}),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::Weighted { weight, .. } => weight.dim(),
            Space::Bergman { measure, .. } => measure.dim(),
            Space::Hardy { dim } => *dim,
        }
    }

    pub fn p(&self) -> f64 {
        match self {
            Space::Weighted { p, .. } | Space::Bergman { p, .. } => *p,
            Space::Hardy { .. } => 2.0,
        }
    }

    pub fn norm(&self, f: &PolySeries) -> Result<f64, SpaceError> {
        match self {
            Space::Weighted { weight, p } => xnorm(f, weight, *p),
            Space::Bergman { measure, p } => bergman_norm(f, measure, *p, None),
            Space::Hardy { dim } => {
                if f.dim() != *dim {
                    return Err(SpaceError::DimensionMismatch(f.dim(), *dim));
                }
                Ok(hardy_norm(f))
            }
        }
    }

    /// `ln ‖z^I‖`.
    pub fn log_monomial_norm(&self, idx: &MultiIndex) -> Result<f64, SpaceError> {
        match self {
            Space::Weighted { weight, .. } => Ok(-weight.log_value(idx)?),
            Space::Bergman { measure, p } => Ok(-moment_weight(measure, *p)?.log_value(idx)?),
            Space::Hardy { .. } => Ok(0.0),
        }
    }

    /// Equivalent coefficient weight (`ω ≡ 1` for `H²`, the moment weight
    /// for `B^p(λ)`).
    pub fn weight(&self) -> Result<Weight, SpaceError> {
        match self {
            Space::Weighted { weight, .. } => Ok(weight.clone()),
            Space::Bergman { measure, p } => moment_weight(measure, *p),
            Space::Hardy { dim } => Weight::constant(*dim, 1.0),
        }
    }

    /// `C_m` of the shift estimate `‖z^J g‖ ≤ C_m‖g‖_∞/ω(J)`; 1 for Bergman
    /// and Hardy spaces.
    pub fn cm(&self, max_degree: usize) -> Result<f64, SpaceError> {
        match self {
            Space::Weighted { weight, .. } => weight.almost_monotone_constant(max_degree),
            _ => Ok(1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn counting_norm() {
        let f = PolySeries::from_terms(
            2,
            2,
            [
                (MultiIndex::two(0, 0), c(1.0)),
                (MultiIndex::two(1, 0), c(1.0)),
                (MultiIndex::two(1, 1), c(1.0)),
            ],
        )
        .unwrap();
        let w = Weight::constant(2, 1.0).unwrap();
        assert!((xnorm(&f, &w, 2.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((hardy_norm(&f) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn monomial_norm_is_reciprocal_weight() {
        let w = Weight::exp_pow(2, 0.7, 0.5).unwrap();
        let idx = MultiIndex::two(3, 2);
        let f = PolySeries::monomial(idx, c(1.0));
        for p in [1.0, 2.0, 3.5] {
            let got = xnorm(&f, &w, p).unwrap();
            assert!((got * w.value(&idx).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bergman_of_one_and_z() {
        let m = RadialMeasure::lebesgue_midpoint(20).unwrap();
        let one = PolySeries::constant(1, 0, c(1.0)).unwrap();
        assert!((bergman_norm(&one, &m, 2.0, None).unwrap() - 1.0).abs() < 1e-14);
        let z = PolySeries::monomial(MultiIndex::one(1), c(1.0));
        let got = bergman_norm(&z, &m, 2.0, None).unwrap();
        assert!((got - 1.0 / 3f64.sqrt()).abs() < 2e-3, "{got}");
    }

    #[test]
    fn space_json_forms() {
        let s = Space::from_json(r#"{"family": "exp_pow", "dim": 1, "a": 1, "beta": 0.6}"#)
            .unwrap();
        assert_eq!(s.p(), 2.0);
        let s2 = Space::from_json(&s.to_json().to_string()).unwrap();
        assert_eq!(s, s2);
        let b = Space::from_json(
            r#"{"space": "bergman", "p": 2, "measure": {"atoms": [{"r": [0.5], "mass": 1}]}}"#,
        )
        .unwrap();
        assert!((b.log_monomial_norm(&MultiIndex::one(2)).unwrap() - 2.0 * 0.5f64.ln()).abs() < 1e-14);
        assert!(Space::from_json(r#"{"space": "hardy", "dim": 3}"#).is_err());
    }
}
