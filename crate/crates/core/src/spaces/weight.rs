use super::measure::{Atom, RadialMeasure};
use super::SpaceError;
use crate::multiseries::{term_count, MultiIndex};
use serde::{Deserialize, Serialize};

/// Serialisable description of a weight family.
///
/// `exp_pow` is `ω(I) = exp(a·|I|^β)`; `table` lists `ω` by total degree
/// `|I|`; `moment` is the weight whose monomial norms match `B^p(λ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightFamily {
    ExpPow {
        a: f64,
        beta: f64,
    },
    Const {
        #[serde(default = "unit")]
        value: f64,
    },
    Moment {
        atoms: Vec<Atom>,
        p: f64,
    },
    Table {
        values: Vec<f64>,
    },
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct WeightSpec {
    dim: usize,
    #[serde(flatten)]
    family: WeightFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cm: Option<f64>,
    #[serde(default)]
    nondecreasing: bool,
    #[serde(default)]
    almost_monotone: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    ExpPow { a: f64, beta: f64 },
    Const { log_value: f64 },
    Moment { measure: RadialMeasure, p: f64 },
    Table { log_values: Vec<f64> },
}

/// A positive weight `ω` on multi-indices, evaluated in the log domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    dim: usize,
    kind: Kind,
    spec: WeightSpec,
}

/// Result of testing the monotonicity conditions on a finite index range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub max_degree: usize,
    pub positive: bool,
    /// `ω(I+J) ≥ ω(J)` on every tested pair.
    pub nondecreasing: bool,
    /// `max ω(J)/ω(I+J)` over tested pairs, at least 1.
    pub empirical_cm: f64,
    pub claimed_cm: Option<f64>,
    /// `C_m·ω(I+J) ≥ ω(J)` with the claimed constant, if any.
    pub claimed_cm_holds: Option<bool>,
    /// Whether the flags declared in the specification were confirmed.
    pub declared_flags_hold: bool,
}

impl Weight {
    fn build(spec: WeightSpec) -> Result<Self, SpaceError> {
        if !(1..=2).contains(&spec.dim) {
            return Err(SpaceError::InvalidWeight(format!("dimension {}", spec.dim)));
        }
        if let Some(cm) = spec.cm {
            if !(cm >= 1.0) {
                return Err(SpaceError::InvalidWeight(format!("C_m = {cm} < 1")));
            }
        }
        let kind = match &spec.family {
            WeightFamily::ExpPow { a, beta } => {
                if !(*beta > 0.0 && *beta <= 1.0) || !a.is_finite() || *a < 0.0 {
                    return Err(SpaceError::InvalidWeight(format!(
                        "exp_pow needs a ≥ 0 and 0 < β ≤ 1 (a = {a}, β = {beta})"
                    )));
                }
                Kind::ExpPow { a: *a, beta: *beta }
            }
            WeightFamily::Const { value } => {
                if !(*value > 0.0 && value.is_finite()) {
                    return Err(SpaceError::InvalidWeight(format!("constant {value}")));
                }
                Kind::Const {
                    log_value: value.ln(),
                }
            }
            WeightFamily::Moment { atoms, p } => {
                super::check_p(*p)?;
                let measure = RadialMeasure::new(atoms.clone())?;
                if measure.dim() != spec.dim {
                    return Err(SpaceError::DimensionMismatch(spec.dim, measure.dim()));
                }
                Kind::Moment { measure, p: *p }
            }
            WeightFamily::Table { values } => {
                if values.is_empty() || values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(SpaceError::InvalidWeight(
                        "table values must be positive and finite".into(),
                    ));
                }
                Kind::Table {
                    log_values: values.iter().map(|v| v.ln()).collect(),
                }
            }
        };
        Ok(Weight {
            dim: spec.dim,
            kind,
            spec,
        })
    }

    fn plain(dim: usize, family: WeightFamily) -> Result<Self, SpaceError> {
        Weight::build(WeightSpec {
            dim,
            family,
            cm: None,
            nondecreasing: false,
            almost_monotone: false,
        })
    }

    /// `ω(I) = exp(a·|I|^β)`.
    pub fn exp_pow(dim: usize, a: f64, beta: f64) -> Result<Self, SpaceError> {
        Weight::plain(dim, WeightFamily::ExpPow { a, beta })
    }

    /// `ω ≡ value`.
    pub fn constant(dim: usize, value: f64) -> Result<Self, SpaceError> {
        Weight::plain(dim, WeightFamily::Const { value })
    }

    /// `ω(I) = values[|I|]`.
    pub fn table(dim: usize, values: Vec<f64>) -> Result<Self, SpaceError> {
        Weight::plain(dim, WeightFamily::Table { values })
    }

    /// Parse a JSON weight specification, e.g.
    /// `{"family": "exp_pow", "dim": 1, "a": 1.0, "beta": 0.6}`.
    pub fn from_json(text: &str) -> Result<Self, SpaceError> {
        let spec: WeightSpec = serde_json::from_str(text).map_err(SpaceError::from_json)?;
        Weight::build(spec)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.spec).expect("weight spec serialises")
    }

    /// Attach a claimed constant for `C_m·ω(I+J) ≥ ω(J)`.
    pub fn with_cm(mut self, cm: f64) -> Result<Self, SpaceError> {
        self.spec.cm = Some(cm);
        Weight::build(self.spec)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &WeightFamily {
        &self.spec.family
    }

    pub fn claimed_cm(&self) -> Option<f64> {
        self.spec.cm
    }

    /// `ln ω(I)`.
    pub fn log_value(&self, idx: &MultiIndex) -> Result<f64, SpaceError> {
        if idx.dim() != self.dim {
            return Err(SpaceError::DimensionMismatch(self.dim, idx.dim()));
        }
        let order = idx.order();
        match &self.kind {
            Kind::ExpPow { a, beta } => Ok(if order == 0 {
                0.0
            } else {
                a * (order as f64).powf(*beta)
            }),
            Kind::Const { log_value } => Ok(*log_value),
            Kind::Table { log_values } => {
                log_values
                    .get(order)
                    .copied()
                    .ok_or(SpaceError::TableTooShort {
                        len: log_values.len(),
                        order,
                    })
            }
            Kind::Moment { measure, p } => {
                let s: Vec<f64> = idx.entries().iter().map(|&i| p * i as f64).collect();
                let lm = measure.log_moment(&s);
                if lm == f64::NEG_INFINITY {
                    return Err(SpaceError::DegenerateMeasure(s));
                }
                Ok(-lm / p)
            }
        }
    }

    pub fn value(&self, idx: &MultiIndex) -> Result<f64, SpaceError> {
        Ok(self.log_value(idx)?.exp())
    }

    /// Whether `ω` depends on `|I|` only.
    fn is_radial(&self) -> bool {
        !matches!(self.kind, Kind::Moment { .. })
    }

    /// Nondecreasing by construction (so `C_m = 1`).
    fn known_nondecreasing(&self) -> bool {
        match &self.kind {
            Kind::ExpPow { .. } | Kind::Const { .. } | Kind::Moment { .. } => true,
            Kind::Table { .. } => false,
        }
    }

    /// `max ln(ω(J)/ω(I+J))` over `|I+J| ≤ max_degree`, clamped below at 0.
    fn empirical_log_cm(&self, max_degree: usize) -> Result<f64, SpaceError> {
        if self.is_radial() {
            let logs: Vec<f64> = (0..=max_degree)
                .map(|k| self.log_value(&MultiIndex::axis(self.dim, 0, k)))
                .collect::<Result<_, _>>()?;
            let mut best = 0.0f64;
            let mut running = f64::NEG_INFINITY;
            for l in logs {
                running = running.max(l);
                best = best.max(running - l);
            }
            return Ok(best);
        }
        let n = term_count(self.dim, max_degree);
        let idx: Vec<MultiIndex> = crate::multiseries::PolySeries::zero(self.dim, max_degree)?
            .iter()
            .map(|(i, _)| i)
            .collect();
        debug_assert_eq!(idx.len(), n);
        let logs: Vec<f64> = idx
            .iter()
            .map(|i| self.log_value(i))
            .collect::<Result<_, _>>()?;
        let pos = |i: &MultiIndex| idx.iter().position(|x| x == i).expect("index in range");
        let mut best = 0.0f64;
        for (a, j) in idx.iter().enumerate() {
            for i in &idx {
                let s = j.plus(i);
                if s.order() <= max_degree {
                    best = best.max(logs[a] - logs[pos(&s)]);
                }
            }
        }
        Ok(best)
    }

    /// Constant `C_m` for `C_m·ω(I+J) ≥ ω(J)`: the claimed value if given,
    /// 1 for families that are nondecreasing by construction, otherwise the
    /// empirical maximum over `|I+J| ≤ max_degree`.
    pub fn almost_monotone_constant(&self, max_degree: usize) -> Result<f64, SpaceError> {
        if let Some(cm) = self.spec.cm {
            return Ok(cm);
        }
        if self.known_nondecreasing() {
            return Ok(1.0);
        }
        Ok(self.empirical_log_cm(max_degree)?.exp())
    }

    /// Test positivity and the monotonicity conditions on `|I+J| ≤ max_degree`.
    pub fn check_conditions(&self, max_degree: usize) -> Result<ConditionReport, SpaceError> {
        let mut positive = true;
        for (i, _) in crate::multiseries::PolySeries::zero(self.dim, max_degree)?.iter() {
            let l = self.log_value(&i)?;
            positive &= l.is_finite();
        }
        let log_cm = self.empirical_log_cm(max_degree)?;
        let nondecreasing = log_cm <= 0.0;
        let claimed_cm_holds = self.spec.cm.map(|cm| log_cm <= cm.ln());
        let declared_flags_hold = (!self.spec.nondecreasing || nondecreasing)
            && (!self.spec.almost_monotone || claimed_cm_holds.unwrap_or(true));
        Ok(ConditionReport {
            max_degree,
            positive,
            nondecreasing,
            empirical_cm: log_cm.exp(),
            claimed_cm: self.spec.cm,
            claimed_cm_holds,
            declared_flags_hold,
        })
    }
}

/// Weight `ω(I) = (∫ r^{pI} dλ)^{−1/p}`, for which `‖z^I‖_{ω,p} = ‖z^I‖_{B^p(λ)}`.
pub fn moment_weight(measure: &RadialMeasure, p: f64) -> Result<Weight, SpaceError> {
    Weight::plain(
        measure.dim(),
        WeightFamily::Moment {
            atoms: measure.atoms().to_vec(),
            p,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_pow_values() {
        let w = Weight::exp_pow(2, 1.0, 0.5).unwrap();
        assert_eq!(w.value(&MultiIndex::two(0, 0)).unwrap(), 1.0);
        assert!((w.log_value(&MultiIndex::two(3, 1)).unwrap() - 2.0).abs() < 1e-15);
        assert!(Weight::exp_pow(1, 1.0, 1.5).is_err());
        assert!(Weight::exp_pow(1, -1.0, 0.5).is_err());
    }

    #[test]
    fn point_mass_moment_weight() {
        let m = RadialMeasure::point_mass(vec![0.5]).unwrap();
        let w = moment_weight(&m, 2.0).unwrap();
        for k in 0..10 {
            let got = w.value(&MultiIndex::one(k)).unwrap();
            assert!((got - 2f64.powi(k as i32)).abs() < 1e-12 * got);
        }
    }

    #[test]
    fn lebesgue_moment_weight() {
        let m = RadialMeasure::lebesgue_midpoint(4000).unwrap();
        let w = moment_weight(&m, 2.0).unwrap();
        for k in 0..6 {
            let got = w.value(&MultiIndex::one(k)).unwrap();
            assert!((got - (2.0 * k as f64 + 1.0).sqrt()).abs() < 1e-4);
        }
    }

    #[test]
    fn degenerate_measure() {
        let m = RadialMeasure::point_mass(vec![0.0]).unwrap();
        let w = moment_weight(&m, 2.0).unwrap();
        assert!(w.value(&MultiIndex::one(0)).is_ok());
        assert!(matches!(
            w.value(&MultiIndex::one(1)),
            Err(SpaceError::DegenerateMeasure(_))
        ));
    }

    #[test]
    fn table_weight_constant() {
        let w = Weight::table(1, vec![1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((w.almost_monotone_constant(3).unwrap() - 1.5).abs() < 1e-12);
        let rep = w.check_conditions(3).unwrap();
        assert!(!rep.nondecreasing);
        assert!(matches!(
            w.value(&MultiIndex::one(4)),
            Err(SpaceError::TableTooShort { .. })
        ));
        let claimed = w.with_cm(2.0).unwrap().check_conditions(3).unwrap();
        assert_eq!(claimed.claimed_cm_holds, Some(true));
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let w = Weight::from_json(r#"{"family": "exp_pow", "dim": 1, "a": 1.0, "beta": 0.6}"#)
            .unwrap();
        let again = Weight::from_json(&w.to_json().to_string()).unwrap();
        assert_eq!(w, again);
        let c = Weight::from_json(r#"{"family": "const", "dim": 2}"#).unwrap();
        assert_eq!(c.value(&MultiIndex::two(3, 4)).unwrap(), 1.0);
        let err = Weight::from_json("{\"family\": \"exp_pow\",\n \"dim\": 1, \"a\": }").unwrap_err();
        assert!(matches!(err, SpaceError::Parse { line: 2, .. }));
        assert!(Weight::from_json(r#"{"family": "cubic", "dim": 1}"#).is_err());
    }

    #[test]
    fn moment_weight_nondecreasing_in_two_variables() {
        let a = RadialMeasure::lebesgue_midpoint(5).unwrap();
        let m = RadialMeasure::product(&a, &a).unwrap();
        let w = moment_weight(&m, 2.0).unwrap();
        let rep = w.check_conditions(6).unwrap();
        assert!(rep.nondecreasing);
        assert!(rep.empirical_cm <= 1.0);
    }
}
