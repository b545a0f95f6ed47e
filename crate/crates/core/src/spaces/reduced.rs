use super::norms::Space;
use super::SpaceError;
use crate::multiseries::MultiIndex;
use serde::{Deserialize, Serialize};

/// Table of `ln ω̃(k)` for `0 ≤ k ≤ k_max`, where `1/ω̃(k) = Σ_j ‖z_j^k‖`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedWeight {
    dim: usize,
    log_values: Vec<f64>,
}

impl ReducedWeight {
    /// Wrap an explicit table of `ln ω̃(k)`, starting at `k = 0`.
    pub fn from_log(dim: usize, log_values: Vec<f64>) -> Result<Self, SpaceError> {
        if log_values.is_empty() || log_values.iter().any(|v| !v.is_finite()) {
            return Err(SpaceError::InvalidWeight(
                "reduced weight table must be nonempty and finite".into(),
            ));
        }
        Ok(Self { dim, log_values })
    }

    /// Tabulate `ln ω̃(k) = g(k)` for `k ≤ k_max`.
    pub fn from_log_fn(
        dim: usize,
        k_max: usize,
        g: impl Fn(usize) -> f64,
    ) -> Result<Self, SpaceError> {
        Self::from_log(dim, (0..=k_max).map(g).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k_max(&self) -> usize {
        self.log_values.len() - 1
    }

    /// `ln ω̃(k)`; panics past `k_max`.
    pub fn log(&self, k: usize) -> f64 {
        self.log_values[k]
    }

    pub fn value(&self, k: usize) -> f64 {
        self.log_values[k].exp()
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    /// Check `d^{−1}·min_j ω(k e_j) ≤ ω̃(k) ≤ min_j ω(k e_j)` in the log
    /// domain at every tabulated `k`; returns the first failing `k`.
    pub fn sandwich_violation(&self, space: &Space) -> Result<Option<usize>, SpaceError> {
        let w = space.weight()?;
        let lnd = (self.dim as f64).ln();
        for (k, &l) in self.log_values.iter().enumerate() {
            let mut lmin = f64::INFINITY;
            for j in 0..self.dim {
                lmin = lmin.min(w.log_value(&MultiIndex::axis(self.dim, j, k))?);
            }
            if !(l <= lmin && l >= lmin - lnd) {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// `ln ω̃(k)` from the monomial norms of `space`, summed with the largest
/// term factored out so the sandwich bound holds exactly.
pub fn reduced_weight(space: &Space, k_max: usize) -> Result<ReducedWeight, SpaceError> {
    let dim = space.dim();
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let logs: Vec<f64> = (0..dim)
            .map(|j| space.log_monomial_norm(&MultiIndex::axis(dim, j, k)))
            .collect::<Result<_, _>>()?;
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let rest: f64 = logs.iter().map(|l| (l - top).exp()).sum();
        out.push(-top - rest.ln());
    }
    ReducedWeight::from_log(dim, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{RadialMeasure, Weight};

    #[test]
    fn constant_weight_in_two_variables() {
        let s = Space::Weighted {
            weight: Weight::constant(2, 1.0).unwrap(),
            p: 2.0,
        };
        let r = reduced_weight(&s, 10).unwrap();
        for k in 0..=10 {
            assert!((r.value(k) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn one_variable_matches_weight() {
        let w = Weight::exp_pow(1, 1.0, 0.6).unwrap();
        let s = Space::Weighted {
            weight: w.clone(),
            p: 3.0,
        };
        let r = reduced_weight(&s, 40).unwrap();
        for k in 0..=40 {
            let want = w.log_value(&MultiIndex::one(k)).unwrap();
            assert!((r.log(k) - want).abs() <= 1e-14 * want.abs().max(1.0));
        }
    }

    #[test]
    fn sandwich_for_shipped_families() {
        let spaces = [
            Space::Weighted {
                weight: Weight::exp_pow(2, 1.0, 0.5).unwrap(),
                p: 2.0,
            },
            Space::Bergman {
                measure: RadialMeasure::product(
                    &RadialMeasure::lebesgue_midpoint(8).unwrap(),
                    &RadialMeasure::point_mass(vec![0.7]).unwrap(),
                )
                .unwrap(),
                p: 2.0,
            },
            Space::Hardy { dim: 2 },
        ];
        for s in &spaces {
            let r = reduced_weight(s, 64).unwrap();
            assert_eq!(r.sandwich_violation(s).unwrap(), None);
        }
    }
}
