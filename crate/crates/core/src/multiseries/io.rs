//! JSON coefficient files: an array of `{ "index": [i1, …], "re": x, "im": y }`.

use super::{MultiIndex, PolySeries, SeriesError};
use crate::C64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRecord {
    pub index: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Parse a coefficient array, rejecting indices of the wrong length or with
/// order above `max_degree`.
pub fn read_coefficients(
    json: &str,
    dim: usize,
    max_degree: usize,
) -> Result<PolySeries, SeriesError> {
    let records: Vec<CoefficientRecord> = serde_json::from_str(json).map_err(|e| {
        SeriesError::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        if r.index.len() != dim {
            return Err(SeriesError::BadIndex(r.index));
        }
        terms.push((MultiIndex::new(&r.index)?, C64::new(r.re, r.im)));
    }
    PolySeries::from_terms(dim, max_degree, terms)
}

/// Serialise the non-zero coefficients.
pub fn write_coefficients(f: &PolySeries) -> String {
    let records: Vec<CoefficientRecord> = f
        .terms()
        .map(|(i, c)| CoefficientRecord {
            index: i.entries(),
            re: c.re,
            im: c.im,
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("records serialise")
}
