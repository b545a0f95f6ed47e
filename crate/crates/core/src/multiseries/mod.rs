//! Truncated multi-index power series on the polydisc.
//!
//! A [`PolySeries`] stores every coefficient `a_I` with total degree
//! `|I| ≤ D` in a dense graded layout. Products truncate at a caller-given
//! total-degree cap and remember whether anything non-zero was dropped.

mod io;
mod torus;
mod transcendental;

pub use io::{read_coefficients, write_coefficients, CoefficientRecord};
pub use torus::{default_nodes, sup_norm_grid, torus_mean, TorusGrid};
pub use transcendental::{exp_affine, exp_series, log_series, pow_real, ExpAffine};

use crate::C64;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors raised by series construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("only dimensions 1 and 2 are supported (got {0})")]
    UnsupportedDimension(usize),
    #[error("point {0:?} lies outside the open unit polydisc")]
    OutsidePolydisc(Vec<C64>),
    #[error("dilation factor {0} is not in (0, 1)")]
    InvalidDilation(f64),
    #[error("constant term vanishes; the series has no logarithm")]
    VanishingConstant,
    #[error("index {index} has order {order} above the declared maximum degree {max_degree}")]
    DegreeExceeded {
        index: MultiIndex,
        order: usize,
        max_degree: usize,
    },
    #[error("index {0:?} does not have the expected number of entries")]
    BadIndex(Vec<usize>),
    #[error("malformed coefficient data: {0}")]
    Parse(String),
}

/// A multi-index `(i_1, …, i_d)` with `d ∈ {1, 2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    dim: u8,
    entries: [u32; 2],
}

impl MultiIndex {
    pub fn new(entries: &[usize]) -> Result<Self, SeriesError> {
        match entries {
            [a] => Ok(Self::one(*a)),
            [a, b] => Ok(Self::two(*a, *b)),
            _ => Err(SeriesError::BadIndex(entries.to_vec())),
        }
    }

    pub fn one(i: usize) -> Self {
        MultiIndex {
            dim: 1,
            entries: [i as u32, 0],
        }
    }

    pub fn two(i: usize, j: usize) -> Self {
        MultiIndex {
            dim: 2,
            entries: [i as u32, j as u32],
        }
    }

    /// The zero index in dimension `dim`.
    pub fn zero(dim: usize) -> Self {
        MultiIndex {
            dim: dim as u8,
            entries: [0, 0],
        }
    }

    /// `k e_j`: `k` in slot `j`, zeros elsewhere.
    pub fn axis(dim: usize, j: usize, k: usize) -> Self {
        let mut idx = Self::zero(dim);
        idx.entries[j] = k as u32;
        idx
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn get(&self, j: usize) -> usize {
        self.entries[j] as usize
    }

    pub fn entries(&self) -> Vec<usize> {
        self.entries[..self.dim()].iter().map(|&e| e as usize).collect()
    }

    /// Total order `|I|`.
    pub fn order(&self) -> usize {
        self.entries[..self.dim()].iter().map(|&e| e as usize).sum()
    }

    /// Componentwise sum. Panics on a dimension mismatch.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim, other.dim, "multi-index dimension mismatch");
        MultiIndex {
            dim: self.dim,
            entries: [
                self.entries[0] + other.entries[0],
                self.entries[1] + other.entries[1],
            ],
        }
    }

    /// `self − other` when every entry stays nonnegative.
    pub fn checked_minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        Some(MultiIndex {
            dim: self.dim,
            entries: [
                self.entries[0].checked_sub(other.entries[0])?,
                self.entries[1].checked_sub(other.entries[1])?,
            ],
        })
    }

    /// `z^I` at a point.
    pub fn monomial_at(&self, z: &[C64]) -> C64 {
        (0..self.dim()).fold(C64::new(1.0, 0.0), |acc, j| acc * z[j].powu(self.entries[j]))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries())
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<(), SeriesError> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(SeriesError::UnsupportedDimension(dim))
    }
}

/// Number of multi-indices of total degree at most `degree`.
pub fn term_count(dim: usize, degree: usize) -> usize {
    match dim {
        1 => degree + 1,
        _ => (degree + 1) * (degree + 2) / 2,
    }
}

/// Position of `idx` in the graded dense layout.
fn slot(idx: &MultiIndex) -> usize {
    match idx.dim() {
        1 => idx.get(0),
        _ => {
            let n = idx.order();
            n * (n + 1) / 2 + idx.get(1)
        }
    }
}

/// Multi-index stored at a given slot.
fn index_at(dim: usize, pos: usize) -> MultiIndex {
    match dim {
        1 => MultiIndex::one(pos),
        _ => {
            // largest n with n(n+1)/2 <= pos
            let mut n = (((8 * pos + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
            while (n + 1) * (n + 2) / 2 <= pos {
                n += 1;
            }
            while n * (n + 1) / 2 > pos {
                n -= 1;
            }
            let j = pos - n * (n + 1) / 2;
            MultiIndex::two(n - j, j)
        }
    }
}

/// Truncated Taylor series `Σ_{|I| ≤ D} a_I z^I` in one or two variables.
#[derive(Clone, PartialEq)]
pub struct PolySeries {
    dim: usize,
    max_degree: usize,
    coeffs: Vec<C64>,
    truncated: bool,
}

impl fmt::Debug for PolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.terms().collect();
        f.debug_struct("PolySeries")
            .field("dim", &self.dim)
            .field("max_degree", &self.max_degree)
            .field("truncated", &self.truncated)
            .field("terms", &terms)
            .finish()
    }
}

impl PolySeries {
    pub fn zero(dim: usize, max_degree: usize) -> Result<Self, SeriesError> {
        check_dim(dim)?;
        Ok(PolySeries {
            dim,
            max_degree,
            coeffs: vec![C64::new(0.0, 0.0); term_count(dim, max_degree)],
            truncated: false,
        })
    }

    pub fn constant(dim: usize, max_degree: usize, c: C64) -> Result<Self, SeriesError> {
        let mut s = Self::zero(dim, max_degree)?;
        s.coeffs[0] = c;
        Ok(s)
    }

    /// `c z^I` with `max_degree = |I|`.
    pub fn monomial(idx: MultiIndex, c: C64) -> Self {
        let mut s = Self::zero(idx.dim(), idx.order()).expect("multi-index dimension is 1 or 2");
        s.coeffs[slot(&idx)] = c;
        s
    }

    /// Build from explicit coefficients; repeated indices accumulate.
    pub fn from_terms<I>(dim: usize, max_degree: usize, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        let mut s = Self::zero(dim, max_degree)?;
        for (idx, c) in terms {
            if idx.dim() != dim {
                return Err(SeriesError::DimensionMismatch(dim, idx.dim()));
            }
            if idx.order() > max_degree {
                return Err(SeriesError::DegreeExceeded {
                    index: idx,
                    order: idx.order(),
                    max_degree,
                });
            }
            s.coeffs[slot(&idx)] += c;
        }
        Ok(s)
    }

    /// One-variable series from a coefficient vector `[a_0, a_1, …]`.
    pub fn univariate(coeffs: Vec<C64>) -> Self {
        let max_degree = coeffs.len().saturating_sub(1);
        let mut coeffs = coeffs;
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        PolySeries {
            dim: 1,
            max_degree,
            coeffs,
            truncated: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Whether some operation producing this series discarded non-zero terms.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn coeff(&self, idx: &MultiIndex) -> C64 {
        if idx.dim() != self.dim || idx.order() > self.max_degree {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[slot(idx)]
    }

    pub fn set_coeff(&mut self, idx: &MultiIndex, c: C64) -> Result<(), SeriesError> {
        if idx.dim() != self.dim {
            return Err(SeriesError::DimensionMismatch(self.dim, idx.dim()));
        }
        if idx.order() > self.max_degree {
            return Err(SeriesError::DegreeExceeded {
                index: *idx,
                order: idx.order(),
                max_degree: self.max_degree,
            });
        }
        let k = slot(idx);
        self.coeffs[k] = c;
        Ok(())
    }

    /// Constant coefficient `a_0 = f(0)`.
    pub fn constant_term(&self) -> C64 {
        self.coeffs[0]
    }

    /// All stored `(I, a_I)` pairs in graded order, zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, C64)> + '_ {
        let dim = self.dim;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &c)| (index_at(dim, k), c))
    }

    /// Non-zero terms only.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, C64)> + '_ {
        self.iter().filter(|(_, c)| *c != C64::new(0.0, 0.0))
    }

    pub(crate) fn raw(&self) -> &[C64] {
        &self.coeffs
    }

    /// Highest total degree carrying a non-zero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms().map(|(i, _)| i.order()).max()
    }

    fn same_dim(&self, other: &PolySeries) -> Result<(), SeriesError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(SeriesError::DimensionMismatch(self.dim, other.dim))
        }
    }

    /// Re-embed with a different truncation degree, dropping higher terms.
    pub fn with_max_degree(&self, max_degree: usize) -> PolySeries {
        let mut out = Self::zero(self.dim, max_degree).expect("dimension already validated");
        let n = out.coeffs.len().min(self.coeffs.len());
        out.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        out.truncated = self.truncated
            || self.coeffs[n..]
                .iter()
                .any(|c| *c != C64::new(0.0, 0.0));
        out
    }

    /// Coefficientwise sum; the result has the larger of the two degrees.
    pub fn add(&self, other: &PolySeries) -> Result<PolySeries, SeriesError> {
        self.same_dim(other)?;
        let mut out = self.with_max_degree(self.max_degree.max(other.max_degree));
        for (k, c) in other.coeffs.iter().enumerate() {
            out.coeffs[k] += c;
        }
        out.truncated = self.truncated || other.truncated;
        Ok(out)
    }

    pub fn sub(&self, other: &PolySeries) -> Result<PolySeries, SeriesError> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> PolySeries {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|a| *a *= c);
        out
    }

    /// Cauchy product truncated at total degree `cap`.
    pub fn mul(&self, other: &PolySeries, cap: usize) -> Result<PolySeries, SeriesError> {
        self.same_dim(other)?;
        let mut out = Self::zero(self.dim, cap)?;
        let mut dropped = false;
        let zero = C64::new(0.0, 0.0);
        let lhs: Vec<_> = self.terms().collect();
        let rhs: Vec<_> = other.terms().collect();
        for (i, a) in &lhs {
            for (j, b) in &rhs {
                if i.order() + j.order() > cap {
                    dropped |= *a * *b != zero;
                    continue;
                }
                out.coeffs[slot(&i.plus(j))] += a * b;
            }
        }
        out.truncated = dropped || self.truncated || other.truncated;
        Ok(out)
    }

    /// Horner-free direct evaluation at a point of the open polydisc.
    pub fn evaluate(&self, z: &[C64]) -> Result<C64, SeriesError> {
        if z.len() != self.dim {
            return Err(SeriesError::DimensionMismatch(self.dim, z.len()));
        }
        if z.iter().any(|w| w.norm() >= 1.0) {
            return Err(SeriesError::OutsidePolydisc(z.to_vec()));
        }
        Ok(self.eval(z))
    }

    /// Evaluation without the domain check (used on closed sub-polydiscs and
    /// grids whose radii are validated elsewhere).
    pub fn eval(&self, z: &[C64]) -> C64 {
        match self.dim {
            1 => {
                let mut acc = C64::new(0.0, 0.0);
                for c in self.coeffs.iter().rev() {
                    acc = acc * z[0] + c;
                }
                acc
            }
            _ => {
                // Σ_i z1^i Σ_j a_{ij} z2^j, with inner sums by Horner in z2.
                let d = self.max_degree;
                let mut acc = C64::new(0.0, 0.0);
                for i in (0..=d).rev() {
                    let mut inner = C64::new(0.0, 0.0);
                    for j in (0..=d - i).rev() {
                        inner = inner * z[1] + self.coeffs[slot(&MultiIndex::two(i, j))];
                    }
                    acc = acc * z[0] + inner;
                }
                acc
            }
        }
    }

    /// `f_γ(z) = f(γz)`, i.e. `a_I ↦ γ^{|I|} a_I`.
    pub fn dilate(&self, gamma: f64) -> Result<PolySeries, SeriesError> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(SeriesError::InvalidDilation(gamma));
        }
        Ok(self.dilate_unchecked(gamma))
    }

    pub(crate) fn dilate_unchecked(&self, gamma: f64) -> PolySeries {
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c *= gamma.powi(index_at(self.dim, k).order() as i32);
        }
        out
    }

    /// Exact term-wise partial derivative `∂f/∂z_axis`.
    pub fn derivative(&self, axis: usize) -> PolySeries {
        assert!(axis < self.dim, "axis out of range");
        let mut out =
            Self::zero(self.dim, self.max_degree.saturating_sub(1)).expect("valid dimension");
        for (idx, c) in self.terms() {
            let e = idx.get(axis);
            if e == 0 {
                continue;
            }
            let lowered = idx
                .checked_minus(&MultiIndex::axis(self.dim, axis, 1))
                .expect("entry is positive");
            out.coeffs[slot(&lowered)] += c * e as f64;
        }
        out
    }

    /// Multiply coefficient `a_I` by `|I|` (the Euler operator `Σ z_j ∂_j`).
    pub(crate) fn euler(&self) -> PolySeries {
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c *= index_at(self.dim, k).order() as f64;
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise distance to `other` (both embedded at the
    /// larger degree).
    pub fn max_coeff_distance(&self, other: &PolySeries) -> Result<f64, SeriesError> {
        Ok(self.sub(other)?.max_abs_coeff())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn p1(coeffs: &[f64]) -> PolySeries {
        PolySeries::univariate(coeffs.iter().map(|&x| c(x)).collect())
    }

    #[test]
    fn slots_roundtrip() {
        for pos in 0..500 {
            let idx = index_at(2, pos);
            assert_eq!(slot(&idx), pos);
        }
        assert_eq!(index_at(2, 0), MultiIndex::two(0, 0));
        assert_eq!(index_at(2, 1), MultiIndex::two(1, 0));
        assert_eq!(index_at(2, 2), MultiIndex::two(0, 1));
    }

    #[test]
    fn add_examples() {
        let a = p1(&[1.0, 1.0]);
        let b = PolySeries::monomial(MultiIndex::one(1), c(1.0));
        let s = a.add(&b).unwrap();
        assert_eq!(s.coeff(&MultiIndex::one(0)), c(1.0));
        assert_eq!(s.coeff(&MultiIndex::one(1)), c(2.0));
        let z = PolySeries::zero(1, 3).unwrap();
        let t = a.add(&z).unwrap();
        assert_eq!(t.with_max_degree(1), a);
        let two = PolySeries::zero(2, 1).unwrap();
        assert_eq!(
            a.add(&two).unwrap_err(),
            SeriesError::DimensionMismatch(1, 2)
        );
    }

    #[test]
    fn mul_examples() {
        let a = p1(&[1.0, 1.0]);
        let b = p1(&[1.0, -1.0]);
        let p = a.mul(&b, 2).unwrap();
        assert_eq!(p.coeff(&MultiIndex::one(0)), c(1.0));
        assert_eq!(p.coeff(&MultiIndex::one(1)), c(0.0));
        assert_eq!(p.coeff(&MultiIndex::one(2)), c(-1.0));
        assert!(!p.truncated());

        let z1 = PolySeries::monomial(MultiIndex::two(1, 0), c(1.0));
        let z2 = PolySeries::monomial(MultiIndex::two(0, 1), c(1.0));
        let q = z1.mul(&z2, 1).unwrap();
        assert_eq!(q.max_abs_coeff(), 0.0);
        assert!(q.truncated());
    }

    #[test]
    fn evaluate_examples() {
        let f = PolySeries::from_terms(
            2,
            2,
            [
                (MultiIndex::two(0, 0), c(1.0)),
                (MultiIndex::two(1, 1), c(1.0)),
            ],
        )
        .unwrap();
        let v = f.evaluate(&[c(0.5), c(0.5)]).unwrap();
        assert!((v - c(1.25)).norm() < 1e-15);
        assert_eq!(f.evaluate(&[c(0.0), c(0.0)]).unwrap(), c(1.0));
        assert!(matches!(
            f.evaluate(&[c(1.0), c(0.0)]),
            Err(SeriesError::OutsidePolydisc(_))
        ));
    }

    #[test]
    fn degree_cap_on_construction() {
        let err = PolySeries::from_terms(1, 2, [(MultiIndex::one(3), c(1.0))]).unwrap_err();
        assert!(matches!(err, SeriesError::DegreeExceeded { order: 3, .. }));
        assert!(PolySeries::zero(3, 2).is_err());
    }

    #[test]
    fn dilate_examples() {
        let z = PolySeries::monomial(MultiIndex::one(1), c(1.0));
        let d = z.dilate(0.5).unwrap();
        assert_eq!(d.coeff(&MultiIndex::one(1)), c(0.5));
        assert!(z.dilate(1.0).is_err());
        assert!(z.dilate(0.0).is_err());
        let f = p1(&[0.3, -1.0, 2.0, 0.5]);
        let w = C64::new(0.4, -0.3);
        let lhs = f.dilate(0.7).unwrap().eval(&[w]);
        let rhs = f.eval(&[w * 0.7]);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn derivative_of_monomials() {
        let f = PolySeries::monomial(MultiIndex::two(3, 2), c(2.0));
        let d1 = f.derivative(0);
        assert_eq!(d1.coeff(&MultiIndex::two(2, 2)), c(6.0));
        let d2 = f.derivative(1);
        assert_eq!(d2.coeff(&MultiIndex::two(3, 1)), c(4.0));
    }

    fn arb_series(dim: usize, deg: usize) -> impl Strategy<Value = PolySeries> {
        let n = term_count(dim, deg);
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |v| {
            let mut s = PolySeries::zero(dim, deg).unwrap();
            for (k, (re, im)) in v.into_iter().enumerate() {
                s.coeffs[k] = C64::new(re, im);
            }
            s
        })
    }

    proptest! {
        #[test]
        fn add_matches_per_index_sum(a in arb_series(2, 4), b in arb_series(2, 3)) {
            let s = a.add(&b).unwrap();
            for (idx, v) in s.iter() {
                prop_assert_eq!(v, a.coeff(&idx) + b.coeff(&idx));
            }
        }

        #[test]
        fn mul_matches_brute_force(a in arb_series(2, 3), b in arb_series(2, 3)) {
            let p = a.mul(&b, 6).unwrap();
            // brute-force double loop over every index pair
            let mut expect = std::collections::BTreeMap::new();
            for i1 in 0..=3usize { for j1 in 0..=3 - i1 {
                for i2 in 0..=3usize { for j2 in 0..=3 - i2 {
                    let key = (i1 + i2, j1 + j2);
                    let v = a.coeff(&MultiIndex::two(i1, j1)) * b.coeff(&MultiIndex::two(i2, j2));
                    *expect.entry(key).or_insert(C64::new(0.0, 0.0)) += v;
                }}
            }}
            for ((i, j), v) in expect {
                prop_assert!((p.coeff(&MultiIndex::two(i, j)) - v).norm() < 1e-12);
            }
        }

        #[test]
        fn mul_commutative_associative(a in arb_series(2, 3), b in arb_series(2, 3), c3 in arb_series(2, 2)) {
            let ab = a.mul(&b, 5).unwrap();
            let ba = b.mul(&a, 5).unwrap();
            prop_assert!(ab.max_coeff_distance(&ba).unwrap() < 1e-13);
            let l = ab.mul(&c3, 5).unwrap();
            let r = a.mul(&b.mul(&c3, 5).unwrap(), 5).unwrap();
            prop_assert!(l.max_coeff_distance(&r).unwrap() < 1e-12);
        }

        #[test]
        fn dilation_composes(a in arb_series(2, 5), g1 in 0.05f64..0.95, g2 in 0.05f64..0.95) {
            let lhs = a.dilate(g1).unwrap().dilate(g2).unwrap();
            let rhs = a.dilate(g1 * g2).unwrap();
            prop_assert!(lhs.max_coeff_distance(&rhs).unwrap() <= 1e-15);
        }

        #[test]
        fn index_addition_commutes(i in 0usize..50, j in 0usize..50, k in 0usize..50, l in 0usize..50) {
            let a = MultiIndex::two(i, j);
            let b = MultiIndex::two(k, l);
            prop_assert_eq!(a.plus(&b), b.plus(&a));
            prop_assert_eq!(a.plus(&b).order(), a.order() + b.order());
        }
    }
}
