//! Exterior-algebra fields `Σ c_{α,β} e_α ⊗ dz̄_β` sampled on a grid.
//!
//! Products multiply the `e` parts and the `dz̄` parts separately, with no
//! sign for moving a `dz̄` past an `e` (ungraded tensor product). Under this
//! convention `d_f` acts on the `e` part only, commutes with `∂̄`, and
//! satisfies `d_f(ω ∧ e_j) = f_j ω − d_f(ω) ∧ e_j`.

use super::KoszulError;
use crate::dbar::Grid;
use crate::{par, C64};
use std::collections::BTreeMap;

/// Strictly increasing subset of `{0, …, 31}`, stored as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExteriorIndex(u32);

impl ExteriorIndex {
    pub const EMPTY: ExteriorIndex = ExteriorIndex(0);

    /// Zero-based indices; must be strictly increasing and below 32.
    pub fn new(indices: &[usize]) -> Result<Self, KoszulError> {
        let mut mask = 0u32;
        for (k, &i) in indices.iter().enumerate() {
            if i >= 32 || (k > 0 && indices[k - 1] >= i) {
                return Err(KoszulError::BadIndex(indices.to_vec()));
            }
            mask |= 1 << i;
        }
        Ok(ExteriorIndex(mask))
    }

    pub fn single(i: usize) -> Self {
        ExteriorIndex(1 << i)
    }

    pub fn from_mask(mask: u32) -> Self {
        ExteriorIndex(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn elements(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    pub fn without(self, i: usize) -> Self {
        ExteriorIndex(self.0 & !(1 << i))
    }

    /// Sign of `e_self ∧ e_other` relative to the sorted basis element, or
    /// `None` when the two overlap.
    pub fn wedge_sign(self, other: ExteriorIndex) -> Option<f64> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: u32 = other
            .elements()
            .iter()
            .map(|&c| (u64::from(self.0) >> (c + 1)).count_ones())
            .sum();
        Some(if inversions % 2 == 0 { 1.0 } else { -1.0 })
    }

    pub fn union(self, other: ExteriorIndex) -> Self {
        ExteriorIndex(self.0 | other.0)
    }

    /// All subsets of `{0, …, n−1}` of size `k`, in increasing mask order.
    pub fn subsets(n: usize, k: usize) -> Vec<ExteriorIndex> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(ExteriorIndex)
            .collect()
    }
}

/// Form of exterior degree `k` in `e_1, …, e_N` and bidegree `(0, r)`, with
/// one sampled coefficient per basis pair `(e_α, dz̄_β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    n: usize,
    dim: usize,
    e_degree: usize,
    dz_degree: usize,
    nodes: usize,
    coeffs: BTreeMap<(ExteriorIndex, ExteriorIndex), Vec<C64>>,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl FormField {
    /// All coefficients zero. Degrees beyond `n` or `dim` give the empty form.
    pub fn zero(n: usize, dim: usize, e_degree: usize, dz_degree: usize, nodes: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        for a in ExteriorIndex::subsets(n, e_degree) {
            for b in ExteriorIndex::subsets(dim, dz_degree) {
                coeffs.insert((a, b), vec![C64::new(0.0, 0.0); nodes]);
            }
        }
        FormField {
            n,
            dim,
            e_degree,
            dz_degree,
            nodes,
            coeffs,
        }
    }

    /// Degree-`(0,0)` form with the given scalar coefficient.
    pub fn scalar(n: usize, dim: usize, values: Vec<C64>) -> Self {
        let mut f = FormField::zero(n, dim, 0, 0, values.len());
        f.coeffs
            .insert((ExteriorIndex::EMPTY, ExteriorIndex::EMPTY), values);
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn e_degree(&self) -> usize {
        self.e_degree
    }

    pub fn dz_degree(&self) -> usize {
        self.dz_degree
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Number of stored coefficients, `C(N,k)·C(d,r)`.
    pub fn coefficient_count(&self) -> usize {
        debug_assert_eq!(
            self.coeffs.len(),
            binom(self.n, self.e_degree) * binom(self.dim, self.dz_degree)
        );
        self.coeffs.len()
    }

    pub fn coeff(&self, e: ExteriorIndex, dz: ExteriorIndex) -> Option<&[C64]> {
        self.coeffs.get(&(e, dz)).map(Vec::as_slice)
    }

    pub fn coeff_mut(&mut self, e: ExteriorIndex, dz: ExteriorIndex) -> Option<&mut Vec<C64>> {
        self.coeffs.get_mut(&(e, dz))
    }

    pub fn terms(&self) -> impl Iterator<Item = (ExteriorIndex, ExteriorIndex, &[C64])> {
        self.coeffs.iter().map(|(&(a, b), v)| (a, b, v.as_slice()))
    }

    fn same_shape(&self, other: &FormField) -> Result<(), KoszulError> {
        if self.n != other.n
            || self.dim != other.dim
            || self.e_degree != other.e_degree
            || self.dz_degree != other.dz_degree
            || self.nodes != other.nodes
        {
            return Err(KoszulError::ShapeMismatch);
        }
        Ok(())
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &FormField) -> Result<FormField, KoszulError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (key, v) in out.coeffs.iter_mut() {
            for (a, b) in v.iter_mut().zip(&other.coeffs[key]) {
                *a += b * c;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> FormField {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            for a in v.iter_mut() {
                *a *= c;
            }
        }
        out
    }

    /// Largest coefficient modulus over all coefficients and nodes.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|v| par::max_range(v.len(), |k| v[k].norm()))
            .fold(0.0, f64::max)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &FormField) -> Result<f64, KoszulError> {
        Ok(self.axpy(-1.0, other)?.norm())
    }

    /// Exterior product. Degree overflow yields the (empty) zero form of the
    /// summed degrees.
    pub fn wedge(&self, other: &FormField) -> Result<FormField, KoszulError> {
        if self.n != other.n || self.dim != other.dim || self.nodes != other.nodes {
            return Err(KoszulError::ShapeMismatch);
        }
        let mut out = FormField::zero(
            self.n,
            self.dim,
            self.e_degree + other.e_degree,
            self.dz_degree + other.dz_degree,
            self.nodes,
        );
        for (&(ea, da), va) in &self.coeffs {
            for (&(eb, db), vb) in &other.coeffs {
                let (Some(se), Some(sd)) = (ea.wedge_sign(eb), da.wedge_sign(db)) else {
                    continue;
                };
                let sign = se * sd;
                let target = out
                    .coeffs
                    .get_mut(&(ea.union(eb), da.union(db)))
                    .expect("basis pair of the product degree");
                accumulate(target, |k| va[k] * vb[k] * sign);
            }
        }
        Ok(out)
    }

    /// Koszul contraction `d_f(e_α) = Σ_m (−1)^{k−1−m} f_{α_m} e_{α∖α_m}`,
    /// with `f_values[j]` the samples of `f_j`. Degree-0 forms map to zero.
    pub fn contract(&self, f_values: &[Vec<C64>]) -> Result<FormField, KoszulError> {
        if f_values.len() != self.n || f_values.iter().any(|v| v.len() != self.nodes) {
            return Err(KoszulError::ShapeMismatch);
        }
        let k = self.e_degree;
        let mut out = FormField::zero(
            self.n,
            self.dim,
            k.saturating_sub(1),
            self.dz_degree,
            self.nodes,
        );
        if k == 0 {
            return Ok(out);
        }
        for (&(e, dz), v) in &self.coeffs {
            for (m, j) in e.elements().into_iter().enumerate() {
                let sign = if (k - 1 - m) % 2 == 0 { 1.0 } else { -1.0 };
                let fj = &f_values[j];
                let target = out.coeffs.get_mut(&(e.without(j), dz)).expect("basis pair");
                accumulate(target, |q| v[q] * fj[q] * sign);
            }
        }
        Ok(out)
    }

    /// `∂̄` by finite differences: `∂̄(c e_α ⊗ dz̄_β) = Σ_i ∂̄_i c · e_α ⊗ dz̄_i∧dz̄_β`.
    pub fn dbar_fd<G: Grid + ?Sized>(&self, grid: &G) -> Result<FormField, KoszulError> {
        if grid.dim() != self.dim || grid.node_count() != self.nodes {
            return Err(KoszulError::ShapeMismatch);
        }
        let mut out = FormField::zero(
            self.n,
            self.dim,
            self.e_degree,
            self.dz_degree + 1,
            self.nodes,
        );
        for (&(e, dz), v) in &self.coeffs {
            for i in 0..self.dim {
                let Some(sign) = ExteriorIndex::single(i).wedge_sign(dz) else {
                    continue;
                };
                let d = grid.dbar(v, i);
                let target = out
                    .coeffs
                    .get_mut(&(e, dz.union(ExteriorIndex::single(i))))
                    .expect("basis pair");
                accumulate(target, |q| d[q] * sign);
            }
        }
        Ok(out)
    }
}

fn accumulate<F: Fn(usize) -> C64 + Sync + Send>(target: &mut [C64], term: F) {
    const CHUNK: usize = 1 << 14;
    par::for_each_chunk_mut(target, CHUNK, |c, chunk| {
        for (i, t) in chunk.iter_mut().enumerate() {
            *t += term(c * CHUNK + i);
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, e: &[usize], nodes: usize) -> FormField {
        let mut f = FormField::zero(n, 1, e.len(), 0, nodes);
        f.coeff_mut(ExteriorIndex::new(e).unwrap(), ExteriorIndex::EMPTY)
            .unwrap()
            .iter_mut()
            .for_each(|c| *c = C64::new(1.0, 0.0));
        f
    }

    fn value(f: &FormField, e: &[usize]) -> C64 {
        f.coeff(ExteriorIndex::new(e).unwrap(), ExteriorIndex::EMPTY).unwrap()[0]
    }

    #[test]
    fn index_validation() {
        assert!(ExteriorIndex::new(&[0, 2, 5]).is_ok());
        assert!(ExteriorIndex::new(&[2, 1]).is_err());
        assert!(ExteriorIndex::new(&[1, 1]).is_err());
        assert_eq!(ExteriorIndex::new(&[0, 3]).unwrap().elements(), vec![0, 3]);
    }

    #[test]
    fn wedge_signs() {
        let e = ExteriorIndex::single;
        assert_eq!(e(0).wedge_sign(e(0)), None);
        assert_eq!(e(0).wedge_sign(e(1)), Some(1.0));
        assert_eq!(e(1).wedge_sign(e(0)), Some(-1.0));
        let e02 = ExteriorIndex::new(&[0, 2]).unwrap();
        assert_eq!(e02.wedge_sign(e(1)), Some(-1.0));
        assert_eq!(e(1).wedge_sign(e02), Some(-1.0));
        assert_eq!(e(3).wedge_sign(e02), Some(1.0));
    }

    #[test]
    fn basis_products() {
        let e1 = basis(3, &[0], 1);
        let e2 = basis(3, &[1], 1);
        assert_eq!(e1.wedge(&e1).unwrap().norm(), 0.0);
        assert_eq!(value(&e1.wedge(&e2).unwrap(), &[0, 1]), C64::new(1.0, 0.0));
        assert_eq!(value(&e2.wedge(&e1).unwrap(), &[0, 1]), C64::new(-1.0, 0.0));
        let overflow = basis(2, &[0, 1], 1).wedge(&basis(2, &[0], 1)).unwrap();
        assert_eq!(overflow.coefficient_count(), 0);
    }

    #[test]
    fn contraction_of_pair() {
        let f = vec![vec![C64::new(2.0, 0.0)], vec![C64::new(0.0, 3.0)]];
        let d = basis(2, &[0, 1], 1).contract(&f).unwrap();
        assert_eq!(value(&d, &[0]), C64::new(0.0, 3.0));
        assert_eq!(value(&d, &[1]), C64::new(-2.0, 0.0));
        let scalar = FormField::scalar(2, 1, vec![C64::new(1.0, 0.0)]);
        assert_eq!(scalar.contract(&f).unwrap().norm(), 0.0);
    }

    #[test]
    fn coefficient_counts() {
        assert_eq!(FormField::zero(3, 2, 2, 1, 4).coefficient_count(), 6);
        assert_eq!(FormField::zero(3, 2, 3, 2, 4).coefficient_count(), 1);
        assert_eq!(FormField::zero(4, 2, 2, 0, 4).coefficient_count(), 6);
    }
}
