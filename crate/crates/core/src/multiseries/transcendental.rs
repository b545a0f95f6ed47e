//! Formal logarithm, exponential and real powers of truncated series.

use super::{index_at, slot, MultiIndex, PolySeries, SeriesError};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Sub-indices `J ≤ I` componentwise, paired with the complementary `I − J`.
fn sub_indices(idx: &MultiIndex) -> Vec<(MultiIndex, MultiIndex)> {
    let mut out = Vec::new();
    match idx.dim() {
        1 => {
            for a in 0..=idx.get(0) {
                out.push((MultiIndex::one(a), MultiIndex::one(idx.get(0) - a)));
            }
        }
        _ => {
            for a in 0..=idx.get(0) {
                for b in 0..=idx.get(1) {
                    out.push((
                        MultiIndex::two(a, b),
                        MultiIndex::two(idx.get(0) - a, idx.get(1) - b),
                    ));
                }
            }
        }
    }
    out
}

/// Formal `log f` up to total degree `cap`, with the principal branch for
/// the constant term.
///
/// Uses `E(log f) = Ef / f` where `E` multiplies the coefficient of `z^I` by
/// `|I|`; only `f(0) ≠ 0` is needed.
pub fn log_series(f: &PolySeries, cap: usize) -> Result<PolySeries, SeriesError> {
    let f0 = f.constant_term();
    if f0.norm() == 0.0 {
        return Err(SeriesError::VanishingConstant);
    }
    let f = f.with_max_degree(cap);
    let ef = f.euler();
    let n = f.raw().len();
    // h = Ef / f by graded recursion
    let mut h = vec![C64::new(0.0, 0.0); n];
    for pos in 1..n {
        let idx = index_at(f.dim(), pos);
        let mut acc = ef.raw()[pos];
        for (j, rest) in sub_indices(&idx) {
            let sj = slot(&j);
            if sj == pos || sj == 0 {
                continue;
            }
            acc -= h[sj] * f.raw()[slot(&rest)];
        }
        h[pos] = acc / f0;
    }
    let mut out = PolySeries::zero(f.dim(), cap)?;
    out.coeffs[0] = f0.ln();
    for pos in 1..n {
        out.coeffs[pos] = h[pos] / index_at(f.dim(), pos).order() as f64;
    }
    Ok(out)
}

/// Formal `exp g` up to total degree `cap`.
pub fn exp_series(g: &PolySeries, cap: usize) -> Result<PolySeries, SeriesError> {
    let g = g.with_max_degree(cap);
    let eg = g.euler();
    let n = g.raw().len();
    let mut e = vec![C64::new(0.0, 0.0); n];
    e[0] = g.raw()[0].exp();
    for pos in 1..n {
        let idx = index_at(g.dim(), pos);
        let mut acc = C64::new(0.0, 0.0);
        for (j, rest) in sub_indices(&idx) {
            let sj = slot(&j);
            if sj == 0 {
                continue;
            }
            acc += eg.raw()[sj] * e[slot(&rest)];
        }
        e[pos] = acc / idx.order() as f64;
    }
    let mut out = PolySeries::zero(g.dim(), cap)?;
    out.coeffs = e;
    Ok(out)
}

/// `f^t = exp(t log f)` up to total degree `cap`.
pub fn pow_real(f: &PolySeries, t: f64, cap: usize) -> Result<PolySeries, SeriesError> {
    let l = log_series(f, cap)?;
    exp_series(&l.scale(C64::new(t, 0.0)), cap)
}

/// The entire test function `exp(Σ_j b_j z_j − a)`.
///
/// With `b = (1)` and `a = 1` this is `e^{z−1}`, which is zero-free and has
/// sup norm 1 on the disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpAffine {
    pub linear: Vec<f64>,
    pub shift: f64,
}

impl ExpAffine {
    pub fn new(linear: Vec<f64>, shift: f64) -> Self {
        ExpAffine { linear, shift }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    /// Closed-form value at a point.
    pub fn value(&self, z: &[C64]) -> C64 {
        let s: C64 = self
            .linear
            .iter()
            .zip(z)
            .map(|(b, w)| w * *b)
            .sum::<C64>()
            - self.shift;
        s.exp()
    }

    /// Taylor coefficients up to total degree `degree`.
    pub fn series(&self, degree: usize) -> Result<PolySeries, SeriesError> {
        super::check_dim(self.dim())?;
        let mut out = PolySeries::zero(self.dim(), degree)?;
        let scale = (-self.shift).exp();
        for pos in 0..out.coeffs.len() {
            let idx = index_at(self.dim(), pos);
            let mut v = scale;
            for (j, b) in self.linear.iter().enumerate() {
                let k = idx.get(j);
                v *= b.powi(k as i32) / factorial(k);
            }
            out.coeffs[pos] = C64::new(v, 0.0);
        }
        Ok(out)
    }

    /// Bound on the omitted tail `Σ_{|I| > D} |a_I|` on the closed polydisc:
    /// `e^{B − a} B^{D+1} / (D+1)!` with `B = Σ |b_j|`.
    pub fn remainder_bound(&self, degree: usize) -> f64 {
        let b: f64 = self.linear.iter().map(|x| x.abs()).sum();
        (b - self.shift).exp() * b.powi(degree as i32 + 1) / factorial(degree + 1)
    }
}

/// Shorthand for [`ExpAffine::series`].
pub fn exp_affine(linear: &[f64], shift: f64, degree: usize) -> Result<PolySeries, SeriesError> {
    ExpAffine::new(linear.to_vec(), shift).series(degree)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn random_series(rng: &mut ChaCha8Rng, dim: usize, deg: usize, scale: f64) -> PolySeries {
        let mut s = PolySeries::zero(dim, deg).unwrap();
        for k in 1..s.coeffs.len() {
            s.coeffs[k] = C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
        }
        s
    }

    #[test]
    fn log_of_constant_e() {
        let f = PolySeries::constant(1, 4, c(std::f64::consts::E)).unwrap();
        let l = log_series(&f, 4).unwrap();
        assert!((l.constant_term() - c(1.0)).norm() < 1e-15);
        assert!(l.raw()[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn mercator() {
        let f = PolySeries::univariate(vec![c(1.0), c(1.0)]);
        let l = log_series(&f, 3).unwrap();
        let expect = [0.0, 1.0, -0.5, 1.0 / 3.0];
        for (k, e) in expect.iter().enumerate() {
            assert!((l.coeff(&MultiIndex::one(k)) - c(*e)).norm() < 1e-15);
        }
    }

    #[test]
    fn log_rejects_vanishing_constant() {
        let f = PolySeries::monomial(MultiIndex::one(1), c(1.0));
        assert_eq!(log_series(&f, 3).unwrap_err(), SeriesError::VanishingConstant);
        assert!(pow_real(&f, 0.5, 3).is_err());
    }

    #[test]
    fn exp_examples() {
        let zero = PolySeries::zero(2, 3).unwrap();
        let e = exp_series(&zero, 3).unwrap();
        assert_eq!(e.constant_term(), c(1.0));
        assert!(e.raw()[1..].iter().all(|x| x.norm() == 0.0));
        let z = PolySeries::monomial(MultiIndex::one(1), c(1.0));
        let e = exp_series(&z, 2).unwrap();
        for (k, v) in [1.0, 1.0, 0.5].iter().enumerate() {
            assert!((e.coeff(&MultiIndex::one(k)) - c(*v)).norm() < 1e-15);
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [1, 2] {
            for _ in 0..10 {
                let mut f = random_series(&mut rng, dim, 6, 0.4);
                f.coeffs[0] = C64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
                let back = exp_series(&log_series(&f, 6).unwrap(), 6).unwrap();
                assert!(back.max_coeff_distance(&f).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn exp_functional_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [1, 2] {
            let a = random_series(&mut rng, dim, 5, 0.5);
            let b = random_series(&mut rng, dim, 5, 0.5);
            let lhs = exp_series(&a, 5)
                .unwrap()
                .mul(&exp_series(&b, 5).unwrap(), 5)
                .unwrap();
            let rhs = exp_series(&a.add(&b).unwrap(), 5).unwrap();
            assert!(lhs.max_coeff_distance(&rhs).unwrap() < 1e-13);
        }
    }

    #[test]
    fn pow_examples() {
        let u = exp_affine(&[1.0], 1.0, 20).unwrap();
        let p1 = pow_real(&u, 1.0, 20).unwrap();
        assert!(p1.max_coeff_distance(&u).unwrap() < 1e-14);
        let p0 = pow_real(&u, 0.0, 20).unwrap();
        assert!((p0.constant_term() - c(1.0)).norm() < 1e-15);
        assert!(p0.raw()[1..].iter().all(|x| x.norm() < 1e-300));
        // e^{(z-1)/4} in closed form
        let quarter = pow_real(&u, 0.25, 20).unwrap();
        let expect = exp_affine(&[0.25], 0.25, 20).unwrap();
        assert!(quarter.max_coeff_distance(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn pow_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [1, 2] {
            let mut f = random_series(&mut rng, dim, 8, 0.2);
            f.coeffs[0] = c(0.8);
            let (s, t) = (0.3, 1.7);
            let lhs = pow_real(&f, s + t, 8).unwrap();
            let rhs = pow_real(&f, s, 8)
                .unwrap()
                .mul(&pow_real(&f, t, 8).unwrap(), 8)
                .unwrap();
            let rel = lhs.max_coeff_distance(&rhs).unwrap() / lhs.max_abs_coeff();
            assert!(rel < 1e-9, "{rel}");
        }
    }

    #[test]
    fn pow_modulus_on_grid() {
        let u = exp_affine(&[1.0, 1.0], 2.0, 40).unwrap();
        let t = 0.37;
        let p = pow_real(&u, t, 40).unwrap();
        for k in 0..16 {
            let th = k as f64 * 0.4;
            let z = [C64::from_polar(0.8, th), C64::from_polar(0.6, -th)];
            let lhs = p.eval(&z).norm();
            let rhs = u.eval(&z).norm().powf(t);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn exp_affine_truncation_error() {
        let f = ExpAffine::new(vec![1.0], 1.0);
        for deg in [4, 8, 12] {
            let s = f.series(deg).unwrap();
            let z = [c(0.3)];
            let err = (s.eval(&z) - (0.3f64 - 1.0).exp()).norm();
            assert!(err <= f.remainder_bound(deg), "{deg}: {err}");
        }
        assert!((f.remainder_bound(4) - 1.0 / 120.0).abs() < 1e-15);
    }
}
