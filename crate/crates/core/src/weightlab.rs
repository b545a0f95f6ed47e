//! Growth diagnostics of the reduced weight, the doubling subsequence and the
//! parameter plan of the splitting scheme.
//!
//! Every asymptotic statement here is a trend read off a finite table.
//! Divergence of a series is reported through a fitted decay exponent of its
//! terms over the upper half of the range, never as a proof.

use crate::spaces::ReducedWeight;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightLabError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("k_max = {k_max} exceeds the tabulated range {available}")]
    OutOfRange { k_max: usize, available: usize },
    #[error("subsequence too short: Σα² reached {reached} of the threshold {threshold}")]
    InsufficientSubsequence { threshold: f64, reached: f64 },
    #[error("no j₀ with log ω̃(n_j₀) ≥ {a} in the computed subsequence")]
    NoAdmissibleStart { a: f64 },
}

/// Tolerance on fitted exponents when classifying a trend.
pub const TREND_TOLERANCE: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// `sup_k log ω̃(k)/√k = ∞` (trend).
    Unbounded,
    /// `sup_k log ω̃(k)/√k = B < ∞` (trend).
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendFlags {
    pub tends_to_infinity: bool,
    /// `log ω̃(k) = o(k)`.
    pub o_of_k_trend: bool,
    /// `Σ (log ω̃(k)/k)² = ∞`.
    pub div2_trend: bool,
    pub case: Case,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightDiagnostics {
    pub k_max: usize,
    /// `Σ_{1≤j≤k} (log ω̃(j)/j)²` for `k = 1..=k_max`.
    pub partial_sums: Vec<f64>,
    pub sup_log_over_sqrt: f64,
    pub sup_log_over_sqrt_at: usize,
    pub max_log_over_k: f64,
    /// Fitted `η` in `log ω̃(k) ≈ C k^η`; `None` when `log ω̃` is not
    /// positive on the fitting window.
    pub growth_exponent: Option<f64>,
    /// Fitted `γ` in `(log ω̃(k)/k)² ≈ C k^{−γ}`.
    pub div2_decay_exponent: Option<f64>,
    /// `Σ log ω̃(k)/k^{3/2}` up to `k_max`.
    pub cond4_partial_sum: f64,
    pub cond4_decay_exponent: Option<f64>,
    pub cond4_trend: bool,
    /// `log ω̃` is discretely concave on `1..=k_max`.
    pub log_concave: bool,
    pub flags: TrendFlags,
}

/// Least-squares slope of `ln y` against `ln k` over `k ∈ [k_max/2, k_max]`
/// with `y > 0`.
fn loglog_slope(y: impl Fn(usize) -> f64, k_max: usize) -> Option<f64> {
    let lo = (k_max / 2).max(1);
    let pts: Vec<(f64, f64)> = (lo..=k_max)
        .filter_map(|k| {
            let v = y(k);
            (v > 0.0 && v.is_finite()).then(|| ((k as f64).ln(), v.ln()))
        })
        .collect();
    if pts.len() < 2 || pts.len() < (k_max - lo + 1) / 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Diagnostics of `ω̃` on `1..=k_max`.
pub fn diagnose(w: &ReducedWeight, k_max: usize) -> Result<WeightDiagnostics, WeightLabError> {
    if k_max < 4 {
        return Err(WeightLabError::InvalidParameter(format!(
            "k_max = {k_max} is too small for a trend"
        )));
    }
    if k_max > w.k_max() {
        return Err(WeightLabError::OutOfRange {
            k_max,
            available: w.k_max(),
        });
    }
    let term = |k: usize| (w.log(k) / k as f64).powi(2);
    let mut partial_sums = Vec::with_capacity(k_max);
    let mut s = 0.0;
    for k in 1..=k_max {
        s += term(k);
        partial_sums.push(s);
    }
    let (mut sup_sqrt, mut sup_at, mut max_k) = (f64::NEG_INFINITY, 1, f64::NEG_INFINITY);
    for k in 1..=k_max {
        let l = w.log(k);
        let r = l / (k as f64).sqrt();
        if r > sup_sqrt {
            sup_sqrt = r;
            sup_at = k;
        }
        max_k = max_k.max(l / k as f64);
    }
    let growth = loglog_slope(|k| w.log(k), k_max);
    let div2 = loglog_slope(term, k_max);
    let cond4_term = |k: usize| w.log(k) / (k as f64).powf(1.5);
    let cond4_partial_sum = (1..=k_max).map(cond4_term).sum();
    let cond4 = loglog_slope(cond4_term, k_max);
    let log_concave = (2..k_max).all(|k| {
        let second = w.log(k + 1) - 2.0 * w.log(k) + w.log(k - 1);
        second <= 1e-12 * w.log(k).abs().max(1.0)
    });
    let tends_to_infinity = growth.is_some_and(|g| g > TREND_TOLERANCE);
    let flags = TrendFlags {
        tends_to_infinity,
        o_of_k_trend: growth.is_none_or(|g| g < 1.0 - TREND_TOLERANCE),
        div2_trend: div2.is_some_and(|g| g <= 1.0 + TREND_TOLERANCE),
        case: if growth.is_some_and(|g| g > 0.5 + TREND_TOLERANCE) {
            Case::Unbounded
        } else {
            Case::Bounded
        },
    };
    Ok(WeightDiagnostics {
        k_max,
        partial_sums,
        sup_log_over_sqrt: sup_sqrt,
        sup_log_over_sqrt_at: sup_at,
        max_log_over_k: max_k,
        growth_exponent: growth,
        div2_decay_exponent: div2,
        cond4_partial_sum,
        cond4_decay_exponent: cond4,
        cond4_trend: cond4.is_some_and(|g| g <= 1.0 + TREND_TOLERANCE),
        log_concave,
        flags,
    })
}

/// Indices `k ≤ k_max` with `log ω̃(k) ≥ b·√k`.
pub fn sqrt_witnesses(w: &ReducedWeight, b: f64, k_max: usize) -> Vec<usize> {
    (1..=k_max.min(w.k_max()))
        .filter(|&k| w.log(k) >= b * (k as f64).sqrt())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubseqStep {
    pub n: usize,
    pub log_weight: f64,
    /// `log ω̃(n) ≥ C_0 log n`.
    pub in_e: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubseqResult {
    pub c0: f64,
    pub k_max: usize,
    pub steps: Vec<SubseqStep>,
    /// The scan ran past `k_max` without finding the next term.
    pub exhausted: bool,
}

impl SubseqResult {
    pub fn sequence(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.n).collect()
    }

    /// Check the three invariants of the construction: strictly increasing,
    /// `log ω̃(n_{j+1}) ≥ 2 log ω̃(n_j)` and membership in `E` after the seed
    /// `n_0 = 1`.
    pub fn verify(&self) -> Result<(), String> {
        for pair in self.steps.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if b.n <= a.n {
                return Err(format!("not increasing at {} -> {}", a.n, b.n));
            }
            if b.log_weight < 2.0 * a.log_weight {
                return Err(format!("no doubling at {} -> {}", a.n, b.n));
            }
            if b.log_weight < self.c0 * (b.n as f64).ln() || !b.in_e {
                return Err(format!("{} is not in E", b.n));
            }
        }
        Ok(())
    }
}

/// Greedy doubling subsequence: `n_0 = 1` and `n_{j+1}` is the least
/// `n > n_j` in `E = {n : log ω̃(n) ≥ C_0 log n}` with
/// `log ω̃(n) ≥ 2 log ω̃(n_j)`.
pub fn build_subsequence(
    w: &ReducedWeight,
    c0: f64,
    k_max: usize,
) -> Result<SubseqResult, WeightLabError> {
    if !(c0 > 0.0) {
        return Err(WeightLabError::InvalidParameter(format!("C_0 = {c0}")));
    }
    if k_max > w.k_max() || k_max < 1 {
        return Err(WeightLabError::OutOfRange {
            k_max,
            available: w.k_max(),
        });
    }
    let in_e = |n: usize| w.log(n) >= c0 * (n as f64).ln();
    let mut steps = vec![SubseqStep {
        n: 1,
        log_weight: w.log(1),
        in_e: in_e(1),
    }];
    let mut target = 2.0 * w.log(1);
    for n in 2..=k_max {
        let l = w.log(n);
        if l >= target && in_e(n) {
            steps.push(SubseqStep {
                n,
                log_weight: l,
                in_e: true,
            });
            target = 2.0 * l;
        }
    }
    // The scan always ends at k_max; the sequence is exhausted unless k_max
    // itself was the last accepted term.
    let exhausted = steps.last().map(|s| s.n) != Some(k_max);
    Ok(SubseqResult {
        c0,
        k_max,
        steps,
        exhausted,
    })
}

/// Overrides of the proof constants for feasible experiments.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Aggressive {
    pub a: Option<f64>,
    pub b: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitOptions {
    /// Constant of the Bezout theorem, not given numerically by the theory.
    pub c_of_d: f64,
    pub aggressive: Option<Aggressive>,
}

impl Default for SplitOptions {
    fn default() -> Self {
        Self {
            c_of_d: 10.0,
            aggressive: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitPlan {
    pub c: f64,
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub c0: f64,
    pub c1: f64,
    pub j0: usize,
    pub aggressive: bool,
    /// `(4(2d+1)Ac)²`.
    pub threshold: f64,
    /// Indices `n_{j₀+j}`, `j = 1..=N`.
    pub indices: Vec<usize>,
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
}

impl SplitPlan {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Minimality of `N`, `Σλ² = 1` and the two-sided bound on each `λ_j`.
    pub fn verify(&self) -> Result<(), String> {
        let sq: Vec<f64> = self.alphas.iter().map(|a| a * a).collect();
        let total: f64 = sq.iter().sum();
        if total < self.threshold {
            return Err(format!("Σα² = {total} below threshold"));
        }
        let before: f64 = sq[..sq.len() - 1].iter().sum();
        if before >= self.threshold {
            return Err("N is not minimal".into());
        }
        let norm: f64 = self.lambdas.iter().map(|l| l * l).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(format!("Σλ² = {norm}"));
        }
        let den = self.threshold.sqrt();
        for (j, (&a, &l)) in self.alphas.iter().zip(&self.lambdas).enumerate() {
            let lo = a / self.c1;
            let hi = a / den;
            if l < lo * (1.0 - 1e-12) || l > hi * (1.0 + 1e-12) {
                return Err(format!("λ_{} = {l} outside [{lo}, {hi}]", j + 1));
            }
        }
        Ok(())
    }
}

/// Plan from an explicit list `α_1, α_2, …`: `N` is the least index with
/// `Σ_{j≤N} α_j² ≥ (4(2d+1)Ac)²`, `λ_j = α_j/(Σ_{i≤N} α_i²)^{1/2}` and
/// `C_1² = (4(2d+1)Ac)² + B²`.
pub fn plan_from_alphas(
    alphas: &[f64],
    a: f64,
    b: f64,
    c: f64,
    d: usize,
) -> Result<(usize, f64, f64, Vec<f64>), WeightLabError> {
    if !(c > 0.0) || !(a > 0.0) || d == 0 {
        return Err(WeightLabError::InvalidParameter(format!(
            "c = {c}, A = {a}, d = {d}"
        )));
    }
    let threshold = (4.0 * (2 * d + 1) as f64 * a * c).powi(2);
    let mut total = 0.0;
    let mut n = None;
    for (j, al) in alphas.iter().enumerate() {
        total += al * al;
        if total >= threshold {
            n = Some(j + 1);
            break;
        }
    }
    let n = n.ok_or(WeightLabError::InsufficientSubsequence {
        threshold,
        reached: total,
    })?;
    let scale = total.sqrt();
    let lambdas = alphas[..n].iter().map(|al| al / scale).collect();
    let c1 = (threshold + b * b).sqrt();
    Ok((n, threshold, c1, lambdas))
}

/// Split plan over the subsequence after `j₀`, with
/// `α_j² = (log ω̃(n_{j₀+j}))²/n_{j₀+j}` and `A = max(2, ln C(d))`.
///
/// `j0 = None` picks the least `j₀` with `log ω̃(n_{j₀}) ≥ A`.
pub fn plan_split(
    w: &ReducedWeight,
    c: f64,
    d: usize,
    j0: Option<usize>,
    subseq: &SubseqResult,
    opts: &SplitOptions,
) -> Result<SplitPlan, WeightLabError> {
    let aggressive = opts.aggressive.clone();
    let a = aggressive
        .as_ref()
        .and_then(|g| g.a)
        .unwrap_or_else(|| 2f64.max(opts.c_of_d.ln()));
    let k_max = subseq.k_max.min(w.k_max());
    let b = match aggressive.as_ref().and_then(|g| g.b) {
        Some(b) => b,
        None => (1..=k_max)
            .map(|k| w.log(k) / (k as f64).sqrt())
            .fold(f64::NEG_INFINITY, f64::max),
    };
    let seq = subseq.sequence();
    let j0 = match j0 {
        Some(j) => j,
        None => seq
            .iter()
            .position(|&n| w.log(n) >= a)
            .ok_or(WeightLabError::NoAdmissibleStart { a })?,
    };
    let indices: Vec<usize> = seq.iter().skip(j0 + 1).copied().collect();
    let alphas: Vec<f64> = indices
        .iter()
        .map(|&n| w.log(n) / (n as f64).sqrt())
        .collect();
    let (n, threshold, c1, lambdas) = plan_from_alphas(&alphas, a, b, c, d)?;
    Ok(SplitPlan {
        c,
        d,
        a,
        b,
        c0: subseq.c0,
        c1,
        j0,
        aggressive: aggressive.is_some(),
        threshold,
        indices: indices[..n].to_vec(),
        alphas: alphas[..n].to_vec(),
        lambdas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_weight(k_max: usize) -> ReducedWeight {
        ReducedWeight::from_log_fn(1, k_max, |k| (k as f64).sqrt()).unwrap()
    }

    #[test]
    fn sqrt_growth_is_bounded_case_and_divergent() {
        let d = diagnose(&sqrt_weight(4096), 4096).unwrap();
        assert_eq!(d.flags.case, Case::Bounded);
        assert!(d.flags.div2_trend && d.flags.tends_to_infinity && d.flags.o_of_k_trend);
        assert!((d.sup_log_over_sqrt - 1.0).abs() < 1e-12);
        // harmonic partial sums
        let h: f64 = (1..=4096).map(|k| 1.0 / k as f64).sum();
        assert!((d.partial_sums[4095] - h).abs() < 1e-9);
    }

    #[test]
    fn constant_weight_has_no_growth() {
        let w = ReducedWeight::from_log(1, vec![0.0; 101]).unwrap();
        let d = diagnose(&w, 100).unwrap();
        assert!(d.partial_sums.iter().all(|&s| s == 0.0));
        assert!(!d.flags.div2_trend && !d.flags.tends_to_infinity);
        let s = build_subsequence(&w, 1.0, 100).unwrap();
        assert_eq!(s.sequence(), vec![1]);
        assert!(s.exhausted);
    }

    #[test]
    fn faster_growth_is_unbounded_case() {
        let w = ReducedWeight::from_log_fn(1, 4096, |k| (k as f64).powf(0.6)).unwrap();
        assert_eq!(diagnose(&w, 4096).unwrap().flags.case, Case::Unbounded);
    }

    #[test]
    fn quadrupling() {
        let s = build_subsequence(&sqrt_weight(5000), 1.0, 5000).unwrap();
        assert_eq!(s.sequence(), vec![1, 4, 16, 64, 256, 1024, 4096]);
        s.verify().unwrap();
    }

    #[test]
    fn unit_alphas() {
        let (n, threshold, _, lambdas) = plan_from_alphas(&vec![1.0; 1000], 2.0, 1.0, 1.0, 1).unwrap();
        assert_eq!(threshold, 576.0);
        assert_eq!(n, 576);
        assert!(lambdas.iter().all(|l| (l - 1.0 / 24.0).abs() < 1e-15));
    }

    #[test]
    fn single_large_alpha() {
        let (n, _, _, lambdas) = plan_from_alphas(&[30.0, 1.0], 2.0, 30.0, 1.0, 1).unwrap();
        assert_eq!(n, 1);
        assert_eq!(lambdas, vec![1.0]);
    }

    #[test]
    fn short_subsequence_is_reported() {
        let err = plan_from_alphas(&[1.0, 1.0], 2.0, 1.0, 1.0, 1).unwrap_err();
        assert!(matches!(err, WeightLabError::InsufficientSubsequence { .. }));
    }

    #[test]
    fn aggressive_plan_verifies() {
        let w = sqrt_weight(100_000);
        let s = build_subsequence(&w, 1.0, 100_000).unwrap();
        let opts = SplitOptions {
            c_of_d: 10.0,
            aggressive: Some(Aggressive {
                a: Some(0.1),
                b: None,
            }),
        };
        let plan = plan_split(&w, 0.5, 1, None, &s, &opts).unwrap();
        plan.verify().unwrap();
        assert!(plan.aggressive);
    }
}
