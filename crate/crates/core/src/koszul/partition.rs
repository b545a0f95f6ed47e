//! Smooth partition of unity `χ_1, …, χ_N` adapted to Corona data.
//!
//! With `g = Σ_{j<N} |f_j|`:
//! `ψ_j = s((|f_j| − δ/5N) / (δ/4N − δ/5N))` for `j < N`, and
//! `ψ_N = 1 − s((g − (N−1)δ/4N) / ((N−1)δ/4N))`, where `s` is [`smooth_ramp`];
//! then `χ_j = ψ_j / Σ_k ψ_k`. The ramps make `χ_j` vanish where `f_j` is small,
//! so `|χ_j/f_j| ≤ 5N/δ`.

use super::problem::CoronaProblem;
use super::KoszulError;
use crate::{par, C64};
use serde::Serialize;

/// `C^∞` ramp `s(t) = 1/(1 + e^{1/t − 1/(1−t)})` on `(0,1)`, equal to 0 for
/// `t ≤ 0` and 1 for `t ≥ 1`. Returns `(s(t), s'(t))`.
pub fn smooth_ramp(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0);
    }
    let x = 1.0 / t - 1.0 / (1.0 - t);
    if x > 700.0 {
        return (0.0, 0.0);
    }
    if x < -700.0 {
        return (1.0, 0.0);
    }
    let s = 1.0 / (1.0 + x.exp());
    let ds = s * (1.0 - s) * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)));
    (s, ds)
}

/// The four cutoff levels of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// `δ/(5N)`: `ψ_j = 0` below this value of `|f_j|`.
    pub lower: f64,
    /// `δ/(4N)`: `ψ_j = 1` above it.
    pub upper: f64,
    /// `(N−1)δ/(4N)`: `ψ_N = 1` below this value of `g`.
    pub last_lower: f64,
    /// `(N−1)δ/(2N)`: `ψ_N = 0` above it.
    pub last_upper: f64,
}

impl Thresholds {
    pub fn new(delta: f64, n: usize) -> Self {
        let nf = n as f64;
        Thresholds {
            lower: delta / (5.0 * nf),
            upper: delta / (4.0 * nf),
            last_lower: (nf - 1.0) * delta / (4.0 * nf),
            last_upper: (nf - 1.0) * delta / (2.0 * nf),
        }
    }
}

/// Sampled partition of unity with its analytic `∂̄` derivatives.
#[derive(Clone, Debug)]
pub struct Partition {
    pub thresholds: Thresholds,
    /// `chi[j][node]`.
    pub chi: Vec<Vec<f64>>,
    /// `dbar_chi[j][i][node] = ∂χ_j/∂z̄_i`.
    pub dbar_chi: Vec<Vec<Vec<C64>>>,
    /// `Σ_k ψ_k` at every node (at least 1 when the cover holds).
    pub psi_sum: Vec<f64>,
}

/// `∂̄_i|f| = f·conj(∂_i f)/(2|f|)` for holomorphic `f`, taken as 0 where `f = 0`.
fn dbar_modulus(f: C64, df: C64) -> C64 {
    let a = f.norm();
    if a == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        f * df.conj() / (2.0 * a)
    }
}

/// Build the partition for `prob`; fails if `Σψ = 0` at some node.
pub fn partition_of_unity(prob: &CoronaProblem) -> Result<Partition, KoszulError> {
    let n = prob.len();
    let d = prob.dim();
    let th = Thresholds::new(prob.delta(), n);
    let vals = prob.values();
    let grads = prob.gradients();
    let nodes = vals[0].len();
    let width = th.upper - th.lower;
    let last_width = th.last_lower;
    let zero = C64::new(0.0, 0.0);

    // ψ_j and ∂̄_iψ_j at node k; d ≤ 2.
    let ramp = |j: usize, k: usize| -> (f64, [C64; 2]) {
        let mut dpsi = [zero; 2];
        if j + 1 < n {
            let (s, ds) = smooth_ramp((vals[j][k].norm() - th.lower) / width);
            for (i, dp) in dpsi.iter_mut().enumerate().take(d) {
                *dp = dbar_modulus(vals[j][k], grads[j][i][k]) * (ds / width);
            }
            return (s, dpsi);
        }
        let mut g = 0.0;
        let mut dg = [zero; 2];
        for m in 0..n - 1 {
            g += vals[m][k].norm();
            for (i, x) in dg.iter_mut().enumerate().take(d) {
                *x += dbar_modulus(vals[m][k], grads[m][i][k]);
            }
        }
        let (s, ds) = smooth_ramp((g - th.last_lower) / last_width);
        for i in 0..d {
            dpsi[i] = -dg[i] * (ds / last_width);
        }
        (1.0 - s, dpsi)
    };
    let mut psi = Vec::with_capacity(n);
    let mut dpsi = Vec::with_capacity(n);
    for j in 0..n {
        let both = par::map_range(nodes, |k| ramp(j, k));
        psi.push(both.iter().map(|b| b.0).collect::<Vec<f64>>());
        dpsi.push(
            (0..d)
                .map(|i| both.iter().map(|b| b.1[i]).collect::<Vec<C64>>())
                .collect::<Vec<_>>(),
        );
    }
    let psi_sum = par::map_range(nodes, |k| (0..n).map(|j| psi[j][k]).sum::<f64>());
    if let Some(k) = psi_sum.iter().position(|t| !(*t > 0.0)) {
        return Err(KoszulError::CoverFailure(format!(
            "Σψ = 0 at node {k}; δ = {:e} is too large for this data",
            prob.delta()
        )));
    }
    let dtotal: Vec<Vec<C64>> = (0..d)
        .map(|i| par::map_range(nodes, |k| (0..n).map(|j| dpsi[j][i][k]).sum::<C64>()))
        .collect();
    let chi: Vec<Vec<f64>> = psi
        .iter()
        .map(|p| par::map_range(nodes, |k| p[k] / psi_sum[k]))
        .collect();
    let dbar_chi: Vec<Vec<Vec<C64>>> = (0..n)
        .map(|j| {
            (0..d)
                .map(|i| {
                    par::map_range(nodes, |k| {
                        let t = psi_sum[k];
                        dpsi[j][i][k] / t - dtotal[i][k] * (psi[j][k] / (t * t))
                    })
                })
                .collect()
        })
        .collect();
    Ok(Partition {
        thresholds: th,
        chi,
        dbar_chi,
        psi_sum,
    })
}

/// Outcome of checking the partition invariants at every node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionReport {
    /// `max |Σχ_j − 1|`.
    pub sum_defect: f64,
    /// Smallest and largest `χ_j` seen.
    pub chi_min: f64,
    pub chi_max: f64,
    /// `max_j sup |χ_j/f_j|` against the bound `5N/δ`.
    pub ratio_sup: f64,
    pub ratio_bound: f64,
    /// Nodes violating a support condition.
    pub support_violations: usize,
    pub min_psi_sum: f64,
}

impl PartitionReport {
    /// Σχ = 1 to `1e-12`, `0 ≤ χ ≤ 1`, supports respected, `|χ_j/f_j| ≤ 5N/δ`
    /// and `Σψ ≥ 1`.
    pub fn holds(&self) -> bool {
        self.sum_defect <= 1e-12
            && self.chi_min >= 0.0
            && self.chi_max <= 1.0 + 1e-15
            && self.support_violations == 0
            && self.ratio_sup <= self.ratio_bound
            && self.min_psi_sum >= 1.0 - 1e-12
    }
}

impl Partition {
    /// `C_f = N·sup_j |χ_j/f_j|`.
    pub fn c_f(&self, prob: &CoronaProblem) -> f64 {
        prob.len() as f64 * self.ratio_sup(prob)
    }

    fn ratio_sup(&self, prob: &CoronaProblem) -> f64 {
        let vals = prob.values();
        (0..prob.len())
            .map(|j| {
                par::max_range(vals[j].len(), |k| {
                    if self.chi[j][k] == 0.0 {
                        0.0
                    } else {
                        self.chi[j][k] / vals[j][k].norm()
                    }
                })
            })
            .fold(0.0, f64::max)
    }

    /// `D'_f = N·sup_j |∇χ_j|/|f_j|`, with `|∇χ|² = 4Σ_i|∂̄_iχ|²` for real `χ`.
    pub fn d_prime_f(&self, prob: &CoronaProblem) -> f64 {
        let vals = prob.values();
        let n = prob.len();
        let sup = (0..n)
            .map(|j| {
                par::max_range(vals[j].len(), |k| {
                    let grad2: f64 = self.dbar_chi[j].iter().map(|v| v[k].norm_sqr()).sum();
                    if grad2 == 0.0 {
                        0.0
                    } else {
                        2.0 * grad2.sqrt() / vals[j][k].norm()
                    }
                })
            })
            .fold(0.0, f64::max);
        n as f64 * sup
    }

    pub fn check(&self, prob: &CoronaProblem) -> PartitionReport {
        let n = prob.len();
        let vals = prob.values();
        let nodes = vals[0].len();
        let th = self.thresholds;
        let sum_defect = par::max_range(nodes, |k| {
            ((0..n).map(|j| self.chi[j][k]).sum::<f64>() - 1.0).abs()
        });
        let chi_min = (0..n)
            .map(|j| par::min_range(nodes, |k| self.chi[j][k]))
            .fold(f64::INFINITY, f64::min);
        let chi_max = (0..n)
            .map(|j| par::max_range(nodes, |k| self.chi[j][k]))
            .fold(f64::NEG_INFINITY, f64::max);
        let support_violations = (0..nodes)
            .filter(|&k| {
                let g: f64 = (0..n - 1).map(|j| vals[j][k].norm()).sum();
                (0..n - 1).any(|j| vals[j][k].norm() <= th.lower && self.chi[j][k] != 0.0)
                    || (g >= th.last_upper && self.chi[n - 1][k] != 0.0)
            })
            .count();
        PartitionReport {
            sum_defect,
            chi_min,
            chi_max,
            ratio_sup: self.ratio_sup(prob),
            ratio_bound: 5.0 * n as f64 / prob.delta(),
            support_violations,
            min_psi_sum: par::min_range(nodes, |k| self.psi_sum[k]),
        }
    }
}
