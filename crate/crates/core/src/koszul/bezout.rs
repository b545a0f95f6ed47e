//! The Koszul-complex construction of holomorphic Bezout solutions.
//!
//! Starting from `η = Σ (χ_j/f_j) e_j`, the forms
//! `ω_{k,k} = ∂̄ω_{k,k−1}` and `ω_{k+1,k} = ω_{k,k} ∧ η` are built for
//! `k = 0, …, d`. Because `∂̄η` is known in closed form from the partition,
//! `ω_{k,k} = (−1)^{k−1} ω_{k−1,k−1} ∧ ∂̄η` is evaluated exactly instead of by
//! differentiating sampled data. The descending pass solves
//! `∂̄α_{k+1,k−1} = ω_{k+1,k} − α_{k+1,k}` and sets `α_{k,k−1} = d_f α_{k+1,k−1}`;
//! the components of `ω_{1,0} − α_{1,0}` are the solution `g_j`.

use super::exterior::{ExteriorIndex, FormField};
use super::partition::{partition_of_unity, Partition, PartitionReport};
use super::problem::{CoronaProblem, Domain};
use super::KoszulError;
use crate::dbar::{self, DbarCertificate, Grid, ScalarField};
use crate::{par, C64};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BezoutOptions {
    /// Constant `C(d,Ω)` in the reported bound `C·N^{4d+2}·‖∇f‖^d/δ^{2d+1}`.
    pub bound_constant: f64,
    /// Fail when `max|Σ f_j g_j − 1|` exceeds this.
    pub residual_tol: Option<f64>,
    /// Reject `(0,1)` right-hand sides whose relative closedness defect
    /// exceeds this (bidisc only).
    pub closedness_tol: Option<f64>,
}

impl Default for BezoutOptions {
    fn default() -> Self {
        BezoutOptions {
            bound_constant: 10.0,
            residual_tol: None,
            closedness_tol: None,
        }
    }
}

/// Checks recorded at level `k` of the ascending construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCheck {
    pub k: usize,
    /// `‖d_f ω_{k+1,k} − ω_{k,k}‖`.
    pub contraction_defect: f64,
    pub diagonal_norm: f64,
    /// `(D'_f)^k`.
    pub diagonal_bound: f64,
    pub upper_norm: f64,
    /// `C_f (D'_f)^k`.
    pub upper_bound: f64,
}

impl LevelCheck {
    pub fn within_bounds(&self) -> bool {
        let slack = 1.0 + 1e-9;
        self.diagonal_norm <= self.diagonal_bound * slack && self.upper_norm <= self.upper_bound * slack
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BezoutSolution {
    #[serde(skip)]
    pub g: Vec<ScalarField>,
    /// `max |Σ f_j g_j − 1|` over the grid.
    pub residual: f64,
    pub sup_norms: Vec<f64>,
    /// `max_i sup |∂̄_i g_j|` by finite differences, per `j`.
    pub holomorphy_residuals: Vec<f64>,
    pub delta: f64,
    pub gradient_bound: f64,
    pub bound_constant: f64,
    /// `C·N^{4d+2}·‖∇f‖^d/δ^{2d+1}`.
    pub theorem_bound: f64,
    pub c_f: f64,
    pub d_prime_f: f64,
    pub levels: Vec<LevelCheck>,
    /// Relative closedness defect of each `(0,1)` right-hand side solved.
    pub closedness_defects: Vec<f64>,
    pub dbar_certificates: Vec<DbarCertificate>,
    pub partition: PartitionReport,
    pub rho: f64,
    pub nodes: usize,
}

impl BezoutSolution {
    pub fn max_sup_norm(&self) -> f64 {
        self.sup_norms.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_holomorphy_residual(&self) -> f64 {
        self.holomorphy_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `C·N^{4d+2}·‖∇f‖^d/δ^{2d+1}`.
pub fn theorem_bound(constant: f64, n: usize, d: usize, gradient_bound: f64, delta: f64) -> f64 {
    constant * (n as f64).powi(4 * d as i32 + 2) * gradient_bound.powi(d as i32)
        / delta.powi(2 * d as i32 + 1)
}

/// `η = Σ (χ_j/f_j) e_j`.
pub fn eta_form(prob: &CoronaProblem, part: &Partition) -> FormField {
    let n = prob.len();
    let nodes = prob.domain().node_count();
    let mut eta = FormField::zero(n, prob.dim(), 1, 0, nodes);
    for j in 0..n {
        let f = &prob.values()[j];
        let chi = &part.chi[j];
        let c = eta
            .coeff_mut(ExteriorIndex::single(j), ExteriorIndex::EMPTY)
            .expect("degree-one basis element");
        *c = par::map_range(nodes, |k| {
            if chi[k] == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                chi[k] / f[k]
            }
        });
    }
    eta
}

/// `ω ∧ η`: a right inverse of the contraction on contraction-closed forms,
/// since `d_f η = Σχ_j = 1`.
pub fn lift(omega: &FormField, prob: &CoronaProblem, part: &Partition) -> Result<FormField, KoszulError> {
    omega.wedge(&eta_form(prob, part))
}

/// `∂̄η = Σ_{j,i} (∂̄_iχ_j / f_j) e_j ⊗ dz̄_i`, exact from the partition.
pub fn dbar_eta_form(prob: &CoronaProblem, part: &Partition) -> FormField {
    let n = prob.len();
    let d = prob.dim();
    let nodes = prob.domain().node_count();
    let mut out = FormField::zero(n, d, 1, 1, nodes);
    for j in 0..n {
        let f = &prob.values()[j];
        for i in 0..d {
            let dchi = &part.dbar_chi[j][i];
            let c = out
                .coeff_mut(ExteriorIndex::single(j), ExteriorIndex::single(i))
                .expect("basis pair");
            *c = par::map_range(nodes, |k| {
                if dchi[k] == C64::new(0.0, 0.0) {
                    dchi[k]
                } else {
                    dchi[k] / f[k]
                }
            });
        }
    }
    out
}

/// Solve `∂̄β = rhs` coefficient by coefficient in the `e` basis, for `rhs`
/// of bidegree `(0, r)` with `r ∈ {1, 2}`.
fn solve_dbar(
    domain: &Domain,
    rhs: &FormField,
    opts: &BezoutOptions,
    certs: &mut Vec<DbarCertificate>,
    closedness: &mut Vec<f64>,
) -> Result<FormField, KoszulError> {
    let r = rhs.dz_degree();
    let mut out = FormField::zero(rhs.n(), rhs.dim(), rhs.e_degree(), r - 1, rhs.nodes());
    let dz = ExteriorIndex::single;
    let es: Vec<ExteriorIndex> = rhs
        .terms()
        .map(|(e, _, _)| e)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    for e in es {
        let field = |b: ExteriorIndex| {
            ScalarField::new(rhs.coeff(e, b).expect("basis pair").to_vec())
        };
        match (domain, r) {
            (Domain::Disc(g), 1) => {
                let (u, cert) = dbar::solve_disc(g, &field(dz(0)))?;
                *out.coeff_mut(e, ExteriorIndex::EMPTY).expect("basis pair") = u.values;
                certs.push(cert);
            }
            (Domain::Bidisc(g), 1) => {
                let (w1, w2) = (field(dz(0)), field(dz(1)));
                closedness.push(dbar::closedness_defect(g, &w1, &w2));
                let (u, cert) = dbar::solve_01_bidisc(g, &w1, &w2, opts.closedness_tol)?;
                *out.coeff_mut(e, ExteriorIndex::EMPTY).expect("basis pair") = u.values;
                certs.push(cert);
            }
            (Domain::Bidisc(g), 2) => {
                let top = ExteriorIndex::new(&[0, 1]).expect("valid index");
                let ((v1, v2), cert) = dbar::solve_02_bidisc(g, &field(top))?;
                *out.coeff_mut(e, dz(0)).expect("basis pair") = v1.values;
                *out.coeff_mut(e, dz(1)).expect("basis pair") = v2.values;
                certs.push(cert);
            }
            _ => {
                return Err(KoszulError::Unsupported(format!(
                    "no ∂̄ solver for bidegree (0,{r}) in dimension {}",
                    rhs.dim()
                )))
            }
        }
    }
    Ok(out)
}

/// Run the full construction and certify the result.
pub fn bezout_solve(
    prob: &CoronaProblem,
    opts: &BezoutOptions,
) -> Result<BezoutSolution, KoszulError> {
    let n = prob.len();
    let d = prob.dim();
    let domain = prob.domain();
    let nodes = domain.node_count();
    let fv = prob.values();

    let part = partition_of_unity(prob)?;
    let c_f = part.c_f(prob);
    let d_prime = part.d_prime_f(prob);
    let eta = eta_form(prob, &part);
    let deta = dbar_eta_form(prob, &part);

    // Ascending pass: diagonal[k] = ω_{k,k}, upper[k] = ω_{k+1,k}.
    let mut diagonal = vec![FormField::scalar(n, d, vec![C64::new(1.0, 0.0); nodes])];
    let mut upper = Vec::new();
    let mut levels = Vec::new();
    for k in 0..=d {
        if k > 0 {
            let sign = if (k - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let next = diagonal[k - 1].wedge(&deta)?.scale(C64::new(sign, 0.0));
            diagonal.push(next);
        }
        let up = diagonal[k].wedge(&eta)?;
        let contraction_defect = if up.coefficient_count() == 0 {
            diagonal[k].norm()
        } else {
            up.contract(fv)?.distance(&diagonal[k])?
        };
        levels.push(LevelCheck {
            k,
            contraction_defect,
            diagonal_norm: diagonal[k].norm(),
            diagonal_bound: d_prime.powi(k as i32),
            upper_norm: up.norm(),
            upper_bound: c_f * d_prime.powi(k as i32),
        });
        upper.push(up);
    }

    // Descending pass: alpha = α_{k+1,k}, starting from α_{d+1,d} = 0.
    let mut certs = Vec::new();
    let mut closedness = Vec::new();
    let mut alpha = FormField::zero(n, d, d + 1, d, nodes);
    for k in (1..=d).rev() {
        let rhs = upper[k].axpy(-1.0, &alpha)?;
        let beta = if rhs.coefficient_count() == 0 {
            FormField::zero(n, d, k + 1, k - 1, nodes)
        } else {
            solve_dbar(domain, &rhs, opts, &mut certs, &mut closedness)?
        };
        alpha = beta.contract(fv)?;
    }
    let gamma = upper[0].axpy(-1.0, &alpha)?;

    let g: Vec<ScalarField> = (0..n)
        .map(|j| {
            ScalarField::new(
                gamma
                    .coeff(ExteriorIndex::single(j), ExteriorIndex::EMPTY)
                    .expect("degree-one basis element")
                    .to_vec(),
            )
        })
        .collect();
    let residual = par::max_range(nodes, |k| {
        let s: C64 = (0..n).map(|j| fv[j][k] * g[j].values[k]).sum();
        (s - 1.0).norm()
    });
    if let Some(tol) = opts.residual_tol {
        if residual > tol {
            return Err(KoszulError::ResidualAboveTolerance { residual, tol });
        }
    }
    let holomorphy_residuals = g
        .iter()
        .map(|gj| {
            (0..d)
                .map(|i| {
                    let dg = domain.dbar(&gj.values, i);
                    par::max_range(nodes, |k| dg[k].norm())
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(BezoutSolution {
        sup_norms: g.iter().map(ScalarField::sup).collect(),
        g,
        residual,
        holomorphy_residuals,
        delta: prob.delta(),
        gradient_bound: prob.gradient_bound(),
        bound_constant: opts.bound_constant,
        theorem_bound: theorem_bound(
            opts.bound_constant,
            n,
            d,
            prob.gradient_bound(),
            prob.delta(),
        ),
        c_f,
        d_prime_f: d_prime,
        levels,
        closedness_defects: closedness,
        dbar_certificates: certs,
        partition: part.check(prob),
        rho: domain.rho(),
        nodes,
    })
}
