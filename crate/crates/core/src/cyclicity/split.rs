use super::decay::{one_minus, solve_one, CyclicityOptions, DecayRow};
use super::witness::{HarnackGrid, ZeroFreeWitness};
use super::CyclicityError;
use crate::multiseries::{pow_real, sup_norm_grid, PolySeries, TorusGrid};
use crate::spaces::{reduced_weight, Space, SUP_RADIUS};
use crate::weightlab::SplitPlan;
use crate::C64;
use serde::Serialize;

/// `max |coeff(∏_j U^{λ_j²} − U)|` up to degree `cap`.
pub fn split_power_defect(u: &PolySeries, lambdas: &[f64], cap: usize) -> Result<f64, CyclicityError> {
    let mut prod = PolySeries::constant(u.dim(), cap, C64::new(1.0, 0.0))?;
    for l in lambdas {
        prod = prod.mul(&pow_real(u, l * l, cap)?, cap)?;
    }
    Ok(prod.max_coeff_distance(&u.with_max_degree(cap))?)
}

/// Coefficient distance between `1 − ∏ f_jU_j` and
/// `Σ_k (1 − f_kU_k) ∏_{j<k} f_jU_j`, up to degree `cap`.
pub fn telescoping_defect(
    fs: &[PolySeries],
    us: &[PolySeries],
    cap: usize,
) -> Result<f64, CyclicityError> {
    if fs.len() != us.len() || fs.is_empty() {
        return Err(CyclicityError::Config("mismatched factor lists".into()));
    }
    let dim = fs[0].dim();
    let one = PolySeries::constant(dim, cap, C64::new(1.0, 0.0))?;
    let mut prefix = one.clone();
    let mut sum = PolySeries::zero(dim, cap)?;
    for (f, u) in fs.iter().zip(us) {
        let fu = f.mul(u, cap)?;
        sum = sum.add(&one.sub(&fu)?.mul(&prefix, cap)?)?;
        prefix = prefix.mul(&fu, cap)?;
    }
    Ok(one.sub(&prefix)?.max_coeff_distance(&sum)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    pub indices: Vec<usize>,
    pub lambdas: Vec<f64>,
    /// One row per factor, solved with `U^{λ_j²}`.
    pub factors: Vec<DecayRow>,
    /// `‖1 − fU‖_X` with `f = ∏ f_j`.
    pub norm: f64,
    /// `Σ_k C_m‖1 − f_kU_k‖_X ∏_{j<k} sup|f_jU_j|` with grid sups.
    pub telescoping_bound: f64,
    pub telescoping_defect: f64,
    pub power_defect: f64,
    pub series_degree: usize,
    pub cm: f64,
}

fn grid_sup(f: &PolySeries) -> Result<f64, CyclicityError> {
    let deg = f.degree().unwrap_or(0);
    let grid = TorusGrid::new(vec![SUP_RADIUS; f.dim()], (8 * (deg + 1)).max(64))?;
    Ok(sup_norm_grid(f, &[grid])?)
}

/// Splitting scheme: solve with `(z_i^{n_j}, U^{λ_j²})` for every factor of
/// the plan and measure `1 − (∏ f_j)U`.
pub fn approximate_one_split(
    w: &ZeroFreeWitness,
    space: &Space,
    plan: &SplitPlan,
    opts: &CyclicityOptions,
) -> Result<SplitReport, CyclicityError> {
    if plan.n() == 0 {
        return Err(CyclicityError::Config("empty split plan".into()));
    }
    let d = w.dim();
    let u_cap = w.u.max_degree();
    let n_max = plan.indices.iter().copied().max().expect("nonempty plan");
    let cm = match opts.cm {
        Some(c) => c,
        None => space.cm(2 * n_max + opts.resolution.angular_extra)?,
    };
    let reduced = reduced_weight(space, n_max)?;
    let harnack = HarnackGrid::default_for(d);
    let mut us = Vec::with_capacity(plan.n());
    let mut fs = Vec::with_capacity(plan.n());
    let mut rows = Vec::with_capacity(plan.n());
    for (&n, &l) in plan.indices.iter().zip(&plan.lambdas) {
        let uj = pow_real(&w.u, l * l, u_cap)?;
        let wj = ZeroFreeWitness::new(uj.clone(), w.approximate, &harnack)?;
        let (f, row) = solve_one(&wj, space, n, opts, cm, reduced.log(n))?;
        us.push(uj);
        fs.push(f);
        rows.push(row);
    }
    let cap = rows.iter().map(|r| r.series_degree).max().expect("nonempty");
    let mut f = PolySeries::constant(d, cap, C64::new(1.0, 0.0))?;
    for fj in &fs {
        f = f.mul(fj, cap)?;
    }
    let norm = space.norm(&one_minus(&f, &w.u, cap)?)?;
    let mut bound = 0.0;
    let mut prefix_sup = 1.0;
    for (fj, uj) in fs.iter().zip(&us) {
        let ek = space.norm(&one_minus(fj, uj, cap)?)?;
        bound += cm * ek * prefix_sup;
        prefix_sup *= grid_sup(&fj.mul(uj, cap)?)?;
    }
    Ok(SplitReport {
        indices: plan.indices.clone(),
        lambdas: plan.lambdas.clone(),
        factors: rows,
        norm,
        telescoping_bound: bound,
        telescoping_defect: telescoping_defect(&fs, &us, cap)?,
        power_defect: split_power_defect(&w.u, &plan.lambdas, u_cap)?,
        series_degree: cap,
        cm,
    })
}
