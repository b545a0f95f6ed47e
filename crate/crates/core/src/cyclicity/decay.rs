use super::witness::{harnack_floor, ZeroFreeWitness};
use super::CyclicityError;
use crate::dbar::{BidiscGrid, DiscGrid, Grid};
use crate::koszul::{bezout_solve, BezoutOptions, CoronaProblem, Domain};
use crate::multiseries::{pow_real, MultiIndex, PolySeries};
use crate::spaces::{reduced_weight, Space};
use crate::C64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Solver grid as a function of `n`: `max(radial_min, radial_per_n·n)` rings
/// and the least even angle count `≥ max(angular_min, 2n + angular_extra)`
/// on the disc of radius `rho` (on each axis when `d = 2`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub rho: f64,
    pub radial_min: usize,
    pub radial_per_n: usize,
    pub angular_min: usize,
    pub angular_extra: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            rho: 0.95,
            radial_min: 2000,
            radial_per_n: 500,
            angular_min: 64,
            angular_extra: 32,
        }
    }
}

impl Resolution {
    pub fn disc(&self, n: usize) -> Result<DiscGrid, CyclicityError> {
        let radial = self.radial_min.max(self.radial_per_n * n);
        let mut angular = self.angular_min.max(2 * n + self.angular_extra);
        angular += angular % 2;
        Ok(DiscGrid::new(self.rho, radial, angular)?)
    }

    pub fn domain(&self, dim: usize, n: usize) -> Result<Domain, CyclicityError> {
        let disc = self.disc(n)?;
        match dim {
            1 => Ok(Domain::Disc(disc)),
            2 => Ok(Domain::Bidisc(BidiscGrid::square(disc))),
            _ => Err(CyclicityError::Config(format!("dimension {dim}"))),
        }
    }
}

/// Corona data `(z_1^n, …, z_d^n, U)` on `domain` with `δ` set to the
/// Harnack floor, which must not exceed the grid minimum of `Σ|f_j|`.
pub fn corona_data(
    w: &ZeroFreeWitness,
    n: usize,
    domain: Domain,
) -> Result<CoronaProblem, CyclicityError> {
    let floor = harnack_floor(w, n)?;
    let d = w.dim();
    let mut data: Vec<PolySeries> = (0..d)
        .map(|j| PolySeries::monomial(MultiIndex::axis(d, j, n), C64::new(1.0, 0.0)))
        .collect();
    data.push(w.u.clone());
    let prob = CoronaProblem::new(data, domain).map_err(|source| CyclicityError::Bezout { n, source })?;
    prob.with_delta(floor)
        .map_err(|e| CyclicityError::HarnackViolation {
            n,
            message: e.to_string(),
        })
}

fn ring_modes(values: &[C64], len: usize) -> Vec<C64> {
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    buf.iter().map(|c| c * scale).collect()
}

/// Taylor coefficients of a sampled holomorphic function, read from the
/// discrete Fourier modes on the outermost ring (torus when `d = 2`), up to
/// total degree `max_degree` and below the Nyquist mode.
pub fn extract_series(
    domain: &Domain,
    values: &[C64],
    max_degree: usize,
) -> Result<PolySeries, CyclicityError> {
    match domain {
        Domain::Disc(g) => {
            let (nr, m) = (g.n_r(), g.n_theta());
            let r = g.radius(nr - 1);
            let modes = ring_modes(&values[(nr - 1) * m..nr * m], m);
            let top = max_degree.min(m / 2 - 1);
            Ok(PolySeries::univariate(
                (0..=top).map(|k| modes[k] / r.powi(k as i32)).collect(),
            )
            .with_max_degree(top))
        }
        Domain::Bidisc(g) => {
            let (a, b) = (g.axis(0), g.axis(1));
            let (m1, m2) = (a.n_theta(), b.n_theta());
            let nb = b.node_count();
            let ring1 = (a.n_r() - 1) * m1;
            let ring2 = (b.n_r() - 1) * m2;
            // rows: q1, columns: q2
            let mut rows: Vec<Vec<C64>> = (0..m1)
                .map(|q1| {
                    let base = (ring1 + q1) * nb + ring2;
                    ring_modes(&values[base..base + m2], m2)
                })
                .collect();
            for k2 in 0..m2 {
                let col: Vec<C64> = rows.iter().map(|r| r[k2]).collect();
                for (q1, v) in ring_modes(&col, m1).into_iter().enumerate() {
                    rows[q1][k2] = v;
                }
            }
            let (r1, r2) = (a.radius(a.n_r() - 1), b.radius(b.n_r() - 1));
            let top = max_degree.min(m1 / 2 - 1).min(m2 / 2 - 1);
            let mut out = PolySeries::zero(2, top)?;
            for k1 in 0..=top {
                for k2 in 0..=top - k1 {
                    let c = rows[k1][k2] / (r1.powi(k1 as i32) * r2.powi(k2 as i32));
                    out.set_coeff(&MultiIndex::two(k1, k2), c)?;
                }
            }
            Ok(out)
        }
    }
}

/// `1 − fU` up to total degree `cap`.
pub(crate) fn one_minus(f: &PolySeries, u: &PolySeries, cap: usize) -> Result<PolySeries, CyclicityError> {
    let fu = f.mul(u, cap)?;
    let one = PolySeries::constant(u.dim(), cap, C64::new(1.0, 0.0))?;
    Ok(one.sub(&fu)?)
}

/// `‖U·Σ_{k≥n} b_k z^k‖_X` with `1/U = Σ b_k z^k`, the remainder left by the
/// exact disc solution `f = Σ_{k<n} b_k z^k`; computed up to degree `cap`
/// without cancellation. One variable only.
pub fn exact_remainder_norm(
    u: &PolySeries,
    n: usize,
    space: &Space,
    cap: usize,
) -> Result<f64, CyclicityError> {
    if u.dim() != 1 {
        return Err(CyclicityError::Config(
            "the exact remainder is available in one variable only".into(),
        ));
    }
    let inv = pow_real(u, -1.0, cap)?;
    let tail = PolySeries::univariate(
        (0..=cap)
            .map(|k| {
                if k < n {
                    C64::new(0.0, 0.0)
                } else {
                    inv.coeff(&MultiIndex::one(k))
                }
            })
            .collect(),
    );
    Ok(space.norm(&u.mul(&tail, cap)?)?)
}

/// `C_m·C(d)·n^{d+1}·e^{2c(2d+1)√n}/ω̃(n)`, evaluated in the log domain.
pub fn decay_bound(cm: f64, c_of_d: f64, d: usize, c: f64, n: usize, log_reduced: f64) -> f64 {
    let nf = n as f64;
    (cm.ln() + c_of_d.ln() + (d + 1) as f64 * nf.ln() + 2.0 * c * (2 * d + 1) as f64 * nf.sqrt()
        - log_reduced)
        .exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    /// Measured `‖1 − f_nU‖_X`.
    pub norm: f64,
    /// Remainder of the exact one-variable solution, when available.
    pub exact_norm: Option<f64>,
    /// `Σ_j C_m‖z_j^n‖·sup|g_j|` with grid sups.
    pub proof_chain_bound: f64,
    pub theorem_bound: f64,
    pub g_sup_norms: Vec<f64>,
    pub harnack_floor: f64,
    pub bezout_residual: f64,
    pub holomorphy_residual: f64,
    pub radial: usize,
    pub angular: usize,
    pub series_degree: usize,
    /// `U` is a unimodular constant and `f = 1/U` was taken directly.
    pub trivial: bool,
    pub runtime_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub strictly_decreasing: bool,
    pub exact_strictly_decreasing: Option<bool>,
    pub ratio_last_first: f64,
    pub within_theorem_bound: bool,
    pub cm: f64,
    pub c_of_d: f64,
}

impl DecayReport {
    pub(crate) fn from_rows(rows: Vec<DecayRow>, cm: f64, c_of_d: f64) -> Self {
        let dec = |v: &[f64]| v.windows(2).all(|p| p[1] < p[0]);
        let norms: Vec<f64> = rows.iter().map(|r| r.norm).collect();
        let exact: Option<Vec<f64>> = rows.iter().map(|r| r.exact_norm).collect();
        let ratio = match (norms.first(), norms.last()) {
            (Some(&a), Some(&b)) if a > 0.0 => b / a,
            _ => 0.0,
        };
        DecayReport {
            strictly_decreasing: dec(&norms),
            exact_strictly_decreasing: exact.as_deref().map(dec),
            ratio_last_first: ratio,
            within_theorem_bound: rows.iter().all(|r| r.norm <= r.theorem_bound),
            rows,
            cm,
            c_of_d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicityOptions {
    pub resolution: Resolution,
    pub bezout: BezoutOptions,
    /// `C(d)` in the decay bound.
    pub c_of_d: f64,
    /// Override of the space's `C_m`.
    pub cm: Option<f64>,
}

impl Default for CyclicityOptions {
    fn default() -> Self {
        CyclicityOptions {
            resolution: Resolution::default(),
            bezout: BezoutOptions::default(),
            c_of_d: 10.0,
            cm: None,
        }
    }
}

/// Solve `g_{d+1}U + Σ g_j z_j^n = 1` and return `(f = g_{d+1}, row)`.
pub(crate) fn solve_one(
    w: &ZeroFreeWitness,
    space: &Space,
    n: usize,
    opts: &CyclicityOptions,
    cm: f64,
    log_reduced: f64,
) -> Result<(PolySeries, DecayRow), CyclicityError> {
    let start = Instant::now();
    let d = w.dim();
    let domain = opts.resolution.domain(d, n)?;
    let disc = opts.resolution.disc(n)?;
    let (radial, angular) = (disc.n_r(), disc.n_theta());
    let cap = angular / 2 - 1;
    let theorem_bound = decay_bound(cm, opts.c_of_d, d, w.c, n, log_reduced);
    let floor = harnack_floor(w, n)?;
    if w.c == 0.0 {
        // sup|U| ≤ 1 with |U(0)| = 1 forces U to be a unimodular constant.
        let inv = w.u.constant_term().inv();
        let f = PolySeries::constant(d, cap, inv)?;
        let norm = space.norm(&one_minus(&f, &w.u, cap)?)?;
        let row = DecayRow {
            n,
            norm,
            exact_norm: (d == 1).then_some(0.0),
            proof_chain_bound: 0.0,
            theorem_bound,
            g_sup_norms: vec![0.0; d].into_iter().chain([inv.norm()]).collect(),
            harnack_floor: floor,
            bezout_residual: 0.0,
            holomorphy_residual: 0.0,
            radial,
            angular,
            series_degree: cap,
            trivial: true,
            runtime_s: start.elapsed().as_secs_f64(),
        };
        return Ok((f, row));
    }
    let prob = corona_data(w, n, domain)?;
    let sol = bezout_solve(&prob, &opts.bezout).map_err(|source| CyclicityError::Bezout { n, source })?;
    let f = extract_series(prob.domain(), &sol.g[d].values, cap)?;
    let norm = space.norm(&one_minus(&f, &w.u, cap)?)?;
    let exact_norm = if d == 1 {
        Some(exact_remainder_norm(&w.u, n, space, cap)?)
    } else {
        None
    };
    let mut proof_chain_bound = 0.0;
    for j in 0..d {
        let lm = space.log_monomial_norm(&MultiIndex::axis(d, j, n))?;
        proof_chain_bound += cm * lm.exp() * sol.sup_norms[j];
    }
    let row = DecayRow {
        n,
        norm,
        exact_norm,
        proof_chain_bound,
        theorem_bound,
        g_sup_norms: sol.sup_norms.clone(),
        harnack_floor: floor,
        bezout_residual: sol.residual,
        holomorphy_residual: sol.max_holomorphy_residual(),
        radial,
        angular,
        series_degree: cap,
        trivial: false,
        runtime_s: start.elapsed().as_secs_f64(),
    };
    Ok((f, row))
}

/// Decay of `‖1 − f_nU‖_X` over an increasing list of `n`.
pub fn approximate_one(
    w: &ZeroFreeWitness,
    space: &Space,
    n_list: &[usize],
    opts: &CyclicityOptions,
) -> Result<DecayReport, CyclicityError> {
    if n_list.is_empty() || n_list.windows(2).any(|p| p[1] <= p[0]) {
        return Err(CyclicityError::Config(format!(
            "n list {n_list:?} must be nonempty and strictly increasing"
        )));
    }
    if space.dim() != w.dim() {
        return Err(CyclicityError::Config("space and U differ in dimension".into()));
    }
    let n_max = *n_list.last().expect("nonempty");
    let cm = match opts.cm {
        Some(c) => c,
        None => space.cm(2 * n_max + opts.resolution.angular_extra)?,
    };
    let reduced = reduced_weight(space, n_max)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let (_, row) = solve_one(w, space, n, opts, cm, reduced.log(n))?;
        rows.push(row);
    }
    Ok(DecayReport::from_rows(rows, cm, opts.c_of_d))
}
