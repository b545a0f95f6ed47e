//! Invariant suite over the shipped fixtures and seeded random data.
//!
//! Every check is deterministic for a given seed; `selftest.csv` holds the
//! measured values only, so two runs with the same seed give identical bytes.

use crate::config::RunConfig;
use crate::fixtures::fixture;
use crate::report::{num, Outcome, RunReport, Table, Verdict};
use crate::CliError;
use cyclab::cyclicity::{
    split_power_defect, telescoping_defect, HarnackGrid, HarnackTable, TestFunction,
    ZeroFreeWitness,
};
use cyclab::dbar::{cauchy_transform, DiscGrid, Grid, ScalarField};
use cyclab::koszul::{
    bezout_solve, lift, partition_of_unity, BezoutOptions, CoronaProblem, Domain, ExteriorIndex,
    FormField,
};
use cyclab::multiseries::{default_nodes, torus_mean, MultiIndex, PolySeries, TorusGrid};
use cyclab::spaces::{
    bergman_norm, check_compnorm, check_shift_bound, moment_weight, reduced_weight, xnorm,
    ReducedWeight, Space, Weight,
};
use cyclab::weightlab::{build_subsequence, plan_split, Aggressive, SplitOptions};
use cyclab::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::time::Instant;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Check {
            name,
            value,
            tolerance,
        }
    }

    /// A count of failures that must be zero.
    fn count(name: &'static str, failures: usize) -> Self {
        Check::new(name, failures as f64, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

type Res<T> = Result<T, CliError>;

fn err(e: impl std::fmt::Display) -> CliError {
    CliError::internal(e)
}

fn space(name: &str) -> Res<Space> {
    Space::from_json(fixture(name)).map_err(err)
}

fn test_function(name: &str) -> Res<TestFunction> {
    TestFunction::from_json(fixture(name)).map_err(err)
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random polynomial with every coefficient up to `degree` filled.
pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> PolySeries {
    let mut f = PolySeries::zero(dim, degree).expect("valid dimension");
    let indices: Vec<MultiIndex> = f.iter().map(|(i, _)| i).collect();
    for i in indices {
        f.set_coeff(&i, random_c64(rng)).expect("index in range");
    }
    f
}

fn parseval(rng: &mut ChaCha8Rng) -> Res<Check> {
    let mut worst = 0.0f64;
    for t in 0..100 {
        let dim = 1 + t % 2;
        let deg = rng.gen_range(0..=8);
        let r = rng.gen_range(0.3..0.95);
        let f = random_poly(rng, dim, deg);
        let grid = TorusGrid::new(vec![r; dim], default_nodes(deg)).map_err(err)?;
        let mean = torus_mean(&f, &grid, 2.0).map_err(err)?;
        let exact: f64 = f
            .iter()
            .map(|(i, c)| c.norm_sqr() * r.powi(2 * i.order() as i32))
            .sum();
        worst = worst.max((mean - exact).abs() / exact);
    }
    Ok(Check::new("parseval", worst, 1e-10))
}

fn moment_consistency(rng: &mut ChaCha8Rng) -> Res<Check> {
    let Space::Bergman { measure, .. } = space("space_bergman.json")? else {
        return Err(err("space_bergman.json is not a Bergman space"));
    };
    let mut worst = 0.0f64;
    for p in [2.0, 3.0, 4.0] {
        let w = moment_weight(&measure, p).map_err(err)?;
        for k in 0..=24 {
            let f = PolySeries::monomial(MultiIndex::one(k), C64::new(1.0, 0.0));
            let a = bergman_norm(&f, &measure, p, None).map_err(err)?;
            let b = xnorm(&f, &w, p).map_err(err)?;
            worst = worst.max((a - b).abs() / b);
        }
    }
    let w = moment_weight(&measure, 2.0).map_err(err)?;
    for _ in 0..20 {
        let deg = rng.gen_range(0..=12);
        let f = random_poly(rng, 1, deg);
        let a = bergman_norm(&f, &measure, 2.0, None).map_err(err)?;
        let b = xnorm(&f, &w, 2.0).map_err(err)?;
        worst = worst.max((a - b).abs() / b);
    }
    Ok(Check::new("moment_bergman_consistency", worst, 1e-9))
}

fn sandwich() -> Res<Check> {
    let mut failures = 0;
    for name in ["w_exp06.json", "w_table.json", "space_bergman.json", "w_sqrt_2d.json"] {
        let s = space(name)?;
        let red = reduced_weight(&s, 64).map_err(err)?;
        failures += red.sandwich_violation(&s).map_err(err)?.is_some() as usize;
    }
    Ok(Check::count("reduced_weight_sandwich", failures))
}

fn norm_inequalities(rng: &mut ChaCha8Rng) -> Res<Vec<Check>> {
    let weights: Vec<Weight> = ["w_exp06.json", "w_sqrt_2d.json"]
        .into_iter()
        .map(|n| space(n)?.weight().map_err(err))
        .collect::<Res<_>>()?;
    let (mut comp, mut shift) = (0, 0);
    for t in 0..100 {
        let w = &weights[t % 2];
        let dim = w.dim();
        let deg = rng.gen_range(0..=6);
        let f = random_poly(rng, dim, deg);
        let j = MultiIndex::new(&(0..dim).map(|_| rng.gen_range(0..=4)).collect::<Vec<_>>())
            .map_err(err)?;
        for p in [2.0, 3.0, 4.0] {
            comp += !check_compnorm(&f, w, p).map_err(err)?.holds as usize;
            shift += !check_shift_bound(&f, &j, w, p).map_err(err)?.holds as usize;
        }
    }
    Ok(vec![
        Check::count("composition_norm_bound", comp),
        Check::count("shift_bound", shift),
    ])
}

fn random_form(
    rng: &mut ChaCha8Rng,
    n: usize,
    dim: usize,
    k: usize,
    r: usize,
    nodes: usize,
) -> FormField {
    let mut f = FormField::zero(n, dim, k, r, nodes);
    let keys: Vec<(ExteriorIndex, ExteriorIndex)> = f.terms().map(|(e, d, _)| (e, d)).collect();
    for (e, d) in keys {
        for v in f.coeff_mut(e, d).expect("basis pair") {
            *v = random_c64(rng);
        }
    }
    f
}

/// Corona data on a small grid: powers of the coordinates and an exponential.
pub fn small_problem(dim: usize, n: usize) -> Res<CoronaProblem> {
    let one = C64::new(1.0, 0.0);
    let mut data = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let mut idx = vec![0; dim];
        idx[j % dim] = 1 + j / dim;
        data.push(PolySeries::monomial(MultiIndex::new(&idx).map_err(err)?, one));
    }
    let linear = vec![1.0 / dim as f64; dim];
    let (u, _) = TestFunction::exp_affine(linear, 1.0).series().map_err(err)?;
    data.push(u);
    let disc = DiscGrid::new(0.9, 8, 8).map_err(err)?;
    let domain = match dim {
        1 => Domain::Disc(disc),
        _ => Domain::Bidisc(cyclab::dbar::BidiscGrid::square(disc)),
    };
    CoronaProblem::new(data, domain).map_err(err)
}

fn exterior(rng: &mut ChaCha8Rng) -> Res<Vec<Check>> {
    let shapes = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4)];
    let mut problems = Vec::new();
    for &(dim, n) in &shapes {
        let prob = small_problem(dim, n)?;
        let part = partition_of_unity(&prob).map_err(err)?;
        problems.push((prob, part));
    }
    let (mut square, mut swap, mut lifted) = (0.0f64, 0.0f64, 0.0f64);
    for t in 0..200 {
        let (prob, part) = &problems[t % problems.len()];
        let (n, dim, nodes) = (prob.len(), prob.dim(), prob.domain().node_count());
        let f = prob.values();
        let k = rng.gen_range(0..=n);
        let r = rng.gen_range(0..=dim);
        let a = random_form(rng, n, dim, k, r, nodes);
        let scale = a.norm().max(1.0);
        let dd = a.contract(f).map_err(err)?.contract(f).map_err(err)?;
        square = square.max(dd.norm() / scale);

        let k2 = rng.gen_range(0..=n - k);
        let r2 = rng.gen_range(0..=dim - r);
        let b = random_form(rng, n, dim, k2, r2, nodes);
        let sign = if (k * k2 + r * r2) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = a.wedge(&b).map_err(err)?;
        let ba = b.wedge(&a).map_err(err)?.scale(C64::new(sign, 0.0));
        swap = swap.max(ab.distance(&ba).map_err(err)? / scale / b.norm().max(1.0));

        if k < n {
            // a closed form d_f(β) with β of degree k + 1
            let beta = random_form(rng, n, dim, k + 1, r, nodes);
            let closed = beta.contract(f).map_err(err)?;
            let back = lift(&closed, prob, part).map_err(err)?.contract(f).map_err(err)?;
            let denom = closed.norm().max(f64::MIN_POSITIVE);
            lifted = lifted.max(back.distance(&closed).map_err(err)? / denom);
        }
    }
    Ok(vec![
        Check::new("contraction_squares_to_zero", square, 1e-12),
        Check::new("wedge_graded_antisymmetry", swap, 1e-12),
        Check::new("contraction_inverts_lift", lifted, 1e-10),
    ])
}

/// Naive greedy scan used as the oracle for the subsequence builder.
pub fn brute_force_subsequence(w: &ReducedWeight, c0: f64, k_max: usize) -> Vec<usize> {
    let mut seq = vec![1];
    let mut last = 1;
    loop {
        let next = (last + 1..=k_max)
            .find(|&n| w.log(n) >= c0 * (n as f64).ln() && w.log(n) >= 2.0 * w.log(last));
        match next {
            Some(n) => {
                seq.push(n);
                last = n;
            }
            None => return seq,
        }
    }
}

fn subsequences() -> Res<Check> {
    let k_max = 10_000;
    let table = reduced_weight(&space("w_table.json")?, 256).map_err(err)?;
    let cases = [
        (ReducedWeight::from_log_fn(1, k_max, |k| (k as f64).sqrt()).map_err(err)?, k_max),
        (ReducedWeight::from_log_fn(1, k_max, |k| (k as f64).powf(0.6)).map_err(err)?, k_max),
        (table, 256),
    ];
    let mut mismatches = 0;
    for (w, k) in &cases {
        let built = build_subsequence(w, 1.0, *k).map_err(err)?;
        mismatches += (built.sequence() != brute_force_subsequence(w, 1.0, *k)) as usize;
        mismatches += built.verify().is_err() as usize;
    }
    let quad = build_subsequence(&cases[0].0, 1.0, k_max).map_err(err)?.sequence();
    mismatches += quad.iter().enumerate().any(|(j, &n)| n != 4usize.pow(j as u32)) as usize;
    Ok(Check::count("subsequence_matches_brute_force", mismatches))
}

fn harnack() -> Res<Check> {
    let mut failures = 0;
    for name in ["u_exp.json", "u_exp2.json", "u_exp_2d.json"] {
        let t = test_function(name)?;
        let grid = HarnackGrid::default_for(t.dim());
        let w = ZeroFreeWitness::from_test_function(&t, &grid).map_err(err)?;
        let table = HarnackTable::new(&w, &grid).map_err(err)?;
        for k in w.min_k()..=64 {
            failures += !table.check(&w, k).map_err(err)?.holds as usize;
        }
    }
    Ok(Check::count("harnack_floor", failures))
}

fn split_identities(rng: &mut ChaCha8Rng) -> Res<Vec<Check>> {
    let s = space("w_exp06.json")?;
    let red = reduced_weight(&s, 10_000).map_err(err)?;
    let sub = build_subsequence(&red, 1.0, 10_000).map_err(err)?;
    let opts = SplitOptions {
        c_of_d: 10.0,
        aggressive: Some(Aggressive {
            a: Some(0.2),
            b: None,
        }),
    };
    let (u, _) = test_function("u_exp.json")?.series().map_err(err)?;
    let plan = plan_split(&red, 1.0, 1, None, &sub, &opts).map_err(err)?;
    let power = split_power_defect(&u, &plan.lambdas, u.max_degree()).map_err(err)?;
    let cap = 24;
    let fs: Vec<PolySeries> = (0..plan.n()).map(|_| random_poly(rng, 1, cap)).collect();
    let us: Vec<PolySeries> = plan
        .lambdas
        .iter()
        .map(|l| cyclab::multiseries::pow_real(&u, l * l, cap))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let tele = telescoping_defect(&fs, &us, cap).map_err(err)?;
    Ok(vec![
        Check::new("power_split_identity", power, 1e-9),
        Check::new("telescoping_identity", tele, 1e-9),
    ])
}

fn dbar(rng: &mut ChaCha8Rng) -> Res<Vec<Check>> {
    let grid = DiscGrid::new(0.95, 32, 32).map_err(err)?;
    let one = ScalarField::from_fn(&grid, |_| C64::new(1.0, 0.0));
    let u = cauchy_transform(&grid, &one).map_err(err)?;
    let oracle = (0..grid.node_count())
        .filter(|&k| grid.point(k)[0].norm() <= 0.9)
        .map(|k| (u.values[k] - grid.point(k)[0].conj()).norm())
        .fold(0.0, f64::max);
    let a = ScalarField::new((0..grid.node_count()).map(|_| random_c64(rng)).collect());
    let b = ScalarField::new((0..grid.node_count()).map(|_| random_c64(rng)).collect());
    let (alpha, beta) = (random_c64(rng), random_c64(rng));
    let combined = cauchy_transform(&grid, &a.scale(alpha).axpy(beta, &b)).map_err(err)?;
    let ta = cauchy_transform(&grid, &a).map_err(err)?;
    let tb = cauchy_transform(&grid, &b).map_err(err)?;
    let linear = combined.max_distance(&ta.scale(alpha).axpy(beta, &tb));
    Ok(vec![
        Check::new("cauchy_transform_of_one", oracle, 1e-3),
        Check::new("cauchy_transform_linearity", linear, 1e-10),
    ])
}

fn corona() -> Res<Vec<Check>> {
    let one = C64::new(1.0, 0.0);
    let (u, _) = test_function("u_exp.json")?.series().map_err(err)?;
    let data = vec![PolySeries::monomial(MultiIndex::one(8), one), u];
    let domain = Domain::Disc(DiscGrid::new(0.95, 1000, 64).map_err(err)?);
    let prob = CoronaProblem::new(data, domain).map_err(err)?;
    let sol = bezout_solve(&prob, &BezoutOptions::default()).map_err(err)?;
    Ok(vec![
        Check::new("bezout_residual", sol.residual, 1e-10),
        Check::count("partition_invariants", !sol.partition.holds() as usize),
    ])
}

/// Run every check with the given seed.
pub fn checks(seed: u64) -> Res<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        parseval(&mut rng)?,
        moment_consistency(&mut rng)?,
        sandwich()?,
    ];
    out.extend(norm_inequalities(&mut rng)?);
    out.extend(exterior(&mut rng)?);
    out.push(subsequences()?);
    out.push(harnack()?);
    out.extend(split_identities(&mut rng)?);
    out.extend(dbar(&mut rng)?);
    out.extend(corona()?);
    Ok(out)
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut report = RunReport::new(config);
    let start = Instant::now();
    let checks = checks(config.seed)?;
    report
        .timings
        .insert("selftest".into(), start.elapsed().as_secs_f64());
    let mut table = Table::new("selftest", &["check", "value", "tolerance", "passed"]);
    for c in &checks {
        table.push(vec![
            c.name.into(),
            num(c.value),
            num(c.tolerance),
            c.passed().to_string(),
        ]);
        report
            .verdicts
            .push(Verdict::at_most(c.name, c.value, c.tolerance));
    }
    report.results = json!({
        "seed": config.seed,
        "checks": checks.len(),
        "failed": checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        report,
        tables: vec![table],
    })
}
