use super::{load_function, load_space, secs, to_json};
use crate::config::{CyclicityRun, Mode, RunConfig};
use crate::report::{num, Outcome, RunReport, Table, Verdict};
use crate::CliError;
use cyclab::cyclicity::{
    approximate_one, approximate_one_split, CyclicityError, CyclicityOptions, DecayRow,
    HarnackGrid, Resolution, ZeroFreeWitness,
};
use cyclab::koszul::BezoutOptions;
use cyclab::spaces::reduced_weight;
use cyclab::weightlab::{build_subsequence, plan_split, Aggressive, SplitOptions};
use serde_json::json;
use std::time::Instant;

/// Split plans whose largest index exceeds this are reported but not solved.
const MAX_SPLIT_INDEX: usize = 256;

/// Tolerance of the two algebraic identities behind the splitting scheme.
const SPLIT_IDENTITY_TOL: f64 = 1e-9;

fn cyclicity_error(e: CyclicityError) -> CliError {
    match e {
        CyclicityError::Config(_)
        | CyclicityError::NotZeroFree(_)
        | CyclicityError::BelowThreshold { .. } => CliError::Parse(e.to_string()),
        other => CliError::internal(other),
    }
}

fn decay_table(name: &str, rows: &[DecayRow], dim: usize) -> (Table, Table) {
    let mut header = vec![
        "n",
        "norm",
        "exact_norm",
        "proof_chain_bound",
        "theorem_bound",
        "harnack_floor",
        "bezout_residual",
        "holomorphy_residual",
        "radial",
        "angular",
        "series_degree",
        "trivial",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>();
    header.extend((1..=dim + 1).map(|j| format!("g{j}_sup")));
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(name, &refs);
    let mut timings = Table::new(&format!("{name}_timings"), &["n", "runtime_s"]);
    for r in rows {
        let mut row = vec![
            r.n.to_string(),
            num(r.norm),
            r.exact_norm.map(num).unwrap_or_default(),
            num(r.proof_chain_bound),
            num(r.theorem_bound),
            num(r.harnack_floor),
            num(r.bezout_residual),
            num(r.holomorphy_residual),
            r.radial.to_string(),
            r.angular.to_string(),
            r.series_degree.to_string(),
            r.trivial.to_string(),
        ];
        row.extend(r.g_sup_norms.iter().map(|g| num(*g)));
        table.push(row);
        timings.push(vec![r.n.to_string(), format!("{:.3}", r.runtime_s)]);
    }
    (table, timings)
}

pub(super) fn run(config: &RunConfig, a: &CyclicityRun) -> Result<Outcome, CliError> {
    let t = load_function(&a.u)?;
    let space = load_space(&a.space)?;
    let dim = t.dim();
    if space.dim() != dim {
        return Err(CliError::Parse(format!(
            "U has dimension {dim} but the space {}",
            space.dim()
        )));
    }
    let mut report = RunReport::new(config);
    let start = Instant::now();
    let w = ZeroFreeWitness::from_test_function(&t, &HarnackGrid::default_for(dim))
        .map_err(cyclicity_error)?;
    let opts = CyclicityOptions {
        resolution: Resolution {
            rho: a.rho,
            radial_min: a.radial_min,
            radial_per_n: a.radial_per_n,
            angular_extra: a.angular_extra,
            ..Resolution::default()
        },
        bezout: BezoutOptions {
            bound_constant: a.cd_omega,
            ..BezoutOptions::default()
        },
        c_of_d: a.cd,
        cm: a.cm,
    };
    report.timings.insert("witness".into(), secs(start));
    let mut results = json!({
        "space": space.to_json(),
        "witness": to_json(&w),
        "options": to_json(&opts),
    });
    let mut tables = Vec::new();
    let start = Instant::now();
    match a.mode {
        Mode::Direct => {
            let mut ns = a.nlist.clone();
            ns.sort_unstable();
            ns.dedup();
            let dr = approximate_one(&w, &space, &ns, &opts).map_err(cyclicity_error)?;
            let (table, timings) = decay_table("decay", &dr.rows, dim);
            tables.push(table);
            tables.push(timings);
            report.verdicts.push(
                Verdict::holds("norm_within_theorem_bound", dr.within_theorem_bound).configured(),
            );
            report.verdicts.push(
                Verdict::holds("norm_strictly_decreasing", dr.strictly_decreasing).expectation(),
            );
            report
                .verdicts
                .push(Verdict::at_most("ratio_last_first", dr.ratio_last_first, 0.5).expectation());
            let mut v = to_json(&dr);
            v.as_object_mut().expect("object").remove("rows");
            results["decay"] = v;
        }
        Mode::Split => {
            let reduced = reduced_weight(&space, a.kmax)
                .map_err(|e| CliError::Parse(format!("weight not computable: {e}")))?;
            let sub = build_subsequence(&reduced, a.c0, a.kmax).map_err(CliError::internal)?;
            let split_opts = SplitOptions {
                c_of_d: a.cd,
                aggressive: a.aggressive.then(|| Aggressive { a: a.a, b: a.b }),
            };
            match plan_split(&reduced, w.c, dim, None, &sub, &split_opts) {
                Err(e) => {
                    report
                        .verdicts
                        .push(Verdict::holds("split_plan_feasible", false).expectation());
                    results["plan_error"] = json!(e.to_string());
                    results["advice"] = json!(super::SPLIT_ADVICE);
                }
                Ok(plan) => {
                    let largest = plan.indices.iter().copied().max().unwrap_or(0);
                    results["plan"] = to_json(&plan);
                    if largest > MAX_SPLIT_INDEX {
                        report.verdicts.push(
                            Verdict::at_most(
                                "split_plan_tractable",
                                largest as f64,
                                MAX_SPLIT_INDEX as f64,
                            )
                            .expectation(),
                        );
                    } else {
                        let sr = approximate_one_split(&w, &space, &plan, &opts)
                            .map_err(cyclicity_error)?;
                        let (table, timings) = decay_table("split_factors", &sr.factors, dim);
                        tables.push(table);
                        tables.push(timings);
                        report.verdicts.push(Verdict::at_most(
                            "power_split_identity",
                            sr.power_defect,
                            SPLIT_IDENTITY_TOL,
                        ));
                        report.verdicts.push(Verdict::at_most(
                            "telescoping_identity",
                            sr.telescoping_defect,
                            SPLIT_IDENTITY_TOL,
                        ));
                        report.verdicts.push(
                            Verdict::at_most("norm_within_telescoping_bound", sr.norm, sr.telescoping_bound)
                                .expectation(),
                        );
                        let mut v = to_json(&sr);
                        v.as_object_mut().expect("object").remove("factors");
                        results["split"] = v;
                    }
                }
            }
        }
    }
    report.timings.insert("run".into(), secs(start));
    report.results = results;
    Ok(Outcome { report, tables })
}
