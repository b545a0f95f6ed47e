use super::{load_space, secs, to_json};
use crate::config::{RunConfig, WeightCheck, WeightSubseq};
use crate::report::{num, Outcome, RunReport, Table, Verdict};
use crate::CliError;
use cyclab::spaces::{reduced_weight, ReducedWeight, Space};
use cyclab::weightlab::{build_subsequence, diagnose, plan_split, Aggressive, SplitOptions};
use serde_json::json;
use std::time::Instant;

fn reduced(space: &Space, kmax: usize) -> Result<ReducedWeight, CliError> {
    reduced_weight(space, kmax).map_err(|e| CliError::Parse(format!("weight not computable: {e}")))
}

pub(super) fn check(config: &RunConfig, a: &WeightCheck) -> Result<Outcome, CliError> {
    let space = load_space(&a.spec)?;
    let mut report = RunReport::new(config);
    let start = Instant::now();
    let red = reduced(&space, a.kmax)?;
    let diag = diagnose(&red, a.kmax).map_err(CliError::internal)?;
    let sandwich = red.sandwich_violation(&space).map_err(CliError::internal)?;
    report.timings.insert("diagnose".into(), secs(start));

    let mut table = Table::new("reduced_weight", &["k", "log_reduced_weight", "partial_sum"]);
    for k in 1..=a.kmax {
        table.push(vec![
            k.to_string(),
            num(red.log(k)),
            num(diag.partial_sums[k - 1]),
        ]);
    }
    let monotone = diag.partial_sums.windows(2).all(|p| p[1] >= p[0]);
    report.verdicts.push(Verdict::holds("sandwich_bound", sandwich.is_none()));
    report.verdicts.push(Verdict::holds("partial_sums_nondecreasing", monotone));

    let mut diag_json = to_json(&diag);
    diag_json
        .as_object_mut()
        .expect("object")
        .remove("partial_sums");
    let mut results = json!({
        "space": space.to_json(),
        "diagnostics": diag_json,
        "sandwich_violation": sandwich,
        "note": "growth and divergence flags are trends fitted on the table, not proofs",
    });
    if let Space::Weighted { weight, .. } = &space {
        let start = Instant::now();
        let deg = if weight.dim() == 1 { a.kmax.min(512) } else { a.kmax.min(24) };
        let cond = weight.check_conditions(deg).map_err(CliError::internal)?;
        report.timings.insert("conditions".into(), secs(start));
        report.verdicts.push(Verdict::holds("weight_positive", cond.positive));
        report
            .verdicts
            .push(Verdict::holds("declared_flags_hold", cond.declared_flags_hold));
        results["conditions"] = to_json(&cond);
    }
    report.results = results;
    Ok(Outcome {
        report,
        tables: vec![table],
    })
}

pub(super) fn subseq(config: &RunConfig, a: &WeightSubseq) -> Result<Outcome, CliError> {
    let space = load_space(&a.spec)?;
    let mut report = RunReport::new(config);
    let start = Instant::now();
    let red = reduced(&space, a.kmax)?;
    let sub = build_subsequence(&red, a.c0, a.kmax).map_err(CliError::internal)?;
    report.timings.insert("subsequence".into(), secs(start));
    let verified = sub.verify();
    report.verdicts.push(Verdict::holds("subsequence_invariants", verified.is_ok()));

    let mut table = Table::new("subsequence", &["j", "n", "log_reduced_weight", "in_e"]);
    for (j, s) in sub.steps.iter().enumerate() {
        table.push(vec![
            j.to_string(),
            s.n.to_string(),
            num(s.log_weight),
            s.in_e.to_string(),
        ]);
    }
    let mut tables = vec![table];
    let mut results = json!({
        "space": space.to_json(),
        "subsequence": sub,
        "verification": verified.err(),
    });
    if let Some(c) = a.c {
        let opts = SplitOptions {
            c_of_d: a.cd,
            aggressive: a.aggressive.then(|| Aggressive { a: a.a, b: a.b }),
        };
        match plan_split(&red, c, space.dim(), a.j0, &sub, &opts) {
            Ok(plan) => {
                let ok = plan.verify();
                report.verdicts.push(Verdict::holds("split_plan_invariants", ok.is_ok()));
                let mut t = Table::new("split_plan", &["j", "n", "alpha", "lambda"]);
                for (j, ((n, al), l)) in plan
                    .indices
                    .iter()
                    .zip(&plan.alphas)
                    .zip(&plan.lambdas)
                    .enumerate()
                {
                    t.push(vec![(j + 1).to_string(), n.to_string(), num(*al), num(*l)]);
                }
                tables.push(t);
                results["plan"] = to_json(&plan);
            }
            Err(e) => {
                report
                    .verdicts
                    .push(Verdict::holds("split_plan_feasible", false).expectation());
                results["plan_error"] = json!(e.to_string());
                results["advice"] = json!(super::SPLIT_ADVICE);
            }
        }
    }
    report.results = results;
    Ok(Outcome { report, tables })
}
