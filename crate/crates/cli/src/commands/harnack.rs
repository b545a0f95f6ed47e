use super::{load_function, secs, to_json};
use crate::config::{HarnackVerify, RunConfig};
use crate::report::{num, Outcome, RunReport, Table, Verdict};
use crate::CliError;
use cyclab::cyclicity::{CyclicityError, HarnackGrid, HarnackTable, ZeroFreeWitness};
use serde_json::json;
use std::time::Instant;

fn input_error(e: CyclicityError) -> CliError {
    match e {
        CyclicityError::Series(_) | CyclicityError::Dbar(_) => CliError::internal(e),
        other => CliError::Parse(other.to_string()),
    }
}

pub(super) fn verify(config: &RunConfig, a: &HarnackVerify) -> Result<Outcome, CliError> {
    let t = load_function(&a.u)?;
    let dim = t.dim();
    let default = HarnackGrid::default_for(dim);
    let grid = HarnackGrid::new(
        dim,
        a.rho,
        a.radial.unwrap_or(default.radial),
        a.angular.unwrap_or(default.angular),
    )
    .map_err(input_error)?;
    let mut report = RunReport::new(config);
    let start = Instant::now();
    let w = ZeroFreeWitness::from_test_function(&t, &grid).map_err(input_error)?;
    let table_data = HarnackTable::new(&w, &grid).map_err(input_error)?;
    let ks: Vec<usize> = match (a.k, a.kmax) {
        (Some(k), None) => vec![k],
        (k, Some(kmax)) => {
            let lo = k.unwrap_or(w.min_k());
            if lo > kmax {
                return Err(CliError::Parse(format!("empty range {lo}..={kmax}")));
            }
            (lo..=kmax).collect()
        }
        (None, None) => unreachable!("validated"),
    };
    let mut checks = Vec::with_capacity(ks.len());
    for k in ks {
        checks.push(table_data.check(&w, k).map_err(input_error)?);
    }
    report.timings.insert("verify".into(), secs(start));

    let mut table = Table::new("harnack", &["k", "floor", "grid_min", "holds"]);
    for c in &checks {
        table.push(vec![
            c.k.to_string(),
            num(c.floor),
            num(c.grid_min),
            c.holds.to_string(),
        ]);
    }
    let failing: Vec<usize> = checks.iter().filter(|c| !c.holds).map(|c| c.k).collect();
    report.verdicts.push(Verdict::holds("harnack_floor_every_k", failing.is_empty()));
    report.results = json!({
        "witness": to_json(&w),
        "threshold_4c2": w.threshold(),
        "min_k": w.min_k(),
        "grid": to_json(&grid),
        "nodes": grid.node_count(),
        "failing_k": failing,
        "checks": to_json(&checks),
        "note": "the grid minimum over-estimates the true minimum, so a pass is a necessary condition only",
    });
    Ok(Outcome {
        report,
        tables: vec![table],
    })
}
