use super::{secs, to_json};
use crate::config::{CoronaSolve, RunConfig};
use crate::report::{num, Outcome, RunReport, Table, Verdict};
use crate::{read_text, CliError};
use cyclab::cyclicity::TestFunction;
use cyclab::dbar::{BidiscGrid, DiscGrid, Grid};
use cyclab::koszul::{bezout_solve, BezoutOptions, CoronaProblem, Domain, KoszulError};
use cyclab::par;
use cyclab::C64;
use serde::Deserialize;
use serde_json::json;
use std::path::Path;
use std::time::Instant;

/// One entry of the problem file: inline, or a path relative to it.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    File { file: String },
    Inline(TestFunction),
}

#[derive(Deserialize)]
struct ProblemFile {
    functions: Vec<Entry>,
}

fn load_problem(path: &Path) -> Result<Vec<TestFunction>, CliError> {
    let text = read_text(path)?;
    let file: ProblemFile = serde_json::from_str(&text).map_err(|e| CliError::json(path, &e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    file.functions
        .into_iter()
        .map(|e| match e {
            Entry::Inline(t) => Ok(t),
            Entry::File { file } => super::load_function(&base.join(file)),
        })
        .collect()
}

fn koszul_error(e: KoszulError) -> CliError {
    match e {
        KoszulError::Unsupported(_)
        | KoszulError::NotNormalized { .. }
        | KoszulError::CoverFailure(_) => CliError::Parse(e.to_string()),
        other => CliError::internal(other),
    }
}

pub(super) fn solve(config: &RunConfig, a: &CoronaSolve) -> Result<Outcome, CliError> {
    let functions = load_problem(&a.problem)?;
    let dim = functions.first().map(TestFunction::dim).unwrap_or(1);
    if !(1..=2).contains(&dim) || functions.iter().any(|t| t.dim() != dim) {
        return Err(CliError::Parse(format!(
            "{}: functions must share dimension 1 or 2",
            a.problem.display()
        )));
    }
    let (rings, angles) = match dim {
        1 => (a.resolution.unwrap_or(6000), a.angles.unwrap_or(64)),
        _ => (a.resolution.unwrap_or(24), a.angles.unwrap_or(32)),
    };
    let disc = DiscGrid::new(a.rho, rings, angles + angles % 2)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let domain = match dim {
        1 => Domain::Disc(disc),
        _ => Domain::Bidisc(BidiscGrid::square(disc)),
    };

    let mut report = RunReport::new(config);
    let start = Instant::now();
    let mut data = Vec::with_capacity(functions.len());
    let mut approximate = false;
    for t in &functions {
        let (f, approx) = t.series().map_err(|e| CliError::Parse(e.to_string()))?;
        approximate |= approx;
        data.push(f);
    }
    let prob = CoronaProblem::new(data, domain).map_err(koszul_error)?;
    report.timings.insert("setup".into(), secs(start));
    let start = Instant::now();
    let opts = BezoutOptions {
        bound_constant: a.cd_omega,
        ..BezoutOptions::default()
    };
    let sol = bezout_solve(&prob, &opts).map_err(koszul_error)?;
    report.timings.insert("solve".into(), secs(start));

    let domain = prob.domain();
    let values = prob.values();
    let radius = a.residual_radius.unwrap_or(a.rho);
    let residual = par::max_range(domain.node_count(), |k| {
        let p = domain.point(k);
        if p[..dim].iter().any(|z| z.norm() > radius) {
            return 0.0;
        }
        let s: C64 = (0..values.len()).map(|j| values[j][k] * sol.g[j].values[k]).sum();
        (s - 1.0).norm()
    })
    .max(0.0);

    report.verdicts.push(Verdict::holds("partition_invariants", sol.partition.holds()));
    report.verdicts.push(Verdict::at_most("bezout_residual", residual, a.tol));
    report.verdicts.push(Verdict::at_most(
        "holomorphy_residual",
        sol.max_holomorphy_residual(),
        a.holomorphy_tol,
    ));
    report.verdicts.push(Verdict::holds(
        "level_bounds",
        sol.levels.iter().all(|l| l.within_bounds()),
    ));
    report.verdicts.push(
        Verdict::at_most("sup_norm_vs_bound", sol.max_sup_norm(), sol.theorem_bound)
            .expectation()
            .configured(),
    );

    let mut norms = Table::new("g_norms", &["j", "sup_norm", "holomorphy_residual"]);
    for (j, (s, h)) in sol.sup_norms.iter().zip(&sol.holomorphy_residuals).enumerate() {
        norms.push(vec![(j + 1).to_string(), num(*s), num(*h)]);
    }
    let mut levels = Table::new(
        "levels",
        &[
            "k",
            "contraction_defect",
            "diagonal_norm",
            "diagonal_bound",
            "upper_norm",
            "upper_bound",
        ],
    );
    for l in &sol.levels {
        levels.push(vec![
            l.k.to_string(),
            num(l.contraction_defect),
            num(l.diagonal_norm),
            num(l.diagonal_bound),
            num(l.upper_norm),
            num(l.upper_bound),
        ]);
    }
    let mut tables = vec![norms, levels];
    if a.dump {
        let mut header = vec!["node".to_string()];
        for i in 1..=dim {
            header.push(format!("z{i}_re"));
            header.push(format!("z{i}_im"));
        }
        for j in 1..=sol.g.len() {
            header.push(format!("g{j}_re"));
            header.push(format!("g{j}_im"));
        }
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut dump = Table::new("g_samples", &refs);
        for k in 0..domain.node_count() {
            let p = domain.point(k);
            let mut row = vec![k.to_string()];
            for z in &p[..dim] {
                row.push(num(z.re));
                row.push(num(z.im));
            }
            for g in &sol.g {
                row.push(num(g.values[k].re));
                row.push(num(g.values[k].im));
            }
            dump.push(row);
        }
        tables.push(dump);
    }
    report.results = json!({
        "dimension": dim,
        "functions": functions.len(),
        "rings_per_axis": rings,
        "angles_per_axis": angles + angles % 2,
        "residual_radius": radius,
        "residual": residual,
        "normalization_approximate": approximate,
        "solution": to_json(&sol),
    });
    Ok(Outcome { report, tables })
}
