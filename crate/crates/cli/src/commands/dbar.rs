use super::{secs, to_json};
use crate::config::{DbarCase, DbarSolve, RunConfig};
use crate::report::{num, Outcome, RunReport, Table, Verdict};
use crate::CliError;
use cyclab::dbar::{
    closedness_defect, solve_01_bidisc, solve_02_bidisc, solve_disc, BidiscGrid, DbarCertificate,
    DiscGrid, Grid, ScalarField,
};
use cyclab::C64;
use serde_json::json;
use std::time::Instant;

type Field = fn(&[C64]) -> C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Radius of the sub-disc on which the Cauchy transform of 1 is compared with z̄.
const COMPARE_RADIUS: f64 = 0.9;

struct Row {
    label: &'static str,
    cert: DbarCertificate,
    /// Distance to the manufactured solution, when the solution is unique.
    error: Option<f64>,
    /// ∂̄-residual of the difference to a manufactured solution.
    difference_residual: Option<f64>,
    closedness: Option<f64>,
    refined_residual: Option<f64>,
}

impl Row {
    fn new(label: &'static str, cert: DbarCertificate) -> Self {
        Row {
            label,
            cert,
            error: None,
            difference_residual: None,
            closedness: None,
            refined_residual: None,
        }
    }
}

fn sq(z: C64) -> f64 {
    z.norm_sqr()
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::internal(e)
}

fn disc_rows(grid: &DiscGrid) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    let solve = |g: &DiscGrid, w: Field| {
        let data = ScalarField::from_fn(g, w);
        solve_disc(g, &data).map_err(internal)
    };

    let (u, cert) = solve(grid, |_| ZERO)?;
    let mut row = Row::new("zero", cert);
    row.error = Some(u.sup());
    rows.push(row);

    let (u, cert) = solve(grid, |_| ONE)?;
    let mut row = Row::new("one", cert);
    let exact = ScalarField::from_fn(grid, |z| z[0].conj());
    let err = (0..grid.node_count())
        .filter(|&k| grid.point(k)[0].norm() <= COMPARE_RADIUS)
        .map(|k| (u.values[k] - exact.values[k]).norm())
        .fold(0.0, f64::max);
    row.error = Some(err);
    rows.push(row);

    let (u, cert) = solve(grid, |z| z[0].conj())?;
    let mut row = Row::new("conj_z", cert);
    // ∂̄(z̄²/2) = z̄ and the Cauchy transform of a function of z̄ alone adds a
    // holomorphic part, so compare ∂̄ of the difference.
    let diff: Vec<C64> = u
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| v - grid.point(k)[0].conj().powi(2) * 0.5)
        .collect();
    row.difference_residual = Some(sup(&grid.dbar(&diff, 0)));
    rows.push(row);

    let radial: Field = |z| C64::new((4.0 * sq(z[0])).cos(), 0.0);
    let exact: Field = |z| {
        let s = 4.0 * sq(z[0]);
        z[0].conj() * if s == 0.0 { 1.0 } else { s.sin() / s }
    };
    let (u, cert) = solve(grid, radial)?;
    let mut row = Row::new("radial_manufactured", cert);
    row.error = Some(u.max_distance(&ScalarField::from_fn(grid, exact)));
    let (_, fine) = solve(&grid.refined(), radial)?;
    row.refined_residual = Some(fine.residual);
    rows.push(row);
    Ok(rows)
}

fn bidisc01(grid: &BidiscGrid, closedness_tol: f64) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    let solve = |g: &BidiscGrid, w1: Field, w2: Field| -> Result<_, CliError> {
        let w1 = ScalarField::from_fn(g, w1);
        let w2 = ScalarField::from_fn(g, w2);
        let defect = closedness_defect(g, &w1, &w2);
        let (u, cert) = solve_01_bidisc(g, &w1, &w2, Some(closedness_tol)).map_err(internal)?;
        Ok((u, cert, defect))
    };

    let (u, cert, defect) = solve(grid, |_| ZERO, |_| ZERO)?;
    let mut row = Row::new("zero", cert);
    row.error = Some(u.sup());
    row.closedness = Some(defect);
    rows.push(row);

    let (u, cert, defect) = solve(grid, |z| z[1].conj(), |z| z[0].conj())?;
    let mut row = Row::new("conj_product", cert);
    let diff: Vec<C64> = u
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let p = grid.point(k);
            v - p[0].conj() * p[1].conj()
        })
        .collect();
    row.difference_residual = Some(sup(&grid.dbar(&diff, 0)).max(sup(&grid.dbar(&diff, 1))));
    row.closedness = Some(defect);
    rows.push(row);

    // u = cos(2|z₁|²) sin(|z₂|²) + z̄₁z̄₂
    let w1: Field = |z| {
        let (a, b) = (sq(z[0]), sq(z[1]));
        -2.0 * z[0] * (2.0 * a).sin() * b.sin() + z[1].conj()
    };
    let w2: Field = |z| {
        let (a, b) = (sq(z[0]), sq(z[1]));
        (2.0 * a).cos() * z[1] * b.cos() + z[0].conj()
    };
    let (_, cert, defect) = solve(grid, w1, w2)?;
    let mut row = Row::new("trig_manufactured", cert);
    row.closedness = Some(defect);
    let (_, fine, _) = solve(&grid.refined(), w1, w2)?;
    row.refined_residual = Some(fine.residual);
    rows.push(row);
    Ok(rows)
}

fn bidisc02(grid: &BidiscGrid) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    let solve = |g: &BidiscGrid, w: Field| {
        let data = ScalarField::from_fn(g, w);
        solve_02_bidisc(g, &data).map_err(internal)
    };

    let ((v1, v2), cert) = solve(grid, |_| ZERO)?;
    let mut row = Row::new("zero", cert);
    row.error = Some(v1.sup().max(v2.sup()));
    rows.push(row);

    let (_, cert) = solve(grid, |_| ONE)?;
    rows.push(Row::new("one", cert));
    let (_, cert) = solve(grid, |z| z[0])?;
    rows.push(Row::new("z1", cert));

    // ∂̄(sin(|z₁|²+|z₂|²) dz̄₂) = z₁ cos(|z₁|²+|z₂|²) dz̄₁∧dz̄₂
    let g: Field = |z| z[0] * (sq(z[0]) + sq(z[1])).cos();
    let (_, cert) = solve(grid, g)?;
    let mut row = Row::new("trig_manufactured", cert);
    let (_, fine) = solve(&grid.refined(), g)?;
    row.refined_residual = Some(fine.residual);
    rows.push(row);
    Ok(rows)
}

fn sup(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub(super) fn solve(config: &RunConfig, a: &DbarSolve) -> Result<Outcome, CliError> {
    let mut report = RunReport::new(config);
    let start = Instant::now();
    // The bidisc grids use half the resolution per axis so that the product
    // grid stays at desk scale.
    let per_axis = match a.case {
        DbarCase::Disc01 => a.resolution,
        _ => (a.resolution / 2).max(8),
    };
    let disc = DiscGrid::new(a.rho, per_axis, per_axis + per_axis % 2)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let rows = match a.case {
        DbarCase::Disc01 => disc_rows(&disc)?,
        DbarCase::Bidisc01 => bidisc01(&BidiscGrid::square(disc.clone()), a.closedness_tol)?,
        DbarCase::Bidisc02 => bidisc02(&BidiscGrid::square(disc.clone()))?,
    };
    report.timings.insert("solve".into(), secs(start));

    let mut table = Table::new(
        "dbar",
        &[
            "case",
            "residual",
            "relative_residual",
            "data_sup",
            "solution_sup",
            "bound_ratio",
            "error",
            "difference_residual",
            "closedness_defect",
            "refined_residual",
            "nodes",
        ],
    );
    for r in &rows {
        let tol = a.tol;
        let name = |what: &str| format!("{}_{what}", r.label);
        if r.label == "zero" {
            report.verdicts.push(Verdict::at_most(&name("solution"), r.error.unwrap_or(0.0), 0.0));
        } else if let Some(e) = r.error {
            report.verdicts.push(Verdict::at_most(&name("error"), e, tol));
        }
        if r.label != "zero" {
            report.verdicts.push(Verdict::at_most(&name("residual"), r.cert.residual, tol));
        }
        if let Some(d) = r.difference_residual {
            report.verdicts.push(Verdict::at_most(&name("difference_residual"), d, tol));
        }
        if let Some(fine) = r.refined_residual {
            let ratio = r.cert.residual / fine.max(f64::MIN_POSITIVE);
            report.verdicts.push(Verdict::at_least(&name("refinement_gain"), ratio, 2.0));
        }
        table.push(vec![
            r.label.into(),
            num(r.cert.residual),
            num(r.cert.relative_residual),
            num(r.cert.data_sup),
            num(r.cert.solution_sup),
            num(r.cert.bound_ratio),
            opt(r.error),
            opt(r.difference_residual),
            opt(r.closedness),
            opt(r.refined_residual),
            r.cert.nodes.to_string(),
        ]);
    }
    report.results = json!({
        "case": a.case,
        "rings_per_axis": disc.n_r(),
        "angles_per_axis": disc.n_theta(),
        "rho": a.rho,
        "certificates": rows.iter().map(|r| json!({
            "case": r.label,
            "certificate": to_json(&r.cert),
            "error": r.error,
            "difference_residual": r.difference_residual,
            "closedness_defect": r.closedness,
            "refined_residual": r.refined_residual,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        report,
        tables: vec![table],
    })
}
