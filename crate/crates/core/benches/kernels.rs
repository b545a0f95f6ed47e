//! Main kernels timed with the rayon pool and with the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cyclab::cyclicity::TestFunction;
use cyclab::dbar::{cauchy_transform, solve_01_bidisc, BidiscGrid, DiscGrid, ScalarField};
use cyclab::koszul::{bezout_solve, BezoutOptions, CoronaProblem, Domain};
use cyclab::multiseries::{torus_mean, MultiIndex, PolySeries, TorusGrid};
use cyclab::{par, C64};
use std::hint::black_box;

const MODES: [(&str, bool); 2] = [("parallel", true), ("sequential", false)];

fn cauchy(c: &mut Criterion) {
    let mut group = c.benchmark_group("cauchy_transform");
    let grid = DiscGrid::new(0.9, 512, 128).unwrap();
    let data = ScalarField::from_fn(&grid, |z| C64::new((4.0 * z[0].norm_sqr()).cos(), 0.0));
    for (name, on) in MODES {
        par::set_enabled(on);
        group.bench_function(BenchmarkId::new(name, "512x128"), |b| {
            b.iter(|| cauchy_transform(black_box(&grid), black_box(&data)).unwrap())
        });
    }
    group.finish();
}

fn bidisc(c: &mut Criterion) {
    let mut group = c.benchmark_group("dbar_01_bidisc");
    group.sample_size(10);
    let grid = BidiscGrid::square(DiscGrid::new(0.9, 16, 16).unwrap());
    let w1 = ScalarField::from_fn(&grid, |z| z[1].conj());
    let w2 = ScalarField::from_fn(&grid, |z| z[0].conj());
    for (name, on) in MODES {
        par::set_enabled(on);
        group.bench_function(BenchmarkId::new(name, "16^4"), |b| {
            b.iter(|| solve_01_bidisc(&grid, &w1, &w2, None).unwrap())
        });
    }
    group.finish();
}

fn bezout(c: &mut Criterion) {
    let mut group = c.benchmark_group("bezout_disc");
    group.sample_size(10);
    let data = vec![
        PolySeries::monomial(MultiIndex::one(4), C64::new(1.0, 0.0)),
        TestFunction::exp_affine(vec![1.0], 1.0).series().unwrap().0,
    ];
    let grid = DiscGrid::new(0.95, 2000, 64).unwrap();
    let prob = CoronaProblem::new(data, Domain::Disc(grid)).unwrap();
    for (name, on) in MODES {
        par::set_enabled(on);
        group.bench_function(BenchmarkId::new(name, "2000x64"), |b| {
            b.iter(|| bezout_solve(&prob, &BezoutOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn torus(c: &mut Criterion) {
    let mut group = c.benchmark_group("torus_mean");
    let mut f = PolySeries::zero(2, 24).unwrap();
    let idx: Vec<MultiIndex> = f.iter().map(|(i, _)| i).collect();
    for (k, i) in idx.iter().enumerate() {
        f.set_coeff(i, C64::new(1.0 / (1 + k) as f64, 0.0)).unwrap();
    }
    let grid = TorusGrid::new(vec![0.9, 0.9], 64).unwrap();
    for (name, on) in MODES {
        par::set_enabled(on);
        group.bench_function(BenchmarkId::new(name, "deg24"), |b| {
            b.iter(|| torus_mean(black_box(&f), &grid, 3.0).unwrap())
        });
    }
    group.finish();
    par::set_enabled(true);
}

criterion_group!(benches, cauchy, bidisc, bezout, torus);
criterion_main!(benches);
