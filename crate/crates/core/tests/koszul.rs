use cyclab::cyclicity::TestFunction;
use cyclab::dbar::{BidiscGrid, DiscGrid, Grid};
use cyclab::koszul::{
    bezout_solve, dbar_eta_form, eta_form, lift, partition_of_unity, BezoutOptions, CoronaProblem,
    Domain, ExteriorIndex, FormField,
};
use cyclab::multiseries::{MultiIndex, PolySeries};
use cyclab::C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `(z^n, e^{z−1})` on a disc grid.
fn disc_problem(n: usize, rings: usize, angles: usize) -> CoronaProblem {
    let data = vec![
        PolySeries::monomial(MultiIndex::one(n), one()),
        TestFunction::exp_affine(vec![1.0], 1.0).series().unwrap().0,
    ];
    let grid = DiscGrid::new(0.9, rings, angles).unwrap();
    CoronaProblem::new(data, Domain::Disc(grid)).unwrap()
}

/// `(z_1^2, z_2^2, e^{(z_1+z_2)/2−1})` on a bidisc grid.
fn bidisc_problem(rings: usize) -> CoronaProblem {
    let data = vec![
        PolySeries::monomial(MultiIndex::new(&[2, 0]).unwrap(), one()),
        PolySeries::monomial(MultiIndex::new(&[0, 2]).unwrap(), one()),
        TestFunction::exp_affine(vec![0.5, 0.5], 1.0).series().unwrap().0,
    ];
    let grid = BidiscGrid::square(DiscGrid::new(0.9, rings, rings).unwrap());
    CoronaProblem::new(data, Domain::Bidisc(grid)).unwrap()
}

fn random_form(rng: &mut ChaCha8Rng, p: &CoronaProblem, k: usize, r: usize) -> FormField {
    let mut f = FormField::zero(p.len(), p.dim(), k, r, p.domain().node_count());
    let keys: Vec<_> = f.terms().map(|(e, d, _)| (e, d)).collect();
    for (e, d) in keys {
        for v in f.coeff_mut(e, d).unwrap() {
            *v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    f
}

#[test]
fn subsets_are_counted_by_binomials() {
    assert_eq!(ExteriorIndex::subsets(4, 2).len(), 6);
    assert_eq!(ExteriorIndex::subsets(3, 0).len(), 1);
    assert_eq!(ExteriorIndex::subsets(3, 4).len(), 0);
}

#[test]
fn partition_invariants_hold() {
    for p in [disc_problem(4, 64, 32), bidisc_problem(8)] {
        let part = partition_of_unity(&p).unwrap();
        let report = part.check(&p);
        assert!(report.holds(), "{report:?}");
    }
}

#[test]
fn analytic_dbar_eta_matches_finite_differences() {
    // The ramps are narrow, so the comparison needs a fine radial grid.
    let gap = |rings: usize| {
        let p = disc_problem(2, rings, 64);
        let part = partition_of_unity(&p).unwrap();
        let fd = eta_form(&p, &part).dbar_fd(p.domain()).unwrap();
        let exact = dbar_eta_form(&p, &part);
        fd.distance(&exact).unwrap() / exact.norm()
    };
    let (coarse, fine) = (gap(2000), gap(4000));
    assert!(fine < 1e-2, "relative gap {fine}");
    assert!(coarse / fine > 3.0, "{coarse} -> {fine}");
}

#[test]
fn bezout_solution_on_the_disc() {
    let p = disc_problem(2, 3000, 64);
    let sol = bezout_solve(&p, &BezoutOptions::default()).unwrap();
    assert!(sol.residual < 1e-12, "{}", sol.residual);
    assert!(sol.partition.holds());
    assert!(sol.levels.iter().all(|l| l.within_bounds()));
    assert!(sol.max_holomorphy_residual() < 1e-2, "{}", sol.max_holomorphy_residual());
    assert!(sol.max_sup_norm() <= sol.theorem_bound);
}

#[test]
fn bezout_residual_on_the_bidisc() {
    let p = bidisc_problem(12);
    let sol = bezout_solve(&p, &BezoutOptions::default()).unwrap();
    assert!(sol.residual < 1e-10, "{}", sol.residual);
    assert_eq!(sol.g.len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exterior_identities(seed in any::<u64>(), bidisc in any::<bool>()) {
        let p = if bidisc { bidisc_problem(8) } else { disc_problem(3, 8, 8) };
        let part = partition_of_unity(&p).unwrap();
        let (n, d, f) = (p.len(), p.dim(), p.values());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (k, r) = (rng.gen_range(0..=n), rng.gen_range(0..=d));
        let a = random_form(&mut rng, &p, k, r);
        let twice = a.contract(f).unwrap().contract(f).unwrap();
        prop_assert!(twice.norm() <= 1e-12 * a.norm().max(1.0));

        let (k2, r2) = (rng.gen_range(0..=n - k), rng.gen_range(0..=d - r));
        let b = random_form(&mut rng, &p, k2, r2);
        let sign = if (k * k2 + r * r2) % 2 == 0 { 1.0 } else { -1.0 };
        let swapped = b.wedge(&a).unwrap().scale(C64::new(sign, 0.0));
        prop_assert!(a.wedge(&b).unwrap().distance(&swapped).unwrap() <= 1e-12 * (a.norm() * b.norm()).max(1.0));

        if k < n {
            let exact = random_form(&mut rng, &p, k + 1, r).contract(f).unwrap();
            let back = lift(&exact, &p, &part).unwrap().contract(f).unwrap();
            prop_assert!(back.distance(&exact).unwrap() <= 1e-10 * exact.norm().max(1.0));
        }
    }
}
