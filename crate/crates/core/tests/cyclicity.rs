use cyclab::cyclicity::{
    approximate_one, harnack_floor, polynomial_approx, split_power_defect, telescoping_defect,
    Branch, CyclicityOptions, HarnackGrid, Resolution, TestFunction, ZeroFreeWitness,
};
use cyclab::multiseries::{pow_real, PolySeries};
use cyclab::spaces::{Space, Weight};
use cyclab::C64;
use proptest::prelude::*;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn space() -> Space {
    Space::Weighted {
        weight: Weight::exp_pow(1, 1.0, 0.6).unwrap(),
        p: 2.0,
    }
}

fn small_options() -> CyclicityOptions {
    CyclicityOptions {
        resolution: Resolution {
            radial_min: 1000,
            radial_per_n: 100,
            ..Resolution::default()
        },
        ..CyclicityOptions::default()
    }
}

fn exp_u() -> TestFunction {
    TestFunction::exp_affine(vec![1.0], 1.0)
}

#[test]
fn constant_one_is_inverted_exactly() {
    let t = TestFunction::exp_affine(vec![0.0], 0.0);
    let w = ZeroFreeWitness::from_test_function(&t, &HarnackGrid::default_for(1)).unwrap();
    let report = approximate_one(&w, &space(), &[4, 8], &small_options()).unwrap();
    for row in &report.rows {
        assert!(row.trivial);
        assert_eq!(row.norm, 0.0);
    }
}

#[test]
fn harnack_floor_is_exponential_in_root_k() {
    let w = ZeroFreeWitness::from_test_function(&exp_u(), &HarnackGrid::default_for(1)).unwrap();
    for k in [4usize, 9, 25, 64] {
        let expected = (-2.0 * (k as f64).sqrt()).exp();
        assert!((harnack_floor(&w, k).unwrap() - expected).abs() <= 1e-12 * expected);
    }
    assert!(harnack_floor(&w, 3).is_err());
}

#[test]
fn remainder_decays_and_respects_the_bound() {
    let w = ZeroFreeWitness::from_test_function(&exp_u(), &HarnackGrid::default_for(1)).unwrap();
    let report = approximate_one(&w, &space(), &[4, 8], &CyclicityOptions::default()).unwrap();
    assert!(report.strictly_decreasing, "{:?}", report.rows);
    assert!(report.within_theorem_bound);
    for row in &report.rows {
        assert!(row.bezout_residual < 1e-10);
        let exact = row.exact_norm.unwrap();
        assert!((row.norm - exact).abs() <= 1e-2 * exact, "{} vs {exact}", row.norm);
    }
}

#[test]
fn polynomial_approx_of_zero_and_one() {
    let (u, _) = exp_u().series().unwrap();
    let (inv, _) = TestFunction::exp_affine(vec![-1.0], -1.0).series().unwrap();
    let zero = PolySeries::zero(1, 0).unwrap();
    let r = polynomial_approx(&zero, &u, &space(), &inv, Branch::Multiplier, 20, 1e-6).unwrap();
    assert_eq!(r.error, 0.0);
    let unit = PolySeries::constant(1, 0, one()).unwrap();
    for branch in [Branch::Multiplier, Branch::Compnorm] {
        let r = polynomial_approx(&unit, &u, &space(), &inv, branch, inv.max_degree(), 1e-6).unwrap();
        assert!(r.target_met, "{branch:?}: {}", r.error);
        assert!(r.error <= r.l1_estimate * (1.0 + 1e-9) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_split_reassembles(weights in prop::collection::vec(0.1..1.0f64, 1..5)) {
        let total: f64 = weights.iter().map(|w| w * w).sum();
        let lambdas: Vec<f64> = weights.iter().map(|w| w / total.sqrt()).collect();
        let (u, _) = exp_u().series().unwrap();
        let cap = u.max_degree();
        let mut prod = PolySeries::constant(1, cap, one()).unwrap();
        for l in &lambdas {
            prod = prod.mul(&pow_real(&u, l * l, cap).unwrap(), cap).unwrap();
        }
        prop_assert!(prod.max_coeff_distance(&u).unwrap() < 1e-12);
        prop_assert!(split_power_defect(&u, &lambdas, cap).unwrap() < 1e-12);
    }

    #[test]
    fn telescoping_sum_for_two_factors(a in prop::collection::vec(-1.0..1.0f64, 4), b in prop::collection::vec(-1.0..1.0f64, 4)) {
        let series = |c: &[f64]| PolySeries::univariate(c.iter().map(|&x| C64::new(x, 0.0)).collect());
        let cap = 12;
        let (f1, f2) = (series(&a[..2]), series(&b[..2]));
        let (u1, u2) = (series(&a[2..]), series(&b[2..]));
        let p1 = f1.mul(&u1, cap).unwrap();
        let p2 = f2.mul(&u2, cap).unwrap();
        // 1 − p1p2 = (1 − p1) + p1(1 − p2)
        let unit = PolySeries::constant(1, cap, one()).unwrap();
        let lhs = unit.sub(&p1.mul(&p2, cap).unwrap()).unwrap();
        let rhs = unit.sub(&p1).unwrap().add(&p1.mul(&unit.sub(&p2).unwrap(), cap).unwrap()).unwrap();
        prop_assert!(lhs.max_coeff_distance(&rhs).unwrap() < 1e-14);
        let defect = telescoping_defect(&[f1, f2], &[u1, u2], cap).unwrap();
        prop_assert!(defect < 1e-14);
    }
}
