use cyclab::spaces::ReducedWeight;
use cyclab::weightlab::{build_subsequence, plan_from_alphas, plan_split, Aggressive, SplitOptions};
use proptest::prelude::*;

/// Every candidate is rescanned from scratch against the last accepted term.
fn brute_force(log_w: &[f64], c0: f64) -> Vec<usize> {
    let mut seq = vec![1];
    loop {
        let last = *seq.last().unwrap();
        let next = (last + 1..log_w.len()).find(|&n| {
            log_w[n] >= 2.0 * log_w[last] && log_w[n] >= c0 * (n as f64).ln()
        });
        match next {
            Some(n) => seq.push(n),
            None => return seq,
        }
    }
}

#[test]
fn square_root_weight_gives_powers_of_four() {
    let w = ReducedWeight::from_log_fn(1, 70_000, |k| (k as f64).sqrt()).unwrap();
    let seq = build_subsequence(&w, 1.0, 70_000).unwrap().sequence();
    assert_eq!(seq, vec![1, 4, 16, 64, 256, 1024, 4096, 16384, 65536]);
}

#[test]
fn constant_alphas_need_576_terms() {
    // Threshold (4·3·2·1)² = 576 at d = 1, A = 2, c = 1.
    let (n, threshold, _, lambdas) = plan_from_alphas(&vec![1.0; 1000], 2.0, 0.0, 1.0, 1).unwrap();
    assert_eq!(threshold, 576.0);
    assert_eq!(n, 576);
    let total: f64 = lambdas.iter().map(|l| l * l).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn short_subsequence_is_insufficient() {
    let w = ReducedWeight::from_log_fn(1, 10_000, |k| (k as f64).sqrt()).unwrap();
    let sub = build_subsequence(&w, 1.0, 10_000).unwrap();
    assert!(plan_split(&w, 1.0, 1, None, &sub, &SplitOptions::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_matches_brute_force(beta in 0.3..0.95f64, a in 0.5..3.0f64, c0 in 0.5..2.0f64) {
        let k_max = 20_000;
        let w = ReducedWeight::from_log_fn(1, k_max, |k| a * (k as f64).powf(beta)).unwrap();
        let sub = build_subsequence(&w, c0, k_max).unwrap();
        prop_assert!(sub.verify().is_ok());
        prop_assert_eq!(sub.sequence(), brute_force(w.log_values(), c0));
    }

    #[test]
    fn aggressive_plans_verify(a in 0.05..0.5f64, beta in 0.5..0.9f64) {
        let w = ReducedWeight::from_log_fn(1, 100_000, |k| (k as f64).powf(beta)).unwrap();
        let sub = build_subsequence(&w, 1.0, 100_000).unwrap();
        let opts = SplitOptions { c_of_d: 10.0, aggressive: Some(Aggressive { a: Some(a), b: None }) };
        if let Ok(plan) = plan_split(&w, 1.0, 1, None, &sub, &opts) {
            prop_assert!(plan.verify().is_ok(), "{:?}", plan.verify());
        }
    }
}
