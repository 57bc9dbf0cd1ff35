use std::collections::BTreeMap;

use eulersum::numerics::{eval_sym, PrecisionContext};
use eulersum::oracle::OracleConfig;
use eulersum::relations::{
    all_generators, oracle_sigmas, sigma_ids, solve_weight, Provider, SolveOptions, SumPath,
};
use proptest::prelude::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::with_bits(192).unwrap()
}

#[test]
fn solved_values_match_oracle() {
    let ctx = ctx();
    let cfg = OracleConfig::with_tolerance(1e-12);
    for w in 3..=9 {
        let opts = SolveOptions { providers: Provider::ALL.to_vec(), all_families: true, residuals: None };
        let report = solve_weight(w, &opts).unwrap();
        assert!(report.inconsistent.is_empty(), "weight {w}");
        assert!(report.cross_checks.iter().all(|c| c.agrees), "weight {w}");
        let oracle = oracle_sigmas(w, &ctx, &cfg).unwrap();
        for (id, expr) in &report.solved {
            let sym = eval_sym(expr, &ctx).unwrap().to_f64();
            let num = oracle[id].to_f64();
            assert!((sym - num).abs() < 1e-10, "{id}: {sym} vs {num}");
        }
    }
}

#[test]
fn weight_nine_fully_determined_with_all_families() {
    let opts = SolveOptions { providers: Provider::ALL.to_vec(), all_families: true, residuals: None };
    let report = solve_weight(9, &opts).unwrap();
    assert!(report.unresolved.is_empty(), "{:?}", report.unresolved);
    assert_eq!(report.solved.len(), sigma_ids(9).len());
    assert!(report.provided.iter().all(|id| report.solved.contains_key(id)));
}

#[test]
fn product_relations_leave_even_weights_underdetermined() {
    let report = solve_weight(8, &SolveOptions::default()).unwrap();
    assert!(!report.unresolved.is_empty());
    assert!(report.resubstitution().iter().all(|(_, r)| r.is_zero()));
}

#[test]
fn odd_weight_sum_path() {
    let (ok, path) = eulersum::relations::sum_theorem_symbolic(7).unwrap();
    assert_eq!(ok, Some(true));
    assert_eq!(path, SumPath::AllSolved);
}

#[test]
fn every_generator_holds_numerically() {
    let ctx = ctx();
    let cfg = OracleConfig::with_tolerance(1e-12);
    for w in 3..=8 {
        let values: BTreeMap<_, _> = oracle_sigmas(w, &ctx, &cfg).unwrap();
        for g in all_generators(w as i64) {
            let r = g.relation().unwrap().residual_num(&values, &ctx).unwrap();
            assert!(r.to_f64().abs() < 1e-10, "{g}: {}", r.to_f64());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_never_mix_weights(w in 3i64..14, pick in 0usize..1000) {
        let gens = all_generators(w);
        prop_assume!(!gens.is_empty());
        let rel = gens[pick % gens.len()].relation().unwrap();
        prop_assert_eq!(rel.weight() as i64, w);
        prop_assert!(rel.coefficients().keys().all(|id| id.weight() as i64 == w));
    }
}
