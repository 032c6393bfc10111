mod common;

use common::*;
use proptest::prelude::*;
use ufv_core::checker::all_zero_probability;
use ufv_core::mining::{
    enumerate_worlds, expected_support, frequentness_probability, mine, p_less_dp,
    support_distribution, variance, MinedValue, MiningMode, MiningQuery,
};
use ufv_core::model::squared_transform;
use ufv_core::prover::{joint_box_dp, joint_box_factorized, joint_tail, joint_tail_via_boxes, lambda_value};

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributions_match_worlds(seed in any::<u64>()) {
        let db = small_db(&mut rng(seed), 4, 3, 12);
        let oracle = Oracle::new(&db);
        prop_assert!(close(oracle.total_probability(), 1.0, TOL));
        for x in lattice(3) {
            let dist = support_distribution(&db, &x);
            let want = oracle.distribution(&x);
            prop_assert_eq!(dist.probs().len(), want.len());
            for (a, b) in dist.probs().iter().zip(&want) {
                prop_assert!(close(*a, *b, TOL), "{} {:?} {:?}", x, dist.probs(), want);
            }
            for delta in 1..=db.len() as u64 + 1 {
                let f = frequentness_probability(&db, &x, delta);
                prop_assert!(close(f, oracle.tail(&x, delta), TOL));
                prop_assert!(close(p_less_dp(&db, &x, delta), oracle.p_less(&x, delta), TOL));
                prop_assert!(close(f, 1.0 - p_less_dp(&db, &x, delta), TOL));
            }
            prop_assert!(close(expected_support(&db, &x), oracle.mean(&x), TOL));
            prop_assert!(close(variance(&db, &x), oracle.variance(&x), TOL));
        }
    }

    #[test]
    fn joint_quantities_match_worlds(seed in any::<u64>()) {
        let db = small_db(&mut rng(seed), 4, 3, 12);
        let oracle = Oracle::new(&db);
        for x in lattice(3) {
            prop_assert!(close(all_zero_probability(&db, &x), oracle.all_zero(&x), TOL));
            for delta in 1..=db.len() as u64 + 1 {
                let b = joint_box_dp(&db, &x, delta).unwrap();
                prop_assert!(close(b, oracle.joint_box(&x, delta), TOL));
                prop_assert!(close(b, joint_box_factorized(&db, &x, delta), TOL));
                prop_assert!(close(lambda_value(&db, &x, delta).unwrap(), oracle.lambda(&x, delta), TOL));
                let j = joint_tail(&db, &x, delta).unwrap();
                prop_assert!(close(j, oracle.joint_tail(&x, delta), TOL));
                prop_assert!(close(j, joint_tail_via_boxes(&db, &x, delta).unwrap(), TOL));
            }
        }
    }

    #[test]
    fn library_worlds_match_direct_enumeration(seed in any::<u64>()) {
        let db = small_db(&mut rng(seed), 4, 3, 10);
        let oracle = Oracle::new(&db);
        let worlds = enumerate_worlds(&db).unwrap();
        prop_assert_eq!(worlds.len(), oracle.world_count());
        let total: f64 = worlds.iter().map(|w| w.probability()).sum();
        prop_assert!(close(total, 1.0, TOL));
        for x in lattice(3) {
            let mut dist = vec![0.0; db.len() + 1];
            for w in &worlds {
                dist[w.support(&x)] += w.probability();
            }
            for (a, b) in dist.iter().zip(oracle.distribution(&x)) {
                prop_assert!(close(*a, b, TOL));
            }
        }
    }

    #[test]
    fn variance_is_esup_minus_squared_esup(seed in any::<u64>()) {
        let db = random_db(&mut rng(seed), 40, 4, false);
        let sq = squared_transform(&db);
        for x in lattice(4) {
            let lhs = variance(&db, &x);
            let rhs = expected_support(&db, &x) - expected_support(&sq, &x);
            prop_assert!(close(lhs, rhs, TOL));
            prop_assert!(lhs >= -TOL && lhs <= expected_support(&db, &x) + TOL);
        }
    }

    #[test]
    fn deterministic_mining_matches_brute_force(seed in any::<u64>(), ratio in 0.05f64..0.9) {
        let db = random_db(&mut rng(seed), 12, 5, true);
        let q = MiningQuery::new(MiningMode::Deterministic, ratio, None, db.len()).unwrap();
        let result = mine(&db, &q).unwrap();
        let all = lattice(5);
        let sups = brute_supports(&db, &all);
        for x in &all {
            let frequent = sups[x] >= q.delta;
            prop_assert_eq!(result.contains(x), frequent, "{}", x);
            if frequent {
                prop_assert_eq!(result.get(x), Some(&MinedValue::Sup(sups[x])));
            }
        }
        // Expected-support mining on 0/1 data gives the same itemsets.
        let qe = MiningQuery::new(MiningMode::Expected, ratio, None, db.len()).unwrap();
        let expected = mine(&db, &qe).unwrap();
        let det_sets: Vec<_> = result.itemsets().collect();
        let exp_sets: Vec<_> = expected.itemsets().collect();
        prop_assert_eq!(det_sets, exp_sets);
        for (x, v) in expected.iter() {
            prop_assert_eq!(*v, MinedValue::Esup(sups[x] as f64));
        }
    }

    #[test]
    fn pws_mining_matches_worlds(seed in any::<u64>(), pft in 0.05f64..0.95, ratio in 0.1f64..0.9) {
        let db = small_db(&mut rng(seed), 5, 3, 12);
        let oracle = Oracle::new(&db);
        let q = MiningQuery::new(MiningMode::Pws, ratio, Some(pft), db.len()).unwrap();
        let result = mine(&db, &q).unwrap();
        for x in lattice(3) {
            let p = oracle.tail(&x, q.delta);
            // Skip itemsets sitting on the threshold within round-off.
            if (p - pft).abs() < 1e-9 {
                continue;
            }
            prop_assert_eq!(result.contains(&x), p >= pft, "{} {}", x, p);
        }
    }

    #[test]
    fn anti_monotone(seed in any::<u64>()) {
        let db = random_db(&mut rng(seed), 30, 4, false);
        let all = lattice(4);
        for x in &all {
            for y in &all {
                if x.is_subset_of(y) {
                    prop_assert!(expected_support(&db, y) <= expected_support(&db, x) + TOL);
                    for delta in [1, 2, 5] {
                        prop_assert!(
                            frequentness_probability(&db, y, delta)
                                <= frequentness_probability(&db, x, delta) + TOL
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mined_results_are_subset_closed(seed in any::<u64>(), ratio in 0.05f64..0.5) {
        let db = random_db(&mut rng(seed), 30, 5, false);
        let q = MiningQuery::new(MiningMode::Expected, ratio, None, db.len()).unwrap();
        let result = mine(&db, &q).unwrap();
        for x in result.itemsets() {
            for y in x.non_empty_subsets().unwrap() {
                prop_assert!(result.contains(&y));
            }
        }
    }
}

#[test]
fn single_instance_worlds() {
    let db = ufv_core::model::parse_database(b"A:0.25").unwrap();
    let mut probs: Vec<f64> = enumerate_worlds(&db).unwrap().iter().map(|w| w.probability()).collect();
    probs.sort_by(f64::total_cmp);
    assert_eq!(probs, vec![0.25, 0.75]);
}
