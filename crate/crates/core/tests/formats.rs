mod common;

use common::*;
use proptest::prelude::*;
use ufv_core::model::{generate_synthetic, parse_database, serialize_database};
use ufv_core::numeric::format_real;
use ufv_core::prover::{parse_claims, prove, serialize_claims, AdversaryKind};
use ufv_core::{AdversaryModel, MiningMode, MiningQuery};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reals_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_real(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn generated_databases_round_trip(
        n in 0usize..40,
        k in 1usize..12,
        density in 0.05f64..=1.0,
        lo in 0.01f64..=1.0,
        seed in any::<u64>(),
    ) {
        let hi = (lo + 0.3).min(1.0);
        let db = generate_synthetic(n, k, density, (lo, hi), seed).unwrap();
        let text = serialize_database(&db);
        let back = parse_database(&text).unwrap();
        prop_assert_eq!(&back, &db);
        prop_assert_eq!(serialize_database(&back), text);
    }

    #[test]
    fn claims_round_trip(seed in any::<u64>(), mode_idx in 0usize..4, adv_idx in 0usize..5) {
        let mode = [MiningMode::Deterministic, MiningMode::Expected, MiningMode::Pws, MiningMode::Approx][mode_idx];
        let mut r = rng(seed);
        let db = if mode == MiningMode::Pws {
            small_db(&mut r, 6, 3, 18)
        } else {
            random_db(&mut r, 30, 4, mode == MiningMode::Deterministic)
        };
        let pft = mode.needs_pft().then_some(0.3);
        let q = MiningQuery::new(mode, 0.2, pft, db.len()).unwrap();
        let kind = AdversaryKind::ALL[adv_idx];
        let mag = if kind == AdversaryKind::Lazy { 0.5 } else { 0.1 };
        let adv = AdversaryModel::new(kind, mag, seed).unwrap();
        let resp = prove(&db, &q, None, &adv).unwrap();
        let bytes = serialize_claims(&resp);
        let back = parse_claims(&bytes, db.len()).unwrap();
        prop_assert_eq!(&back, &resp);
        prop_assert_eq!(serialize_claims(&back), bytes);
    }
}

#[test]
fn small_databases_round_trip() {
    for text in [
        &b"A:0.5 B:0.6\nA:0.4 B:0.5"[..],
        b"A:1 B:1 C:1\nA:1 B:1\nA:1 B:1 D:1\nC:1 D:1\nA:1 D:1",
        b"",
    ] {
        let db = parse_database(text).unwrap();
        assert_eq!(parse_database(&serialize_database(&db)).unwrap(), db);
    }
    assert_eq!(serialize_database(&parse_database(b"").unwrap()), b"#UDB v1\n");
}

#[test]
fn generator_is_deterministic() {
    let a = serialize_database(&generate_synthetic(100, 20, 0.3, (0.2, 0.8), 42).unwrap());
    let b = serialize_database(&generate_synthetic(100, 20, 0.3, (0.2, 0.8), 42).unwrap());
    assert_eq!(a, b);
    let full = generate_synthetic(10, 5, 1.0, (1.0, 1.0), 7).unwrap();
    assert!(full.is_deterministic());
    for item in full.universe() {
        let x = ufv_core::Itemset::singleton(item.clone());
        assert_eq!(ufv_core::mining::expected_support(&full, &x), 10.0);
    }
    assert!(generate_synthetic(0, 3, 0.5, (0.2, 0.8), 1).unwrap().is_empty());
}
