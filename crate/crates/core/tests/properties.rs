use proptest::prelude::*;
use selfheap::trace::{gen_random_trace, parse_trace, replay, replay_with, serialize_trace, MixWeights, RandomConfig, ReplayOptions};
use selfheap::verify::{check_heaps, check_lemmas, check_root_list, compare_outputs, oracle_replay};
use selfheap::{Mode, VariantId};

fn config(n_ops: usize, heaps: usize, span: i64) -> RandomConfig {
    RandomConfig {
        weights: MixWeights {
            meld: 0.3,
            delete: 0.5,
            find_min: 0.3,
            make_heap: 0.1,
            ..MixWeights::idk(5.0, 3.0, 2.0)
        },
        n_ops,
        n_heaps: heaps,
        key_range: (-span, span),
        prefill: 0,
        distinct_keys: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_config_matches_oracle(seed in any::<u64>(), n_ops in 1usize..400, heaps in 1usize..4, span in 1i64..50) {
        let t = gen_random_trace(&config(n_ops, heaps, span), seed).unwrap();
        let want = oracle_replay(&t).unwrap();
        for v in VariantId::ALL {
            for m in Mode::ALL {
                let r = replay(&t, v, m, ReplayOptions { record: true }).unwrap();
                prop_assert!(compare_outputs(&r.outputs, &want).is_ok(), "{} {}", v, m);
                let report = check_lemmas(&t, &r, v).unwrap();
                prop_assert!(report.passed(), "{} {}\n{}", v, m, report);
            }
        }
    }

    #[test]
    fn structure_holds_after_every_op(seed in any::<u64>(), n_ops in 1usize..150) {
        let t = gen_random_trace(&config(n_ops, 2, 1000), seed).unwrap();
        for v in VariantId::ALL {
            for m in Mode::ALL {
                let mut first_bad = None;
                replay_with(&t, v, m, ReplayOptions::default(), |i, _, r| {
                    if first_bad.is_none() {
                        let rep = check_heaps(r.heaps());
                        if !rep.passed() {
                            first_bad = Some(format!("op {i}: {rep}"));
                        }
                    }
                })
                .unwrap();
                prop_assert!(first_bad.is_none(), "{} {}: {:?}", v, m, first_bad);
            }
        }
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), n_ops in 0usize..300) {
        let t = gen_random_trace(&config(n_ops, 3, 1_000_000), seed).unwrap();
        prop_assert_eq!(parse_trace(&serialize_trace(&t)).unwrap(), t);
    }

    #[test]
    fn root_lists_with_ties(keys in prop::collection::vec(0i64..6, 1..40)) {
        for v in VariantId::ALL {
            let rep = check_root_list(v, &keys);
            prop_assert!(rep.passed(), "{} {:?}\n{}", v, keys, rep);
        }
    }
}
