mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wrsm::generators::{random_rsm, sample_cost, RandomParams};
use wrsm::oracle::{all_configurations, bounded_distances, OracleOptions};
use wrsm::rsm::{Configuration, Rsm};
use wrsm::semiring::{verify_laws, Cost, FactSet, GenKill, GenKillValue, Semiring, Tropical};

fn configs<S: Semiring>(rsm: &Rsm<S>, pick: usize) -> Vec<Configuration> {
    let all = all_configurations(rsm, 2);
    if all.is_empty() {
        return all;
    }
    let step = (all.len() / 8).max(1);
    all.into_iter().skip(pick % step).step_by(step).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_preserves_well_formedness(seed in 0u64..10_000, pick in 0usize..64) {
        let case = common::tropical(seed);
        for c in configs(&case.rsm, pick) {
            for (next, _) in case.rsm.step(&c).unwrap() {
                prop_assert!(case.rsm.check_configuration(&next).is_ok());
                prop_assert!(next.stack.len() + 1 >= c.stack.len() && next.stack.len() <= c.stack.len() + 1);
            }
        }
    }

    #[test]
    fn config_text_round_trips(seed in 0u64..10_000, pick in 0usize..64) {
        let case = common::boolean(seed);
        for c in configs(&case.rsm, pick) {
            let text = case.rsm.fmt_config(&c);
            prop_assert_eq!(case.rsm.parse_config(&text).unwrap(), c);
        }
    }

    #[test]
    fn generator_respects_limits(seed in 0u64..10_000) {
        let p = RandomParams::default();
        let def = random_rsm(&p, &mut ChaCha8Rng::seed_from_u64(seed), |_| true);
        let m = Rsm::new(wrsm::Boolean, &def).unwrap().metrics();
        prop_assert!(m.modules >= 1 && m.modules <= p.max_modules);
        prop_assert!(m.theta_e <= p.max_entries && m.theta_x <= p.max_exits);
        prop_assert!(m.transitions <= p.max_transitions);
        prop_assert_eq!(m.size, m.nodes.max(m.transitions));
    }

    #[test]
    fn normalization_preserves_distances(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let def = random_rsm(&RandomParams::default(), &mut rng, |r| sample_cost(r, 5));
        let raw = Rsm::new(Tropical::new(), &def).unwrap();
        let norm = raw.normalize_exit_weights();
        prop_assert!(norm.is_normalized());
        let s = raw.semiring();
        let start = raw.node_ids().find(|&u| raw.kind(u).is_configuration_node()).unwrap();
        let seeds = [(Configuration::new(start, vec![]), s.one())];
        let nstart = norm.node_id(&raw.node(start).name).unwrap();
        let nseeds = [(Configuration::new(nstart, vec![]), s.one())];
        let a = bounded_distances(&raw, &seeds, 3, OracleOptions::default()).unwrap();
        let b = bounded_distances(&norm, &nseeds, 3, OracleOptions::default()).unwrap();
        for c in all_configurations(&raw, 2) {
            let nc = norm.parse_config(&raw.fmt_config(&c)).unwrap();
            prop_assert_eq!(a.get(s, &c), b.get(s, &nc));
        }
    }

    #[test]
    fn tropical_laws_on_samples(xs in proptest::collection::vec(prop_oneof![
        (0u64..50).prop_map(Cost::Finite),
        Just(Cost::Infinite),
    ], 1..6)) {
        prop_assert!(verify_laws(&Tropical::new(), &xs).all_hold());
    }

    #[test]
    fn genkill_laws_on_samples(pairs in proptest::collection::vec((0u64..64, 0u64..64), 1..6)) {
        let gk = GenKill::new(["a", "b", "c", "d", "e", "f"]).unwrap();
        let xs: Vec<GenKillValue> = pairs
            .into_iter()
            .map(|(k, g)| GenKillValue::transfer(FactSet(k), FactSet(g)))
            .collect();
        prop_assert!(verify_laws(&gk, &xs).all_hold());
    }
}
