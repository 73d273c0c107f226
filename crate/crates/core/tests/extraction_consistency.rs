mod common;

use common::Case;
use wrsm::automaton::accept_weight;
use wrsm::extraction::{
    block_precompute, config_distance, node_distances, superconfig_automaton, superconfig_distance,
    superconfig_distance_blocked,
};
use wrsm::oracle::{all_configurations, bounded_distances, OracleOptions};
use wrsm::rsm::{Configuration, Rsm, Superconfiguration};
use wrsm::semiring::{show, Semiring};

/// Every module sequence of length at most `len`.
fn module_sequences(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for s in &layer {
            for m in 0..k {
                let mut t: Vec<usize> = s.clone();
                t.push(m);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Stacks whose i-th box is owned by the i-th module of `modules`.
fn refining_stacks<S: Semiring>(rsm: &Rsm<S>, modules: &[usize]) -> Vec<Vec<wrsm::BoxId>> {
    let mut out = vec![vec![]];
    for &m in modules {
        let mut next = Vec::new();
        for st in &out {
            for &b in &rsm.module(m).boxes {
                let mut t = st.clone();
                t.push(b);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn check<S: Semiring>(case: &Case<S>) {
    let rsm = &case.rsm;
    let s = rsm.semiring();
    let post = case.post_star();
    let a = &post.automaton;
    let ctx = |c: &Configuration| format!("seed {}: {}", case.seed, rsm.fmt_config(c));

    for c in all_configurations(rsm, 3) {
        let dp = config_distance(rsm, a, &c).unwrap();
        assert_eq!(dp, accept_weight(rsm, a, &c).unwrap(), "{}", ctx(&c));
    }

    let maut = superconfig_automaton(rsm, a);
    let tables: Vec<_> = (1..=3).map(|z| block_precompute(rsm, &maut, z, 1 << 16).unwrap()).collect();
    let k = rsm.modules().len();
    for u in rsm.node_ids().filter(|&u| rsm.kind(u).is_configuration_node()) {
        for seq in module_sequences(k, 3) {
            let sc = Superconfiguration { node: u, modules: seq.clone() };
            let got = superconfig_distance(rsm, &maut, &sc).unwrap();
            let mut want = s.zero();
            for st in refining_stacks(rsm, &seq) {
                let c = Configuration::new(u, st);
                if rsm.check_configuration(&c).is_ok() {
                    want = s.combine(&want, &config_distance(rsm, a, &c).unwrap());
                }
            }
            assert_eq!(got, want, "seed {}: {}", case.seed, rsm.fmt_superconfig(&sc));
            for t in &tables {
                let blocked = superconfig_distance_blocked(rsm, &maut, t, &sc).unwrap();
                assert_eq!(blocked, got, "seed {} z {}: {}", case.seed, t.z(), rsm.fmt_superconfig(&sc));
            }
        }
    }

    // Node distances against the combine of oracle distances per node, with
    // the oracle's stack bound raised until every node value is stable.
    let nd = node_distances(rsm, a);
    let per_node = |bound: usize| -> Vec<S::Elem> {
        let d = bounded_distances(rsm, &case.seeds(), bound, OracleOptions::default()).unwrap();
        let mut v = vec![s.zero(); rsm.node_count()];
        for (c, w) in &d.distances {
            v[c.node.idx()] = s.combine(&v[c.node.idx()], w);
        }
        v
    };
    let mut bound = k + 2;
    let mut prev = per_node(bound);
    loop {
        bound += 2;
        assert!(bound <= 24, "seed {}: node distances did not stabilize", case.seed);
        let next = per_node(bound);
        if next == prev {
            break;
        }
        prev = next;
    }
    for u in rsm.node_ids().filter(|&u| rsm.kind(u).is_configuration_node()) {
        assert_eq!(
            nd.get(u),
            &prev[u.idx()],
            "seed {}: node {} got {} want {}",
            case.seed,
            rsm.node(u).name,
            show(s, nd.get(u)),
            show(s, &prev[u.idx()])
        );
    }
}

#[test]
fn boolean_extraction() {
    for seed in 0..200 {
        check(&common::boolean(seed));
    }
}

#[test]
fn tropical_extraction() {
    for seed in 0..200 {
        check(&common::tropical(seed));
    }
}

#[test]
fn genkill_extraction() {
    for seed in 0..200 {
        check(&common::genkill(seed));
    }
}
