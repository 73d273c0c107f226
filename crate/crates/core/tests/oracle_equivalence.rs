mod common;

use common::Case;
use wrsm::automaton::accept_weight;
use wrsm::oracle::{all_configurations, stabilized_distances, OracleOptions};
use wrsm::semiring::{show, Semiring};

fn check<S: Semiring>(case: &Case<S>) {
    let rsm = &case.rsm;
    let s = rsm.semiring();
    let queries = all_configurations(rsm, 3);
    let oracle = stabilized_distances(rsm, &case.seeds(), &queries, OracleOptions::default()).unwrap();
    let post = case.post_star();
    for q in &queries {
        let got = accept_weight(rsm, &post.automaton, q).unwrap();
        let want = oracle.get(s, q);
        assert_eq!(
            got,
            want,
            "seed {}: {} got {} want {}",
            case.seed,
            rsm.fmt_config(q),
            show(s, &got),
            show(s, &want)
        );
    }
}

#[test]
fn boolean_matches_oracle() {
    for seed in 0..200 {
        check(&common::boolean(seed));
    }
}

#[test]
fn tropical_matches_oracle() {
    for seed in 0..200 {
        check(&common::tropical(seed));
    }
}

#[test]
fn genkill_matches_oracle() {
    for seed in 0..200 {
        check(&common::genkill(seed));
    }
}
