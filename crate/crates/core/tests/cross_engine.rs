mod common;

use common::Case;
use wrsm::automaton::accept_weight;
use wrsm::oracle::all_configurations;
use wrsm::semiring::{show, Semiring};
use wrsm::wpds::{p_automaton_for, rsm_to_wpds, wpds_post_star};

fn check<S: Semiring>(case: &Case<S>) {
    let rsm = &case.rsm;
    let s = rsm.semiring();
    let post = case.post_star();
    let (wpds, corr) = rsm_to_wpds(rsm);
    let init = p_automaton_for(rsm, &wpds, &corr, &case.initial).unwrap();
    let base = wpds_post_star(s, &wpds, &init, 1_000_000).unwrap();
    for c in all_configurations(rsm, 3) {
        let pc = corr.encode(&c).unwrap();
        assert_eq!(corr.decode(&pc).as_ref(), Some(&c));
        let a = accept_weight(rsm, &post.automaton, &c).unwrap();
        let b = base.automaton.accept_weight(s, &pc);
        assert_eq!(a, b, "seed {}: {} confdist {} wpds {}", case.seed, rsm.fmt_config(&c), show(s, &a), show(s, &b));
    }
}

#[test]
fn boolean_engines_agree() {
    for seed in 0..200 {
        check(&common::boolean(seed));
    }
}

#[test]
fn tropical_engines_agree() {
    for seed in 0..200 {
        check(&common::tropical(seed));
    }
}

#[test]
fn genkill_engines_agree() {
    for seed in 0..200 {
        check(&common::genkill(seed));
    }
}

#[test]
fn translation_is_linear() {
    for seed in 0..200 {
        let case = common::boolean(seed);
        let (wpds, _) = rsm_to_wpds(&case.rsm);
        let m = case.rsm.metrics();
        let returns: usize = case.rsm.boxes().iter().map(|b| b.returns.len()).sum();
        assert_eq!(wpds.rules().len(), m.transitions + returns);
        assert_eq!(wpds.controls() as usize, 1 + m.theta_x);
    }
}
