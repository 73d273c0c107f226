//! Timing harness for the dense family: summary-based post* against the
//! pushdown baseline.

use std::time::Instant;

use wrsm::automaton::{accept_weight, singleton_automaton};
use wrsm::confdist::{post_star_with, PostStarOptions};
use wrsm::generators::dense_family;
use wrsm::wpds::{p_automaton_for, rsm_to_wpds, wpds_post_star};
use wrsm::Boolean;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub confdist_seconds: f64,
    pub wpds_seconds: f64,
    pub speedup: f64,
    pub confdist_ops: u64,
    pub wpds_ops: u64,
}

pub const CSV_HEADER: &str = "n,confdist_seconds,wpds_seconds,speedup,confdist_ops,wpds_ops";

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.6},{:.6},{:.3},{},{}",
            self.n, self.confdist_seconds, self.wpds_seconds, self.speedup, self.confdist_ops, self.wpds_ops
        )
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

/// Runs both engines `reps` times on the dense RSM of size `n` from `⟨e1, ε⟩`
/// with Boolean weights and reports median times. Translation to the
/// pushdown system is not timed. Panics if the engines disagree on any
/// configuration of stack height at most one.
pub fn dense_row(n: usize, reps: usize) -> wrsm::Result<BenchRow> {
    let reps = reps.max(1);
    let rsm = dense_family(Boolean, n);
    let start = rsm.config("e1", &[])?;
    let init = singleton_automaton(&rsm, &start)?;
    let (pds, corr) = rsm_to_wpds(&rsm);
    let pinit = p_automaton_for(&rsm, &pds, &corr, &[start])?;
    let cap = PostStarOptions::default().relax_cap;

    let mut cd_times = Vec::with_capacity(reps);
    let mut wp_times = Vec::with_capacity(reps);
    let mut cd_last = None;
    let mut wp_last = None;
    for _ in 0..reps {
        let t = Instant::now();
        let out = post_star_with(&rsm, &init, PostStarOptions::default())?;
        cd_times.push(t.elapsed().as_secs_f64());
        cd_last = Some(out);

        let t = Instant::now();
        let out = wpds_post_star(&Boolean, &pds, &pinit, cap)?;
        wp_times.push(t.elapsed().as_secs_f64());
        wp_last = Some(out);
    }
    let cd = cd_last.expect("at least one repetition");
    let wp = wp_last.expect("at least one repetition");

    let b = rsm.box_id("b")?;
    for u in rsm.node_ids().filter(|&u| rsm.kind(u).is_configuration_node()) {
        for stack in [vec![], vec![b]] {
            let c = wrsm::Configuration::new(u, stack);
            let x = accept_weight(&rsm, &cd.automaton, &c)?;
            let y = wp.automaton.accept_weight(rsm.semiring(), &corr.encode(&c)?);
            assert!(x == y, "engines disagree on {}", rsm.fmt_config(&c));
        }
    }

    let confdist_seconds = median(cd_times);
    let wpds_seconds = median(wp_times);
    Ok(BenchRow {
        n,
        confdist_seconds,
        wpds_seconds,
        speedup: wpds_seconds / confdist_seconds.max(f64::MIN_POSITIVE),
        confdist_ops: cd.stats.semiring_ops(),
        wpds_ops: wp.stats.semiring_ops(),
    })
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        let r = dense_row(4, 1).unwrap();
        assert_eq!(r.n, 4);
        assert!(r.speedup > 0.0);
        assert!(r.confdist_ops > 0 && r.wpds_ops > 0);
        let csv = to_csv(&[r]);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    }
}
