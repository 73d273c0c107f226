//! Brute-force reference semantics over explicit configurations.
//!
//! Distances are computed as a least fixpoint over every configuration whose
//! stack stays within a bound. [`stabilized_distances`] raises the bound until
//! two successive answers agree on the queried configurations. Agreement is a
//! heuristic, so a ceiling turns a non-stabilizing run into an explicit
//! [`Error::Inconclusive`] instead of a silent answer.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::rsm::{Configuration, Rsm};
use crate::semiring::Semiring;

#[derive(Debug, Clone)]
pub struct OracleResult<W> {
    pub distances: HashMap<Configuration, W>,
    pub stack_bound: usize,
    /// Set by [`stabilized_distances`] once two bounds agreed.
    pub stable: bool,
}

impl<W: Clone> OracleResult<W> {
    pub fn get<S: Semiring<Elem = W>>(&self, s: &S, c: &Configuration) -> W {
        self.distances.get(c).cloned().unwrap_or_else(|| s.zero())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Strict improvements allowed per configuration.
    pub relax_cap: u64,
    /// Largest stack bound [`stabilized_distances`] may try.
    pub ceiling: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            relax_cap: 1_000_000,
            ceiling: 40,
        }
    }
}

/// Least fixpoint of `d(c') ⊒ d(c) ⊗ w(c, c')` over configurations with at
/// most `stack_bound` boxes, seeded with `initial`.
pub fn bounded_distances<S: Semiring>(
    rsm: &Rsm<S>,
    initial: &[(Configuration, S::Elem)],
    stack_bound: usize,
    opts: OracleOptions,
) -> Result<OracleResult<S::Elem>> {
    let s = rsm.semiring();
    let mut d: HashMap<Configuration, S::Elem> = HashMap::new();
    let mut counts: HashMap<Configuration, u64> = HashMap::new();
    let mut queue: VecDeque<Configuration> = VecDeque::new();
    for (c, w) in initial {
        rsm.check_configuration(c)?;
        if c.stack.len() > stack_bound || s.is_zero(w) {
            continue;
        }
        let cur = d.get(c).cloned().unwrap_or_else(|| s.zero());
        d.insert(c.clone(), s.combine(&cur, w));
        queue.push_back(c.clone());
    }
    let mut queued: hashbrown::HashSet<Configuration> = queue.iter().cloned().collect();
    while let Some(c) = queue.pop_front() {
        queued.remove(&c);
        let dc = d[&c].clone();
        for (next, w) in rsm.step(&c)? {
            if next.stack.len() > stack_bound {
                continue;
            }
            let v = s.extend(&dc, &w);
            if s.is_zero(&v) {
                continue;
            }
            let cur = d.get(&next).cloned().unwrap_or_else(|| s.zero());
            let new = s.combine(&cur, &v);
            if new == cur {
                continue;
            }
            let count = counts.entry(next.clone()).or_insert(0);
            *count += 1;
            if *count > opts.relax_cap {
                return Err(Error::NonTermination {
                    what: format!("oracle distance of {}", rsm.fmt_config(&next)),
                    count: *count,
                });
            }
            d.insert(next.clone(), new);
            if queued.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(OracleResult {
        distances: d,
        stack_bound,
        stable: false,
    })
}

/// Raises the stack bound, starting at the tallest query plus the module
/// count plus one and stepping by two, until two successive bounds agree on
/// every query.
pub fn stabilized_distances<S: Semiring>(
    rsm: &Rsm<S>,
    initial: &[(Configuration, S::Elem)],
    queries: &[Configuration],
    opts: OracleOptions,
) -> Result<OracleResult<S::Elem>> {
    let s = rsm.semiring();
    let tallest = queries.iter().map(|c| c.stack.len()).max().unwrap_or(0);
    let mut bound = tallest + rsm.modules().len() + 1;
    if bound > opts.ceiling {
        return Err(Error::Inconclusive { ceiling: opts.ceiling });
    }
    let mut prev = bounded_distances(rsm, initial, bound, opts)?;
    loop {
        bound += 2;
        if bound > opts.ceiling {
            return Err(Error::Inconclusive { ceiling: opts.ceiling });
        }
        let next = bounded_distances(rsm, initial, bound, opts)?;
        if queries.iter().all(|q| prev.get(s, q) == next.get(s, q)) {
            return Ok(OracleResult { stable: true, ..next });
        }
        prev = next;
    }
}

/// Every well-formed configuration with at most `max_height` boxes.
pub fn all_configurations<S: Semiring>(rsm: &Rsm<S>, max_height: usize) -> Vec<Configuration> {
    let mut out = Vec::new();
    for u in rsm.node_ids() {
        if !rsm.kind(u).is_configuration_node() {
            continue;
        }
        let mut frontier: Vec<(usize, Vec<crate::rsm::BoxId>)> = alloc::vec![(rsm.module_of(u), Vec::new())];
        for height in 0..=max_height {
            let mut next = Vec::new();
            for (module, stack) in frontier {
                out.push(Configuration::new(u, stack.clone()));
                if height == max_height {
                    continue;
                }
                for &b in rsm.callers(module) {
                    let mut st = stack.clone();
                    st.push(b);
                    next.push((rsm.box_info(b).owner, st));
                }
            }
            frontier = next;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::two_module_mutual_recursion;
    use crate::semiring::{Boolean, Cost, Tropical};

    fn seed<S: Semiring>(r: &Rsm<S>, n: &str) -> Vec<(Configuration, S::Elem)> {
        alloc::vec![(r.config(n, &[]).unwrap(), r.semiring().one())]
    }

    #[test]
    fn zero_steps() {
        let r = Rsm::new(Boolean, &two_module_mutual_recursion([true; 8])).unwrap();
        let d = bounded_distances(&r, &seed(&r, "e1_1"), 0, OracleOptions::default()).unwrap();
        assert!(d.get(&Boolean, &r.config("e1_1", &[]).unwrap()));
        assert_eq!(d.distances.len(), 1);
    }

    #[test]
    fn computation_within_bound() {
        let r = Rsm::new(Boolean, &two_module_mutual_recursion([true; 8])).unwrap();
        let d = bounded_distances(&r, &seed(&r, "e1_1"), 4, OracleOptions::default()).unwrap();
        for (n, st) in [
            ("e2", &["b1"][..]),
            ("e1_2", &["b2", "b1", "b2", "b1"]),
            ("b2.x1", &["b1", "b2", "b1"]),
            ("u1", &[]),
        ] {
            assert!(d.get(&Boolean, &r.config(n, st).unwrap()));
        }
        assert!(!d.get(&Boolean, &r.config("e1_2", &[]).unwrap()));
    }

    #[test]
    fn tropical_stabilizes() {
        let r = Rsm::new(Tropical::new(), &two_module_mutual_recursion([Cost::Finite(1); 8]))
            .unwrap()
            .normalize_exit_weights();
        let u1 = r.config("u1", &[]).unwrap();
        let d = bounded_distances(&r, &seed(&r, "e1_1"), 6, OracleOptions::default()).unwrap();
        assert_eq!(d.get(r.semiring(), &u1), Cost::Finite(3));
        let st = stabilized_distances(&r, &seed(&r, "e1_1"), core::slice::from_ref(&u1), OracleOptions::default()).unwrap();
        assert!(st.stable);
        assert_eq!(st.get(r.semiring(), &u1), Cost::Finite(3));
        let unreachable = r.config("e1_2", &[]).unwrap();
        let st = stabilized_distances(&r, &seed(&r, "e1_1"), core::slice::from_ref(&unreachable), OracleOptions::default())
            .unwrap();
        assert_eq!(st.get(r.semiring(), &unreachable), Cost::Infinite);
    }

    #[test]
    fn ceiling_is_reported() {
        let r = Rsm::new(Boolean, &two_module_mutual_recursion([true; 8])).unwrap();
        let q = r.config("u1", &[]).unwrap();
        let opts = OracleOptions { ceiling: 3, ..OracleOptions::default() };
        assert!(matches!(
            stabilized_distances(&r, &seed(&r, "e1_1"), &[q], opts),
            Err(Error::Inconclusive { ceiling: 3 })
        ));
    }

    #[test]
    fn enumerates_configurations() {
        let r = Rsm::new(Boolean, &two_module_mutual_recursion([true; 8])).unwrap();
        // 6 configuration nodes, one valid stack per height.
        assert_eq!(all_configurations(&r, 0).len(), 6);
        assert_eq!(all_configurations(&r, 3).len(), 24);
    }
}
