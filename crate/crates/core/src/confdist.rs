//! Summary-based post* saturation of configuration automata.
//!
//! [`post_star`] runs a forward worklist search over the RSM, recording every
//! reached configuration set in a configuration automaton that gains one
//! fresh mark. Entry-to-exit summaries let a module be traversed once per
//! entry, no matter how many call sites reach it.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::automaton::{validate_shape, ConfigAutomaton, Label, Mark, StateId};
use crate::error::{Error, Result};
use crate::rsm::{NodeId, NodeKind, Rsm};
use crate::semiring::Semiring;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostStarOptions {
    /// Successful relaxations allowed on one transition before giving up.
    pub relax_cap: u64,
}

impl Default for PostStarOptions {
    fn default() -> Self {
        Self { relax_cap: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PostStarStats {
    /// Worklist items processed.
    pub items: u64,
    /// Successful relaxations, materializations included.
    pub relaxations: u64,
    pub max_relaxations_per_transition: u64,
    pub summary_updates: u64,
    pub combine_ops: u64,
    pub extend_ops: u64,
}

impl PostStarStats {
    pub fn semiring_ops(&self) -> u64 {
        self.combine_ops + self.extend_ops
    }
}

/// Entry-to-exit summaries `sum((e, m), x)`; absent keys are `0̄`.
#[derive(Debug, Clone)]
pub struct SummaryTable<W> {
    map: HashMap<(StateId, NodeId), W>,
}

impl<W: Clone> SummaryTable<W> {
    pub fn get(&self, entry_state: StateId, exit: NodeId) -> Option<&W> {
        self.map.get(&(entry_state, exit))
    }

    /// Entries in a deterministic order.
    pub fn entries(&self) -> Vec<(StateId, NodeId, W)> {
        let mut v: Vec<_> = self.map.iter().map(|(&(s, x), w)| (s, x, w.clone())).collect();
        v.sort_by_key(|&(s, x, _)| (s, x));
        v
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PostStar<W> {
    pub automaton: ConfigAutomaton<W>,
    pub summaries: SummaryTable<W>,
    pub stats: PostStarStats,
    /// Successful relaxations per transition id.
    pub relax_counts: Vec<u64>,
    pub fresh: Mark,
}

impl<W: Clone> PostStar<W> {
    /// `sum((entry, mark), exit)`, `0̄` when absent.
    pub fn summary<S: Semiring<Elem = W>>(&self, s: &S, entry: NodeId, mark: Mark, exit: NodeId) -> W {
        self.automaton
            .state(entry, mark)
            .and_then(|q| self.summaries.get(q, exit))
            .cloned()
            .unwrap_or_else(|| s.zero())
    }
}

#[derive(Debug, Clone, Copy)]
enum Item {
    Trans(u32),
    SelfLoop(StateId),
}

struct Engine<'a, S: Semiring> {
    rsm: &'a Rsm<S>,
    s: &'a S,
    aut: ConfigAutomaton<S::Elem>,
    fresh: Mark,
    fresh_of: Vec<Option<StateId>>,
    /// Summaries per state, indexed by exit port.
    sum: Vec<Vec<Option<S::Elem>>>,
    wl: VecDeque<Item>,
    in_wl: Vec<bool>,
    loop_added: Vec<bool>,
    counts: Vec<u64>,
    cap: u64,
    stats: PostStarStats,
}

impl<S: Semiring> Engine<'_, S> {
    #[inline]
    fn fresh_state(&mut self, node: NodeId) -> StateId {
        if let Some(q) = self.fresh_of[node.idx()] {
            return q;
        }
        let q = self.aut.add_state(node, self.fresh);
        self.fresh_of[node.idx()] = Some(q);
        if self.loop_added.len() < self.aut.state_count() {
            self.loop_added.resize(self.aut.state_count(), false);
        }
        q
    }

    fn summary_slot(&mut self, q: StateId, x: NodeId) -> &mut Option<S::Elem> {
        if self.sum.len() <= q.idx() {
            self.sum.resize_with(self.aut.state_count().max(q.idx() + 1), Vec::new);
        }
        let row = &mut self.sum[q.idx()];
        if row.is_empty() {
            let n = self.rsm.module(self.rsm.module_of(x)).exits.len();
            row.resize(n, None);
        }
        &mut row[self.rsm.port(x)]
    }

    fn extend(&mut self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        self.stats.extend_ops += 1;
        self.s.extend(a, b)
    }

    fn relax(&mut self, src: StateId, label: Label, tgt: StateId, v: S::Elem) -> Result<bool> {
        if self.s.is_zero(&v) {
            return Ok(false);
        }
        let id = match self.aut.find(src, label, tgt) {
            Some(id) => {
                let old = &self.aut.transition(id).weight;
                self.stats.combine_ops += 1;
                let new = self.s.combine(old, &v);
                if new == *old {
                    return Ok(false);
                }
                self.aut.set_weight(id, new);
                id
            }
            None => {
                let id = self.aut.set_transition(src, label, tgt, v);
                self.in_wl.push(false);
                self.counts.push(0);
                id
            }
        };
        let count = &mut self.counts[id as usize];
        *count += 1;
        self.stats.relaxations += 1;
        self.stats.max_relaxations_per_transition = self.stats.max_relaxations_per_transition.max(*count);
        if *count > self.cap {
            return Err(self.non_termination(id));
        }
        if !self.in_wl[id as usize] {
            self.in_wl[id as usize] = true;
            self.wl.push_back(Item::Trans(id));
        }
        Ok(true)
    }

    fn non_termination(&self, id: u32) -> Error {
        let t = self.aut.transition(id);
        let (u, m) = self.aut.state_info(t.src);
        let (e, me) = self.aut.state_info(t.tgt);
        let label = match t.label {
            Label::Eps => alloc::string::String::from("ε"),
            Label::Box(b) => self.rsm.box_info(b).name.clone(),
        };
        Error::NonTermination {
            what: format!(
                "({},{m}) -{label}-> ({},{me})",
                self.rsm.node(u).name,
                self.rsm.node(e).name
            ),
            count: self.counts[id as usize],
        }
    }

    fn push_self_loop(&mut self, q: StateId) {
        if !self.loop_added[q.idx()] {
            self.loop_added[q.idx()] = true;
            self.wl.push_back(Item::SelfLoop(q));
        }
    }

    fn process_eps(&mut self, src: StateId, tgt: StateId, w: S::Elem) -> Result<()> {
        let rsm = self.rsm;
        let u = self.aut.node_of(src);
        for t in rsm.outgoing(u) {
            match rsm.kind(t.to) {
                NodeKind::Internal => {
                    let v = self.extend(&w, &t.weight);
                    let q = self.fresh_state(t.to);
                    self.relax(q, Label::Eps, tgt, v)?;
                }
                NodeKind::Call { bx, entry } => {
                    let v = self.extend(&w, &t.weight);
                    let q = self.fresh_state(entry);
                    self.relax(q, Label::Box(bx), tgt, v)?;
                    self.push_self_loop(q);
                }
                NodeKind::Exit => {
                    let s = self.s;
                    let slot = self.summary_slot(tgt, t.to);
                    let new = match slot {
                        Some(cur) if s.leq(cur, &w) => continue,
                        Some(cur) => s.combine(cur, &w),
                        None => w.clone(),
                    };
                    *slot = Some(new.clone());
                    self.stats.combine_ops += 1;
                    self.stats.summary_updates += 1;
                    // Only ε-transitions are added below, so the box list is stable.
                    for i in 0..self.aut.box_out(tgt).len() {
                        let id = self.aut.box_out(tgt)[i];
                        let tr = self.aut.transition(id);
                        let (Label::Box(b), caller, v) = (tr.label, tr.tgt, tr.weight.clone()) else {
                            unreachable!()
                        };
                        let ret = rsm.return_node(b, t.to).expect("exit of the callee");
                        let v = self.extend(&v, &new);
                        let q = self.fresh_state(ret);
                        self.relax(q, Label::Eps, caller, v)?;
                    }
                }
                NodeKind::Entry | NodeKind::Return { .. } => unreachable!("validated RSM"),
            }
        }
        Ok(())
    }

    fn process_box(&mut self, id: u32) -> Result<()> {
        let rsm = self.rsm;
        let tr = self.aut.transition(id);
        let (Label::Box(b), src, tgt, w) = (tr.label, tr.src, tr.tgt, tr.weight.clone()) else {
            unreachable!()
        };
        let e = self.aut.node_of(src);
        let Some(summary_state) = self.fresh_of[e.idx()] else {
            return Ok(());
        };
        let Some(row) = self.sum.get(summary_state.idx()) else {
            return Ok(());
        };
        let row: Vec<(usize, S::Elem)> = row
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.clone().map(|v| (i, v)))
            .collect();
        for (i, sv) in row {
            let v = self.extend(&w, &sv);
            let ret = rsm.box_info(b).returns[i];
            let q = self.fresh_state(ret);
            self.relax(q, Label::Eps, tgt, v)?;
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        while let Some(item) = self.wl.pop_front() {
            self.stats.items += 1;
            match item {
                Item::SelfLoop(q) => self.process_eps(q, q, self.s.one())?,
                Item::Trans(id) => {
                    self.in_wl[id as usize] = false;
                    let tr = self.aut.transition(id);
                    match tr.label {
                        Label::Eps => {
                            let (src, tgt, w) = (tr.src, tr.tgt, tr.weight.clone());
                            self.process_eps(src, tgt, w)?;
                        }
                        Label::Box(_) => self.process_box(id)?,
                    }
                }
            }
        }
        Ok(())
    }
}

fn summary_map<S: Semiring>(
    rsm: &Rsm<S>,
    aut: &ConfigAutomaton<S::Elem>,
    rows: &[Vec<Option<S::Elem>>],
) -> HashMap<(StateId, NodeId), S::Elem> {
    let mut map = HashMap::new();
    for (q, row) in rows.iter().enumerate() {
        let q = StateId(q as u32);
        let exits = &rsm.module(rsm.module_of(aut.node_of(q))).exits;
        for (i, v) in row.iter().enumerate() {
            if let Some(v) = v {
                map.insert((q, exits[i]), v.clone());
            }
        }
    }
    map
}

/// Checks the input contract of [`post_star`].
pub fn check_input<S: Semiring>(rsm: &Rsm<S>, input: &ConfigAutomaton<S::Elem>) -> Result<()> {
    if !rsm.is_normalized() {
        return Err(Error::Precondition(
            "transitions into exit nodes must have weight one (normalize the RSM first)".into(),
        ));
    }
    if input.fresh_mark().is_some() {
        return Err(Error::Precondition("input automaton already has a fresh mark".into()));
    }
    if input.transitions().iter().any(|t| !rsm.semiring().is_one(&t.weight)) {
        return Err(Error::Precondition("every input transition must have weight one".into()));
    }
    let report = validate_shape(rsm, input);
    if !report.is_empty() {
        return Err(Error::Precondition(format!(
            "malformed input automaton: {}",
            report.violations.join("; ")
        )));
    }
    Ok(())
}

/// Saturates `input` so that the result assigns every configuration `c` the
/// distance `dist(L(input), c)`.
pub fn post_star<S: Semiring>(rsm: &Rsm<S>, input: &ConfigAutomaton<S::Elem>) -> Result<PostStar<S::Elem>> {
    post_star_with(rsm, input, PostStarOptions::default())
}

pub fn post_star_with<S: Semiring>(
    rsm: &Rsm<S>,
    input: &ConfigAutomaton<S::Elem>,
    opts: PostStarOptions,
) -> Result<PostStar<S::Elem>> {
    check_input(rsm, input)?;
    let mut aut = input.clone();
    let fresh = aut.mark_bound();
    aut.set_fresh_mark(Some(fresh));
    let n_trans = aut.transitions().len();
    let n_states = aut.state_count();
    let mut engine = Engine {
        rsm,
        s: rsm.semiring(),
        aut,
        fresh,
        fresh_of: alloc::vec![None; rsm.node_count()],
        sum: Vec::new(),
        wl: VecDeque::new(),
        in_wl: alloc::vec![false; n_trans],
        loop_added: alloc::vec![false; n_states],
        counts: alloc::vec![0; n_trans],
        cap: opts.relax_cap,
        stats: PostStarStats::default(),
    };
    for q in (0..n_states as u32).map(StateId) {
        if !engine.aut.is_initial(q) {
            continue;
        }
        for &t in engine.aut.eps_out(q) {
            engine.in_wl[t as usize] = true;
            engine.wl.push_back(Item::Trans(t));
        }
        if rsm.kind(engine.aut.node_of(q)) == NodeKind::Entry {
            engine.push_self_loop(q);
        }
    }
    engine.run()?;
    let map = summary_map(rsm, &engine.aut, &engine.sum);
    Ok(PostStar {
        automaton: engine.aut,
        summaries: SummaryTable { map },
        stats: engine.stats,
        relax_counts: engine.counts,
        fresh,
    })
}
