//! Weighted configuration automata.
//!
//! States pair an RSM node with a mark. Transitions are either
//! `(u,m) →ε (e,m')` with `e` an entry of `u`'s module, or
//! `(e,m) →b (e',m')` with `e` an entry of `b`'s callee and `e'` an entry of
//! the module owning `b`. Every entry state carries an implicit ε-self-loop of
//! weight one, which is never stored.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::rsm::{BoxId, Configuration, NodeId, NodeKind, Rsm};
use crate::semiring::{show, Semiring};

pub type Mark = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Eps,
    Box(BoxId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutTransition<W> {
    pub src: StateId,
    pub label: Label,
    pub tgt: StateId,
    pub weight: W,
}

#[derive(Debug, Clone)]
pub struct ConfigAutomaton<W> {
    states: Vec<(NodeId, Mark)>,
    state_index: HashMap<(NodeId, Mark), StateId>,
    transitions: Vec<AutTransition<W>>,
    trans_index: HashMap<(StateId, Label, StateId), u32>,
    out_eps: Vec<Vec<u32>>,
    out_box: Vec<Vec<u32>>,
    out_by_box: HashMap<(StateId, BoxId), Vec<u32>>,
    initial: Vec<bool>,
    finals: Vec<bool>,
    fresh: Option<Mark>,
}

impl<W> Default for ConfigAutomaton<W> {
    fn default() -> Self {
        Self {
            states: Vec::new(),
            state_index: HashMap::new(),
            transitions: Vec::new(),
            trans_index: HashMap::new(),
            out_eps: Vec::new(),
            out_box: Vec::new(),
            out_by_box: HashMap::new(),
            initial: Vec::new(),
            finals: Vec::new(),
            fresh: None,
        }
    }
}

impl<W: Clone> ConfigAutomaton<W> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns the state `(node, mark)`.
    pub fn add_state(&mut self, node: NodeId, mark: Mark) -> StateId {
        if let Some(&s) = self.state_index.get(&(node, mark)) {
            return s;
        }
        let s = StateId(self.states.len() as u32);
        self.states.push((node, mark));
        self.state_index.insert((node, mark), s);
        self.out_eps.push(Vec::new());
        self.out_box.push(Vec::new());
        self.initial.push(false);
        self.finals.push(false);
        s
    }

    pub fn state(&self, node: NodeId, mark: Mark) -> Option<StateId> {
        self.state_index.get(&(node, mark)).copied()
    }

    pub fn state_info(&self, s: StateId) -> (NodeId, Mark) {
        self.states[s.idx()]
    }

    #[inline]
    pub fn node_of(&self, s: StateId) -> NodeId {
        self.states[s.idx()].0
    }

    #[inline]
    pub fn mark_of(&self, s: StateId) -> Mark {
        self.states[s.idx()].1
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn set_initial(&mut self, s: StateId, yes: bool) {
        self.initial[s.idx()] = yes;
    }

    pub fn set_final(&mut self, s: StateId, yes: bool) {
        self.finals[s.idx()] = yes;
    }

    /// Explicitly initial, or carrying the fresh mark.
    #[inline]
    pub fn is_initial(&self, s: StateId) -> bool {
        self.initial[s.idx()] || self.fresh == Some(self.mark_of(s))
    }

    pub fn is_explicitly_initial(&self, s: StateId) -> bool {
        self.initial[s.idx()]
    }

    #[inline]
    pub fn is_final(&self, s: StateId) -> bool {
        self.finals[s.idx()]
    }

    pub fn initial_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.state_ids().filter(|s| self.is_initial(*s))
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.state_ids().filter(|s| self.is_final(*s))
    }

    /// The fresh mark of a post* output; all of its states are initial.
    pub fn fresh_mark(&self) -> Option<Mark> {
        self.fresh
    }

    pub fn set_fresh_mark(&mut self, m: Option<Mark>) {
        self.fresh = m;
    }

    pub fn is_fresh(&self, s: StateId) -> bool {
        self.fresh == Some(self.mark_of(s))
    }

    /// Distinct marks used by states other than fresh ones.
    pub fn old_mark_count(&self) -> usize {
        let mut marks: Vec<Mark> = self
            .states
            .iter()
            .map(|&(_, m)| m)
            .filter(|m| Some(*m) != self.fresh)
            .collect();
        marks.sort_unstable();
        marks.dedup();
        marks.len()
    }

    /// One more than the largest mark in use, the fresh mark included.
    pub fn mark_bound(&self) -> Mark {
        let top = self.states.iter().map(|&(_, m)| m + 1).max().unwrap_or(0);
        top.max(self.fresh.map_or(0, |m| m + 1))
    }

    pub fn transitions(&self) -> &[AutTransition<W>] {
        &self.transitions
    }

    pub fn transition(&self, id: u32) -> &AutTransition<W> {
        &self.transitions[id as usize]
    }

    pub fn find(&self, src: StateId, label: Label, tgt: StateId) -> Option<u32> {
        self.trans_index.get(&(src, label, tgt)).copied()
    }

    /// Stored weight of a transition, if present.
    pub fn weight_of(&self, src: StateId, label: Label, tgt: StateId) -> Option<&W> {
        self.find(src, label, tgt).map(|t| &self.transitions[t as usize].weight)
    }

    /// Inserts a transition, or overwrites the weight of an existing one.
    pub fn set_transition(&mut self, src: StateId, label: Label, tgt: StateId, weight: W) -> u32 {
        if let Some(id) = self.find(src, label, tgt) {
            self.transitions[id as usize].weight = weight;
            return id;
        }
        let id = self.transitions.len() as u32;
        self.transitions.push(AutTransition { src, label, tgt, weight });
        self.trans_index.insert((src, label, tgt), id);
        match label {
            Label::Eps => self.out_eps[src.idx()].push(id),
            Label::Box(b) => {
                self.out_box[src.idx()].push(id);
                self.out_by_box.entry((src, b)).or_default().push(id);
            }
        }
        id
    }

    pub fn set_weight(&mut self, id: u32, weight: W) {
        self.transitions[id as usize].weight = weight;
    }

    /// Stored ε-transitions leaving `s` (the implicit self-loop excluded).
    #[inline]
    pub fn eps_out(&self, s: StateId) -> &[u32] {
        &self.out_eps[s.idx()]
    }

    /// Box-labeled transitions leaving `s`.
    #[inline]
    pub fn box_out(&self, s: StateId) -> &[u32] {
        &self.out_box[s.idx()]
    }

    /// Transitions leaving `s` labeled `b`.
    #[inline]
    pub fn box_out_labeled(&self, s: StateId, b: BoxId) -> &[u32] {
        self.out_by_box.get(&(s, b)).map_or(&[], Vec::as_slice)
    }
}

/// Weight assigned to `c`: the combine over all accepting runs
/// `(c.node, m) → … → f` spelling the stack, where a run's weight extends its
/// transition weights in reverse order.
pub fn accept_weight<S: Semiring>(
    rsm: &Rsm<S>,
    aut: &ConfigAutomaton<S::Elem>,
    c: &Configuration,
) -> Result<S::Elem> {
    rsm.check_configuration(c)?;
    let s = rsm.semiring();
    let n = aut.state_count();
    let mut d: Vec<S::Elem> = alloc::vec![s.zero(); n];
    let mut queue: VecDeque<StateId> = VecDeque::new();
    let mut queued = alloc::vec![false; n];
    for q in aut.state_ids() {
        if aut.node_of(q) == c.node && aut.is_initial(q) {
            d[q.idx()] = s.one();
            queue.push_back(q);
            queued[q.idx()] = true;
        }
    }
    let mut pos = 0;
    loop {
        // ε-closure at this stack position.
        while let Some(q) = queue.pop_front() {
            queued[q.idx()] = false;
            for &t in aut.eps_out(q) {
                let tr = aut.transition(t);
                if s.is_zero(&tr.weight) {
                    continue;
                }
                let v = s.extend(&tr.weight, &d[q.idx()]);
                let cur = &d[tr.tgt.idx()];
                let next = s.combine(cur, &v);
                if next != *cur {
                    d[tr.tgt.idx()] = next;
                    if !queued[tr.tgt.idx()] {
                        queued[tr.tgt.idx()] = true;
                        queue.push_back(tr.tgt);
                    }
                }
            }
        }
        if pos == c.stack.len() {
            break;
        }
        let b = c.stack[pos];
        let mut next: Vec<S::Elem> = alloc::vec![s.zero(); n];
        for q in aut.state_ids() {
            if s.is_zero(&d[q.idx()]) {
                continue;
            }
            for &t in aut.box_out_labeled(q, b) {
                let tr = aut.transition(t);
                let v = s.extend(&tr.weight, &d[q.idx()]);
                next[tr.tgt.idx()] = s.combine(&next[tr.tgt.idx()], &v);
            }
        }
        d = next;
        for q in aut.state_ids() {
            if !s.is_zero(&d[q.idx()]) {
                queued[q.idx()] = true;
                queue.push_back(q);
            }
        }
        pos += 1;
    }
    Ok(aut
        .final_states()
        .fold(s.zero(), |acc, f| s.combine(&acc, &d[f.idx()])))
}

/// Whether `c` has an accepting run of non-zero weight.
pub fn accepts<S: Semiring>(rsm: &Rsm<S>, aut: &ConfigAutomaton<S::Elem>, c: &Configuration) -> Result<bool> {
    Ok(!rsm.semiring().is_zero(&accept_weight(rsm, aut, c)?))
}

fn anchor_entry<S: Semiring>(rsm: &Rsm<S>, module: usize) -> Result<NodeId> {
    rsm.module(module).entries.first().copied().ok_or_else(|| {
        Error::Precondition(format!(
            "module `{}` has no entry, so its configurations cannot be represented",
            rsm.module(module).name
        ))
    })
}

/// Adds a chain accepting exactly `c` using marks `base..=base+|stack|`.
fn add_chain<S: Semiring>(
    rsm: &Rsm<S>,
    aut: &mut ConfigAutomaton<S::Elem>,
    c: &Configuration,
    base: Mark,
) -> Result<()> {
    rsm.check_configuration(c)?;
    let one = rsm.semiring().one();
    let head = aut.add_state(c.node, base);
    aut.set_initial(head, true);
    let mut at = if rsm.kind(c.node) == NodeKind::Entry {
        head
    } else {
        let e = anchor_entry(rsm, rsm.module_of(c.node))?;
        let q = aut.add_state(e, base);
        aut.set_transition(head, Label::Eps, q, one.clone());
        q
    };
    for (i, &b) in c.stack.iter().enumerate() {
        let e = anchor_entry(rsm, rsm.box_info(b).owner)?;
        let q = aut.add_state(e, base + 1 + i as Mark);
        aut.set_transition(at, Label::Box(b), q, one.clone());
        at = q;
    }
    aut.set_final(at, true);
    Ok(())
}

/// An automaton accepting exactly `{c}` with weight one.
pub fn singleton_automaton<S: Semiring>(rsm: &Rsm<S>, c: &Configuration) -> Result<ConfigAutomaton<S::Elem>> {
    let mut aut = ConfigAutomaton::new();
    add_chain(rsm, &mut aut, c, 0)?;
    Ok(aut)
}

/// An automaton accepting exactly the given configurations, each through its
/// own block of marks.
pub fn configurations_automaton<S: Semiring>(
    rsm: &Rsm<S>,
    configs: &[Configuration],
) -> Result<ConfigAutomaton<S::Elem>> {
    let mut aut = ConfigAutomaton::new();
    let mut base = 0;
    for c in configs {
        add_chain(rsm, &mut aut, c, base)?;
        base += c.stack.len() as Mark + 1;
    }
    Ok(aut)
}

/// An automaton accepting `⟨e, ε⟩` for every entry `e` of `module`.
pub fn entries_automaton<S: Semiring>(rsm: &Rsm<S>, module: usize) -> Result<ConfigAutomaton<S::Elem>> {
    if module >= rsm.modules().len() {
        return Err(Error::Unknown {
            kind: "module",
            name: format!("#{module}"),
        });
    }
    let mut aut = ConfigAutomaton::new();
    for &e in &rsm.module(module).entries {
        let q = aut.add_state(e, 0);
        aut.set_initial(q, true);
        aut.set_final(q, true);
    }
    Ok(aut)
}

/// An automaton accepting `⟨e, ε⟩` for every entry of every module.
pub fn all_entries_automaton<S: Semiring>(rsm: &Rsm<S>) -> ConfigAutomaton<S::Elem> {
    let mut aut = ConfigAutomaton::new();
    for m in rsm.modules() {
        for &e in &m.entries {
            let q = aut.add_state(e, 0);
            aut.set_initial(q, true);
            aut.set_final(q, true);
        }
    }
    aut
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShapeReport {
    pub violations: Vec<String>,
}

impl ShapeReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks transition forms, final states, the ε-first run discipline and,
/// for automata with a fresh mark, the mark rules: no transition leads from
/// an old mark to the fresh mark and final states carry old marks.
pub fn validate_shape<S: Semiring>(rsm: &Rsm<S>, aut: &ConfigAutomaton<S::Elem>) -> ShapeReport {
    let mut v = Vec::new();
    let name = |s: StateId| {
        let (n, m) = aut.state_info(s);
        match rsm.nodes().get(n.idx()) {
            Some(info) => format!("({},{m})", info.name),
            None => format!("(#{},{m})", n.0),
        }
    };
    for s in aut.state_ids() {
        let n = aut.node_of(s);
        match rsm.nodes().get(n.idx()) {
            Some(info) if info.kind.is_configuration_node() => {}
            Some(_) => v.push(format!("state {} holds a call or exit node", name(s))),
            None => v.push(format!("state {} holds an unknown node", name(s))),
        }
        if aut.is_final(s) && !matches!(rsm.nodes().get(n.idx()), Some(i) if i.kind == NodeKind::Entry) {
            v.push(format!("final state {} is not an entry state", name(s)));
        }
        if aut.is_final(s) && aut.is_fresh(s) {
            v.push(format!("final state {} carries the fresh mark", name(s)));
        }
    }
    if !v.is_empty() {
        return ShapeReport { violations: v };
    }
    let entry = |s: StateId| rsm.kind(aut.node_of(s)) == NodeKind::Entry;
    for t in aut.transitions() {
        let (u, _) = aut.state_info(t.src);
        let (e, _) = aut.state_info(t.tgt);
        match t.label {
            Label::Eps => {
                if !entry(t.tgt) {
                    v.push(format!("ε-transition {} → {} does not end at an entry", name(t.src), name(t.tgt)));
                } else if rsm.module_of(u) != rsm.module_of(e) {
                    v.push(format!("ε-transition {} → {} crosses modules", name(t.src), name(t.tgt)));
                } else if entry(t.src) && u != e {
                    v.push(format!("ε-transition {} → {} starts at another entry", name(t.src), name(t.tgt)));
                }
                if !aut.is_initial(t.src) {
                    v.push(format!("ε-transition {} → {} leaves a non-initial state", name(t.src), name(t.tgt)));
                }
                if aut.eps_out(t.tgt).iter().any(|&o| aut.transition(o).tgt != t.tgt) {
                    v.push(format!("ε-transitions chained at {}", name(t.tgt)));
                }
            }
            Label::Box(b) => {
                let Some(info) = rsm.boxes().get(b.idx()) else {
                    v.push(format!("transition labeled with unknown box #{}", b.0));
                    continue;
                };
                if !entry(t.src) || rsm.module_of(u) != info.callee {
                    v.push(format!(
                        "{}-transition source {} is not an entry of the callee",
                        info.name,
                        name(t.src)
                    ));
                }
                if !entry(t.tgt) || rsm.module_of(e) != info.owner {
                    v.push(format!(
                        "{}-transition target {} is not an entry of the caller",
                        info.name,
                        name(t.tgt)
                    ));
                }
            }
        }
        if aut.fresh.is_some() && !aut.is_fresh(t.src) && aut.is_fresh(t.tgt) {
            v.push(format!("transition {} → {} switches from an old mark to the fresh mark", name(t.src), name(t.tgt)));
        }
    }
    ShapeReport { violations: v }
}

/// Deterministic Graphviz rendering. States are `(node,mark)` with the fresh
/// mark written `^`; final states are double circles and initial states are
/// drawn bold. Transitions are labeled `label/weight`.
pub fn dot_export<S: Semiring>(rsm: &Rsm<S>, aut: &ConfigAutomaton<S::Elem>) -> String {
    let s = rsm.semiring();
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    let mark = |m: Mark| {
        if aut.fresh == Some(m) {
            String::from("^")
        } else {
            format!("{m}")
        }
    };
    for q in aut.state_ids() {
        let (n, m) = aut.state_info(q);
        let shape = if aut.is_final(q) { "doublecircle" } else { "circle" };
        let style = if aut.is_initial(q) { ", style=bold" } else { "" };
        let _ = writeln!(
            out,
            "  s{} [label=\"({},{})\", shape={shape}{style}];",
            q.0,
            escape(&rsm.node(n).name),
            mark(m)
        );
    }
    let mut order: Vec<&AutTransition<S::Elem>> = aut.transitions().iter().collect();
    order.sort_by_key(|t| (t.src, t.tgt, t.label));
    for t in order {
        let label = match t.label {
            Label::Eps => String::from("ε"),
            Label::Box(b) => escape(&rsm.box_info(b).name),
        };
        let _ = writeln!(
            out,
            "  s{} -> s{} [label=\"{label}/{}\"];",
            t.src.0,
            t.tgt.0,
            escape(&show(s, &t.weight))
        );
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::two_module_mutual_recursion;
    use crate::semiring::{Boolean, Cost, Tropical};

    fn rsm() -> Rsm<Boolean> {
        Rsm::new(Boolean, &two_module_mutual_recursion([true; 8])).unwrap()
    }

    /// `⟨e1_1, ε⟩` and `⟨e2, b1⟩` sharing the final state `(e1_1, 0)`.
    fn two_entry_input(r: &Rsm<Boolean>) -> ConfigAutomaton<bool> {
        let mut a = ConfigAutomaton::new();
        let e11 = a.add_state(r.node_id("e1_1").unwrap(), 0);
        let e2 = a.add_state(r.node_id("e2").unwrap(), 0);
        a.set_initial(e11, true);
        a.set_initial(e2, true);
        a.set_final(e11, true);
        a.set_transition(e2, Label::Box(r.box_id("b1").unwrap()), e11, true);
        a
    }

    #[test]
    fn two_entry_input_acceptance() {
        let r = rsm();
        let a = two_entry_input(&r);
        assert!(validate_shape(&r, &a).is_empty());
        assert!(accepts(&r, &a, &r.config("e1_1", &[]).unwrap()).unwrap());
        assert!(accepts(&r, &a, &r.config("e2", &["b1"]).unwrap()).unwrap());
        assert!(!accepts(&r, &a, &r.config("e2", &[]).unwrap()).unwrap());
        assert!(!accepts(&r, &a, &r.config("u1", &["b2", "b1"]).unwrap()).unwrap());
    }

    #[test]
    fn empty_automaton_accepts_nothing() {
        let r = rsm();
        let a = ConfigAutomaton::new();
        assert!(!accept_weight(&r, &a, &r.config("e1_1", &[]).unwrap()).unwrap());
        assert!(validate_shape(&r, &a).is_empty());
    }

    #[test]
    fn singleton_accepts_exactly_its_configuration() {
        let r = rsm();
        let c = r.config("u1", &["b2", "b1"]).unwrap();
        let a = singleton_automaton(&r, &c).unwrap();
        assert!(validate_shape(&r, &a).is_empty());
        assert_eq!(a.old_mark_count(), 3);
        assert!(accept_weight(&r, &a, &c).unwrap());
        for other in [
            r.config("u1", &[]).unwrap(),
            r.config("u1", &["b2", "b1", "b2", "b1"]).unwrap(),
            r.config("e1_2", &["b2", "b1"]).unwrap(),
            r.config("e1_1", &["b2", "b1"]).unwrap(),
        ] {
            assert!(!accept_weight(&r, &a, &other).unwrap(), "{}", r.fmt_config(&other));
        }
        let e = singleton_automaton(&r, &r.config("e1_1", &[]).unwrap()).unwrap();
        assert_eq!(e.state_count(), 1);
        assert!(e.transitions().is_empty());
        let q = StateId(0);
        assert!(e.is_initial(q) && e.is_final(q));
    }

    #[test]
    fn singleton_rejects_ill_formed() {
        let r = rsm();
        let bad = Configuration::new(r.node_id("u1").unwrap(), alloc::vec![r.box_id("b1").unwrap()]);
        assert!(singleton_automaton(&r, &bad).is_err());
    }

    #[test]
    fn entries_automata() {
        let r = rsm();
        let a = entries_automaton(&r, 0).unwrap();
        assert!(accepts(&r, &a, &r.config("e1_1", &[]).unwrap()).unwrap());
        assert!(accepts(&r, &a, &r.config("e1_2", &[]).unwrap()).unwrap());
        assert!(!accepts(&r, &a, &r.config("e2", &[]).unwrap()).unwrap());
        let b = entries_automaton(&r, 1).unwrap();
        assert!(accepts(&r, &b, &r.config("e2", &[]).unwrap()).unwrap());
        assert!(!accepts(&r, &b, &r.config("e1_1", &[]).unwrap()).unwrap());
        assert!(entries_automaton(&r, 2).is_err());
    }

    #[test]
    fn shape_violations() {
        let r = rsm();
        let mut a = two_entry_input(&r);
        let u1 = a.add_state(r.node_id("u1").unwrap(), 0);
        let e11 = a.state(r.node_id("e1_1").unwrap(), 0).unwrap();
        a.set_transition(u1, Label::Box(r.box_id("b2").unwrap()), e11, true);
        let report = validate_shape(&r, &a);
        assert!(report.violations.iter().any(|v| v.contains("not an entry of the callee")), "{report:?}");

        let mut b = two_entry_input(&r);
        b.set_fresh_mark(Some(1));
        let e11 = b.state(r.node_id("e1_1").unwrap(), 0).unwrap();
        let fresh_u1 = b.add_state(r.node_id("u1").unwrap(), 1);
        b.set_transition(fresh_u1, Label::Eps, e11, true);
        assert!(validate_shape(&r, &b).is_empty());
        let fresh_e2 = b.add_state(r.node_id("e2").unwrap(), 1);
        b.set_transition(e11, Label::Box(r.box_id("b2").unwrap()), fresh_e2, true);
        let report = validate_shape(&r, &b);
        assert!(report.violations.iter().any(|v| v.contains("old mark to the fresh mark")), "{report:?}");
    }

    #[test]
    fn tropical_acceptance_combines_runs() {
        let t = Tropical::new();
        let r = Rsm::new(t, &two_module_mutual_recursion([Cost::Finite(1); 8])).unwrap();
        let mut a = ConfigAutomaton::new();
        let u1 = a.add_state(r.node_id("u1").unwrap(), 0);
        let e11 = a.add_state(r.node_id("e1_1").unwrap(), 0);
        let e12 = a.add_state(r.node_id("e1_2").unwrap(), 1);
        a.set_initial(u1, true);
        a.set_final(e11, true);
        a.set_final(e12, true);
        a.set_transition(u1, Label::Eps, e11, Cost::Finite(4));
        a.set_transition(u1, Label::Eps, e12, Cost::Finite(2));
        assert_eq!(accept_weight(&r, &a, &r.config("u1", &[]).unwrap()).unwrap(), Cost::Finite(2));
    }

    #[test]
    fn dot_is_deterministic() {
        let r = rsm();
        let empty = ConfigAutomaton::<bool>::new();
        assert_eq!(dot_export(&r, &empty), "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n}\n");
        let a = singleton_automaton(&r, &r.config("e1_1", &[]).unwrap()).unwrap();
        let dot = dot_export(&r, &a);
        assert!(dot.contains("s0 [label=\"(e1_1,0)\", shape=doublecircle, style=bold];"));
        let b = two_entry_input(&r);
        assert_eq!(dot_export(&r, &b), dot_export(&r, &b.clone()));
        assert!(dot_export(&r, &b).contains("s1 -> s0 [label=\"b1/true\"];"));
    }
}
