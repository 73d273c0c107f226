//! Concurrent RSMs over shared global states and context-bounded
//! reachability.
//!
//! A component is a Boolean RSM whose declared node names have the form
//! `local@g`, one copy per global state `g`. A global configuration pairs
//! one configuration per component, all heads carrying the same `g`. A
//! context runs one component; between contexts the paused components keep
//! their stacks and have their heads moved to the current global state.
//!
//! [`k_bounded_reach`] keeps, per explored switching history, one
//! configuration automaton per component and runs post* on the component
//! that owns the next context.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::automaton::{accepts, singleton_automaton, validate_shape, ConfigAutomaton, Mark, StateId};
use crate::confdist::post_star;
use crate::error::{Error, Result};
use crate::rsm::{Configuration, NodeId, NodeKind, Rsm, RsmDef};
use crate::semiring::Boolean;

/// Splits `local@g` into its parts.
pub fn split_node_name(name: &str) -> Option<(&str, &str)> {
    let (l, g) = name.rsplit_once('@')?;
    (!l.is_empty() && !g.is_empty()).then_some((l, g))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDef {
    pub name: String,
    pub rsm: RsmDef<bool>,
    /// Head node name and stack box names, top first.
    pub initial: (String, Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrsmDef {
    pub globals: Vec<String>,
    pub components: Vec<ComponentDef>,
}

#[derive(Debug, Clone)]
pub struct Component {
    pub name: String,
    pub rsm: Rsm<Boolean>,
    pub initial: Configuration,
    global_of: Vec<usize>,
    local_of: Vec<String>,
    at: HashMap<(String, usize), NodeId>,
}

impl Component {
    #[inline]
    pub fn global_of(&self, u: NodeId) -> usize {
        self.global_of[u.idx()]
    }

    pub fn local_of(&self, u: NodeId) -> &str {
        &self.local_of[u.idx()]
    }

    /// The copy of `u` under global state `g`.
    pub fn node_at(&self, u: NodeId, g: usize) -> NodeId {
        self.at[&(self.local_of[u.idx()].clone(), g)]
    }

    /// `c` with its head moved to global state `g`.
    pub fn relocate(&self, c: &Configuration, g: usize) -> Configuration {
        Configuration::new(self.node_at(c.node, g), c.stack.clone())
    }
}

#[derive(Debug, Clone)]
pub struct Crsm {
    globals: Vec<String>,
    components: Vec<Component>,
    initial_global: usize,
}

impl Crsm {
    pub fn new(def: &CrsmDef) -> Result<Self> {
        if def.globals.is_empty() {
            return Err(Error::Precondition("a concurrent RSM needs at least one global state".into()));
        }
        if def.components.is_empty() {
            return Err(Error::Precondition("a concurrent RSM needs at least one component".into()));
        }
        let gidx: HashMap<&str, usize> = def.globals.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        if gidx.len() != def.globals.len() {
            return Err(Error::Precondition("duplicate global state".into()));
        }
        let mut components = Vec::new();
        let mut initial_global = None;
        for cd in &def.components {
            if cd.rsm.modules.iter().flat_map(|m| &m.transitions).any(|t| !t.weight) {
                return Err(Error::Precondition(format!(
                    "component `{}`: transitions of a concurrent RSM must have weight true",
                    cd.name
                )));
            }
            let rsm = Rsm::new(Boolean, &cd.rsm)?;
            let mut global_of = Vec::with_capacity(rsm.node_count());
            let mut local_of = Vec::with_capacity(rsm.node_count());
            let mut at = HashMap::new();
            for u in rsm.node_ids() {
                let name = &rsm.node(u).name;
                let (l, g) = split_node_name(name).ok_or_else(|| {
                    Error::Precondition(format!("component `{}`: node `{name}` is not of the form local@global", cd.name))
                })?;
                let g = *gidx.get(g).ok_or_else(|| Error::Unknown {
                    kind: "global state",
                    name: g.to_string(),
                })?;
                global_of.push(g);
                local_of.push(l.to_string());
                at.insert((l.to_string(), g), u);
            }
            for u in rsm.node_ids() {
                for g in 0..def.globals.len() {
                    if !at.contains_key(&(local_of[u.idx()].clone(), g)) {
                        return Err(Error::Precondition(format!(
                            "component `{}`: node `{}` has no copy for global state `{}`",
                            cd.name,
                            rsm.node(u).name,
                            def.globals[g]
                        )));
                    }
                }
            }
            let stack: Vec<&str> = cd.initial.1.iter().map(String::as_str).collect();
            let initial = rsm.config(&cd.initial.0, &stack)?;
            let g = global_of[initial.node.idx()];
            if *initial_global.get_or_insert(g) != g {
                return Err(Error::Precondition("initial heads disagree on the global state".into()));
            }
            components.push(Component {
                name: cd.name.clone(),
                rsm,
                initial,
                global_of,
                local_of,
                at,
            });
        }
        Ok(Self {
            globals: def.globals.clone(),
            components,
            initial_global: initial_global.expect("at least one component"),
        })
    }

    pub fn globals(&self) -> &[String] {
        &self.globals
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn initial_global(&self) -> usize {
        self.initial_global
    }

    pub fn initial(&self) -> GlobalConfig {
        GlobalConfig {
            global: self.initial_global,
            locals: self.components.iter().map(|c| c.initial.clone()).collect(),
        }
    }

    /// Parses `c₁ | c₂ | …` with each part `node [b1,b2]`.
    pub fn parse_global_config(&self, text: &str) -> Result<Vec<Configuration>> {
        let parts: Vec<&str> = text.split('|').map(str::trim).collect();
        if parts.len() != self.components.len() {
            return Err(Error::IllFormedConfiguration(format!(
                "expected {} component configurations, found {}",
                self.components.len(),
                parts.len()
            )));
        }
        parts
            .iter()
            .zip(&self.components)
            .map(|(p, comp)| comp.rsm.parse_config(p))
            .collect()
    }

    pub fn fmt_global_config(&self, locals: &[Configuration]) -> String {
        let parts: Vec<String> = locals
            .iter()
            .zip(&self.components)
            .map(|(c, comp)| comp.rsm.fmt_config(c))
            .collect();
        parts.join(" | ")
    }
}

/// One configuration per component; heads share `global`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalConfig {
    pub global: usize,
    pub locals: Vec<Configuration>,
}

/// The configurations of one component at a point of a switching history.
/// Every head of `automaton` carries global state `head_global`.
#[derive(Debug, Clone)]
pub struct LocalSet {
    pub automaton: ConfigAutomaton<bool>,
    pub head_global: usize,
    /// post* runs applied to this component so far.
    pub rounds: usize,
    /// Marks of the automaton before the first run.
    pub initial_marks: usize,
}

/// A global state and one configuration set per component; it stands for
/// the product of the sets with every head moved to `global`.
#[derive(Debug, Clone)]
pub struct ReachTuple {
    pub global: usize,
    pub locals: Vec<LocalSet>,
    pub last: Option<usize>,
}

/// Tuples reached with exactly `i` contexts, for `i = 0..=k`.
#[derive(Debug, Clone)]
pub struct GlobalReachSet {
    pub k: usize,
    pub rounds: Vec<Vec<ReachTuple>>,
}

impl GlobalReachSet {
    pub fn tuples(&self) -> impl Iterator<Item = &ReachTuple> {
        self.rounds.iter().flatten()
    }
}

pub fn mark_count(aut: &ConfigAutomaton<bool>) -> usize {
    let marks: BTreeSet<Mark> = aut.state_ids().map(|q| aut.mark_of(q)).collect();
    marks.len()
}

/// Copies `aut`, mapping every kept state through `map`; states mapped to the
/// same pair are merged.
fn remap(
    aut: &ConfigAutomaton<bool>,
    map: impl Fn(StateId) -> Option<(NodeId, Mark)>,
    initial: impl Fn(StateId) -> bool,
    fresh: Option<Mark>,
) -> ConfigAutomaton<bool> {
    let mut out = ConfigAutomaton::new();
    let mut ids: Vec<Option<StateId>> = Vec::with_capacity(aut.state_count());
    for q in aut.state_ids() {
        let id = map(q).map(|(u, m)| out.add_state(u, m));
        if let Some(id) = id {
            if initial(q) {
                out.set_initial(id, true);
            }
            if aut.is_final(q) {
                out.set_final(id, true);
            }
        }
        ids.push(id);
    }
    for t in aut.transitions() {
        if !t.weight {
            continue;
        }
        if let (Some(a), Some(b)) = (ids[t.src.idx()], ids[t.tgt.idx()]) {
            out.set_transition(a, t.label, b, true);
        }
    }
    out.set_fresh_mark(fresh);
    out
}

/// Keeps the heads of `aut` whose global state is `g`, drops the other
/// non-entry states and clears the fresh mark.
fn restrict(comp: &Component, aut: &ConfigAutomaton<bool>, g: usize) -> ConfigAutomaton<bool> {
    let rsm = &comp.rsm;
    remap(
        aut,
        |q| {
            let u = aut.node_of(q);
            (rsm.kind(u) == NodeKind::Entry || comp.global_of(u) == g).then(|| aut.state_info(q))
        },
        |q| aut.is_initial(q) && comp.global_of(aut.node_of(q)) == g,
        None,
    )
}

/// Moves every head of `aut` to global state `g` under the new mark `mark`.
/// Old heads stop being initial; old non-entry heads disappear.
fn transplant(comp: &Component, aut: &ConfigAutomaton<bool>, g: usize, mark: Mark) -> ConfigAutomaton<bool> {
    let rsm = &comp.rsm;
    let mut out = remap(
        aut,
        |q| (rsm.kind(aut.node_of(q)) == NodeKind::Entry).then(|| aut.state_info(q)),
        |_| false,
        None,
    );
    for q in aut.state_ids() {
        if !aut.is_initial(q) {
            continue;
        }
        let u = aut.node_of(q);
        let head = out.add_state(comp.node_at(u, g), mark);
        out.set_initial(head, true);
        if rsm.kind(u) == NodeKind::Entry && aut.is_final(q) {
            out.set_final(head, true);
        }
        for &t in aut.eps_out(q).iter().chain(aut.box_out(q)) {
            let tr = aut.transition(t);
            if !tr.weight {
                continue;
            }
            let tgt = out.state(aut.node_of(tr.tgt), aut.mark_of(tr.tgt)).expect("entry states are kept");
            out.set_transition(head, tr.label, tgt, true);
        }
    }
    out
}

fn live_states(aut: &ConfigAutomaton<bool>) -> Vec<bool> {
    let mut incoming: Vec<Vec<StateId>> = alloc::vec![Vec::new(); aut.state_count()];
    for t in aut.transitions() {
        if t.weight {
            incoming[t.tgt.idx()].push(t.src);
        }
    }
    let mut live = alloc::vec![false; aut.state_count()];
    let mut queue: VecDeque<StateId> = aut.final_states().collect();
    for q in &queue {
        live[q.idx()] = true;
    }
    while let Some(q) = queue.pop_front() {
        for &p in &incoming[q.idx()] {
            if !live[p.idx()] {
                live[p.idx()] = true;
                queue.push_back(p);
            }
        }
    }
    live
}

/// Runs one context of `comp` from `set`, with heads moved to `g` first.
/// Returns the post* result with the moved heads folded into its fresh mark.
fn run_context(comp: &Component, set: &LocalSet, g: usize) -> Result<ConfigAutomaton<bool>> {
    let (input, moved) = if set.head_global == g {
        (set.automaton.clone(), None)
    } else {
        let m = set.automaton.mark_bound();
        (transplant(comp, &set.automaton, g, m), Some(m))
    };
    let out = post_star(&comp.rsm, &input)?;
    let aut = out.automaton;
    let Some(m) = moved else {
        return Ok(aut);
    };
    let fresh = out.fresh;
    Ok(remap(
        &aut,
        |q| {
            let (u, mk) = aut.state_info(q);
            Some((u, if mk == fresh { m } else { mk }))
        },
        |q| aut.is_explicitly_initial(q) && aut.mark_of(q) != m,
        Some(m),
    ))
}

/// Explores every switching history with at most `k` contexts.
pub fn k_bounded_reach(crsm: &Crsm, k: usize) -> Result<GlobalReachSet> {
    if k == 0 {
        return Err(Error::ZeroContextBound);
    }
    let mut locals = Vec::new();
    for comp in &crsm.components {
        let aut = singleton_automaton(&comp.rsm, &comp.initial)?;
        let initial_marks = mark_count(&aut);
        locals.push(LocalSet {
            automaton: aut,
            head_global: crsm.initial_global,
            rounds: 0,
            initial_marks,
        });
    }
    let mut rounds = alloc::vec![alloc::vec![ReachTuple {
        global: crsm.initial_global,
        locals,
        last: None,
    }]];
    for _ in 0..k {
        let mut next = Vec::new();
        for t in rounds.last().expect("non-empty") {
            for (j, comp) in crsm.components.iter().enumerate() {
                if t.last == Some(j) {
                    continue;
                }
                let out = run_context(comp, &t.locals[j], t.global)?;
                let live = live_states(&out);
                let mut reached: BTreeSet<usize> = BTreeSet::new();
                for q in out.state_ids() {
                    if out.is_initial(q) && live[q.idx()] {
                        reached.insert(comp.global_of(out.node_of(q)));
                    }
                }
                for g in reached {
                    let mut locals = t.locals.clone();
                    locals[j] = LocalSet {
                        automaton: restrict(comp, &out, g),
                        head_global: g,
                        rounds: t.locals[j].rounds + 1,
                        initial_marks: t.locals[j].initial_marks,
                    };
                    next.push(ReachTuple {
                        global: g,
                        locals,
                        last: Some(j),
                    });
                }
            }
        }
        rounds.push(next);
    }
    Ok(GlobalReachSet { k, rounds })
}

/// Whether some explored tuple contains `locals`. Heads naming different
/// global states make the configuration unreachable.
pub fn is_global_config_reachable(crsm: &Crsm, reach: &GlobalReachSet, locals: &[Configuration]) -> Result<bool> {
    if locals.len() != crsm.components.len() {
        return Err(Error::IllFormedConfiguration(format!(
            "expected {} component configurations, found {}",
            crsm.components.len(),
            locals.len()
        )));
    }
    for (c, comp) in locals.iter().zip(&crsm.components) {
        comp.rsm.check_configuration(c)?;
    }
    let g = crsm.components[0].global_of(locals[0].node);
    if locals.iter().zip(&crsm.components).any(|(c, comp)| comp.global_of(c.node) != g) {
        return Ok(false);
    }
    for t in reach.tuples().filter(|t| t.global == g) {
        let mut all = true;
        for ((c, comp), set) in locals.iter().zip(&crsm.components).zip(&t.locals) {
            let c = comp.relocate(c, set.head_global);
            if !accepts(&comp.rsm, &set.automaton, &c)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every global configuration of [`GlobalReachSet`] whose stacks have at
/// most `max_height` boxes.
pub fn enumerate_reachable(crsm: &Crsm, reach: &GlobalReachSet, max_height: usize) -> Result<BTreeSet<GlobalConfig>> {
    let per_comp: Vec<Vec<Configuration>> = crsm
        .components
        .iter()
        .map(|comp| crate::oracle::all_configurations(&comp.rsm, max_height))
        .collect();
    let mut out = BTreeSet::new();
    for t in reach.tuples() {
        let mut choices: Vec<Vec<Configuration>> = Vec::new();
        for ((comp, set), all) in crsm.components.iter().zip(&t.locals).zip(&per_comp) {
            let mut v = Vec::new();
            for c in all.iter().filter(|c| comp.global_of(c.node) == set.head_global) {
                if accepts(&comp.rsm, &set.automaton, c)? {
                    v.push(comp.relocate(c, t.global));
                }
            }
            choices.push(v);
        }
        product(&choices, &mut Vec::new(), &mut |locals| {
            out.insert(GlobalConfig {
                global: t.global,
                locals: locals.to_vec(),
            });
        });
    }
    Ok(out)
}

fn product(choices: &[Vec<Configuration>], acc: &mut Vec<Configuration>, f: &mut impl FnMut(&[Configuration])) {
    if acc.len() == choices.len() {
        f(acc);
        return;
    }
    for c in &choices[acc.len()] {
        acc.push(c.clone());
        product(choices, acc, f);
        acc.pop();
    }
}

/// Brute-force interleaving search over explicit global configurations with
/// stacks of at most `stack_bound` boxes and at most `k` contexts. Returns
/// the reached global configurations whose stacks have at most `max_height`
/// boxes.
pub fn interleaving_reach(
    crsm: &Crsm,
    k: usize,
    stack_bound: usize,
    max_height: usize,
) -> Result<BTreeSet<GlobalConfig>> {
    if k == 0 {
        return Err(Error::ZeroContextBound);
    }
    type State = (GlobalConfig, usize, Option<usize>);
    let start: State = (crsm.initial(), 0, None);
    let mut seen: HashSet<State> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some((gc, used, last)) = queue.pop_front() {
        for (j, comp) in crsm.components.iter().enumerate() {
            let used2 = if last == Some(j) { used } else { used + 1 };
            if used2 > k {
                continue;
            }
            for (c, _) in comp.rsm.step(&gc.locals[j])? {
                if c.stack.len() > stack_bound {
                    continue;
                }
                let g = comp.global_of(c.node);
                let mut locals: Vec<Configuration> = gc
                    .locals
                    .iter()
                    .zip(&crsm.components)
                    .map(|(o, oc)| oc.relocate(o, g))
                    .collect();
                locals[j] = c;
                let st = (GlobalConfig { global: g, locals }, used2, Some(j));
                if seen.insert(st.clone()) {
                    queue.push_back(st);
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|(gc, _, _)| gc)
        .filter(|gc| gc.locals.iter().all(|c| c.stack.len() <= max_height))
        .collect())
}

/// [`interleaving_reach`] with the stack bound raised by two until the
/// answer stops changing.
pub fn stabilized_interleaving_reach(
    crsm: &Crsm,
    k: usize,
    max_height: usize,
    ceiling: usize,
) -> Result<BTreeSet<GlobalConfig>> {
    let modules: usize = crsm.components.iter().map(|c| c.rsm.modules().len()).sum();
    let mut bound = max_height + modules + 1;
    let mut prev = interleaving_reach(crsm, k, bound, max_height)?;
    loop {
        bound += 2;
        if bound > ceiling {
            return Err(Error::Inconclusive { ceiling });
        }
        let next = interleaving_reach(crsm, k, bound, max_height)?;
        if next == prev {
            return Ok(next);
        }
        prev = next;
    }
}

/// Shape problems of the automata stored in `reach`, plus a note for every
/// automaton using more than `initial + rounds` marks.
pub fn reach_diagnostics(crsm: &Crsm, reach: &GlobalReachSet) -> Vec<String> {
    let mut out = Vec::new();
    for t in reach.tuples() {
        for (comp, set) in crsm.components.iter().zip(&t.locals) {
            let marks = mark_count(&set.automaton);
            if marks > set.initial_marks + set.rounds {
                out.push(format!(
                    "component `{}`: {marks} marks after {} rounds (started with {})",
                    comp.name, set.rounds, set.initial_marks
                ));
            }
            let shape = validate_shape(&comp.rsm, &set.automaton);
            out.extend(shape.violations.into_iter().map(|v| format!("component `{}`: {v}", comp.name)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::accepts;
    use crate::rsm::{ModuleDef, TransitionDef};

    fn names(xs: &[&str], gs: &[&str]) -> Vec<String> {
        xs.iter().flat_map(|x| gs.iter().map(move |g| format!("{x}@{g}"))).collect()
    }

    /// Component 1 flips `g0` to `g1`; component 2 reaches `err` only under `g1`.
    fn flip_and_error() -> CrsmDef {
        let gs = ["g0", "g1"];
        let mut a = ModuleDef::new("A");
        a.entries = names(&["s"], &gs);
        a.internals = names(&["t"], &gs);
        a.transitions.push(TransitionDef::new("s@g0", "t@g1", true));
        let mut b = ModuleDef::new("B");
        b.entries = names(&["s"], &gs);
        b.internals = names(&["err"], &gs);
        b.transitions.push(TransitionDef::new("s@g1", "err@g1", true));
        CrsmDef {
            globals: gs.iter().map(|g| g.to_string()).collect(),
            components: alloc::vec![
                ComponentDef {
                    name: "flipper".into(),
                    rsm: RsmDef { modules: alloc::vec![a] },
                    initial: ("s@g0".into(), Vec::new()),
                },
                ComponentDef {
                    name: "checker".into(),
                    rsm: RsmDef { modules: alloc::vec![b] },
                    initial: ("s@g0".into(), Vec::new()),
                },
            ],
        }
    }

    #[test]
    fn error_needs_a_switch() {
        let c = Crsm::new(&flip_and_error()).unwrap();
        let target = c.parse_global_config("t@g1 | err@g1").unwrap();
        let r1 = k_bounded_reach(&c, 1).unwrap();
        assert!(!is_global_config_reachable(&c, &r1, &target).unwrap());
        let r2 = k_bounded_reach(&c, 2).unwrap();
        assert!(is_global_config_reachable(&c, &r2, &target).unwrap());
        let start = c.parse_global_config("s@g0 | s@g0").unwrap();
        assert!(is_global_config_reachable(&c, &r1, &start).unwrap());
        let mixed = c.parse_global_config("t@g1 | s@g0").unwrap();
        assert!(!is_global_config_reachable(&c, &r2, &mixed).unwrap());
        assert!(c.parse_global_config("t@g1").is_err());
        for k in 1..=3 {
            let r = k_bounded_reach(&c, k).unwrap();
            assert!(reach_diagnostics(&c, &r).is_empty());
            assert_eq!(
                enumerate_reachable(&c, &r, 2).unwrap(),
                stabilized_interleaving_reach(&c, k, 2, 20).unwrap()
            );
        }
        assert!(matches!(k_bounded_reach(&c, 0), Err(Error::ZeroContextBound)));
    }

    #[test]
    fn single_component_is_plain_post_star() {
        let gs = ["g"];
        let mut m = ModuleDef::new("M");
        m.entries = names(&["e"], &gs);
        m.exits = names(&["x"], &gs);
        m.internals = names(&["u"], &gs);
        m.boxes.push(crate::rsm::BoxDef { name: "b".into(), callee: 0 });
        m.transitions = alloc::vec![
            TransitionDef::new("e@g", "b.e@g", true),
            TransitionDef::new("e@g", "u@g", true),
            TransitionDef::new("u@g", "x@g", true),
            TransitionDef::new("b.x@g", "x@g", true),
        ];
        let def = CrsmDef {
            globals: alloc::vec!["g".into()],
            components: alloc::vec![ComponentDef {
                name: "only".into(),
                rsm: RsmDef { modules: alloc::vec![m] },
                initial: ("e@g".into(), Vec::new()),
            }],
        };
        let c = Crsm::new(&def).unwrap();
        let comp = &c.components()[0];
        let plain = post_star(&comp.rsm, &singleton_automaton(&comp.rsm, &comp.initial).unwrap()).unwrap();
        for k in 1..=3 {
            let r = k_bounded_reach(&c, k).unwrap();
            for cfg in crate::oracle::all_configurations(&comp.rsm, 3) {
                assert_eq!(
                    is_global_config_reachable(&c, &r, core::slice::from_ref(&cfg)).unwrap(),
                    accepts(&comp.rsm, &plain.automaton, &cfg).unwrap()
                );
            }
        }
    }

    #[test]
    fn rejects_missing_copies() {
        let mut def = flip_and_error();
        def.components[0].rsm.modules[0].internals.pop();
        assert!(Crsm::new(&def).is_err());
        let mut def = flip_and_error();
        def.components[1].initial = ("s@g1".into(), Vec::new());
        assert!(Crsm::new(&def).is_err());
    }
}
