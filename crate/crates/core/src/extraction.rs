//! Distance queries over a saturated configuration automaton.
//!
//! Every accepting run of a post* output can be put in the shape "one
//! ε-transition, then box transitions only". Queries therefore fold the
//! stack left to right over a frontier of entry states, which is a
//! vector-times-sparse-matrix product per box.

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::automaton::{ConfigAutomaton, Label, StateId};
use crate::confdist::post_star;
use crate::error::{Error, Result};
use crate::rsm::{BoxId, Configuration, NodeId, NodeKind, Rsm, Superconfiguration};
use crate::semiring::Semiring;

/// Weight operations performed by a query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub ops: u64,
}

type Frontier<W> = HashMap<StateId, W>;

fn add_into<S: Semiring>(s: &S, f: &mut Frontier<S::Elem>, q: StateId, v: S::Elem, ops: &mut OpCount) {
    if s.is_zero(&v) {
        return;
    }
    match f.get_mut(&q) {
        Some(cur) => {
            ops.ops += 1;
            *cur = s.combine(cur, &v);
        }
        None => {
            f.insert(q, v);
        }
    }
}

/// Frontier after the single leading ε-step for node `u`.
fn initial_frontier<S: Semiring>(
    rsm: &Rsm<S>,
    aut: &ConfigAutomaton<S::Elem>,
    u: NodeId,
    ops: &mut OpCount,
) -> Frontier<S::Elem> {
    let s = rsm.semiring();
    let mut f = HashMap::new();
    let is_entry = rsm.kind(u) == NodeKind::Entry;
    for q in aut.state_ids() {
        if aut.node_of(q) != u || !aut.is_initial(q) {
            continue;
        }
        if is_entry {
            add_into(s, &mut f, q, s.one(), ops);
        }
        for &t in aut.eps_out(q) {
            let tr = aut.transition(t);
            add_into(s, &mut f, tr.tgt, tr.weight.clone(), ops);
        }
    }
    f
}

fn finish<S: Semiring>(s: &S, aut: &ConfigAutomaton<S::Elem>, f: &Frontier<S::Elem>, ops: &mut OpCount) -> S::Elem {
    let mut acc = s.zero();
    for (q, v) in f {
        if aut.is_final(*q) {
            ops.ops += 1;
            acc = s.combine(&acc, v);
        }
    }
    acc
}

/// `A_post*(c)` by the left-to-right frontier DP.
pub fn config_distance<S: Semiring>(
    rsm: &Rsm<S>,
    apost: &ConfigAutomaton<S::Elem>,
    c: &Configuration,
) -> Result<S::Elem> {
    config_distance_counted(rsm, apost, c).map(|(w, _)| w)
}

pub fn config_distance_counted<S: Semiring>(
    rsm: &Rsm<S>,
    apost: &ConfigAutomaton<S::Elem>,
    c: &Configuration,
) -> Result<(S::Elem, OpCount)> {
    rsm.check_configuration(c)?;
    let s = rsm.semiring();
    let mut ops = OpCount::default();
    let mut f = initial_frontier(rsm, apost, c.node, &mut ops);
    for &b in &c.stack {
        if f.is_empty() {
            break;
        }
        f = step_box(s, apost, &f, b, &mut ops);
    }
    let w = finish(s, apost, &f, &mut ops);
    Ok((w, ops))
}

fn step_box<S: Semiring>(
    s: &S,
    aut: &ConfigAutomaton<S::Elem>,
    f: &Frontier<S::Elem>,
    b: BoxId,
    ops: &mut OpCount,
) -> Frontier<S::Elem> {
    let mut next = HashMap::new();
    for (q, v) in f {
        for &t in aut.box_out_labeled(*q, b) {
            let tr = aut.transition(t);
            ops.ops += 1;
            let w = s.extend(&tr.weight, v);
            add_into(s, &mut next, tr.tgt, w, ops);
        }
    }
    next
}

/// A configuration automaton relabeled with modules: `(e,m) →M (e',m')`
/// carries the combine of all box transitions between the two states whose
/// target `e'` lies in `M`.
#[derive(Debug, Clone)]
pub struct ModuleAutomaton<W> {
    automaton: ConfigAutomaton<W>,
    out: HashMap<(StateId, usize), Vec<(StateId, W)>>,
    transition_count: usize,
}

impl<W: Clone> ModuleAutomaton<W> {
    pub fn automaton(&self) -> &ConfigAutomaton<W> {
        &self.automaton
    }

    /// Module-labeled transitions leaving `q` with label `m`.
    pub fn out(&self, q: StateId, m: usize) -> &[(StateId, W)] {
        self.out.get(&(q, m)).map_or(&[], Vec::as_slice)
    }

    pub fn transition_count(&self) -> usize {
        self.transition_count
    }

    /// Every module-labeled transition as `(source, label, target, weight)`,
    /// sorted by source, label and target.
    pub fn transitions(&self) -> Vec<(StateId, usize, StateId, W)> {
        let mut v: Vec<_> = self
            .out
            .iter()
            .flat_map(|(&(q, m), ts)| ts.iter().map(move |(t, w)| (q, m, *t, w.clone())))
            .collect();
        v.sort_by_key(|&(q, m, t, _)| (q, m, t));
        v
    }
}

pub fn superconfig_automaton<S: Semiring>(
    rsm: &Rsm<S>,
    apost: &ConfigAutomaton<S::Elem>,
) -> ModuleAutomaton<S::Elem> {
    let s = rsm.semiring();
    let mut acc: HashMap<(StateId, usize, StateId), S::Elem> = HashMap::new();
    for t in apost.transitions() {
        if let Label::Box(_) = t.label {
            let m = rsm.module_of(apost.node_of(t.tgt));
            let key = (t.src, m, t.tgt);
            let w = match acc.get(&key) {
                Some(cur) => s.combine(cur, &t.weight),
                None => t.weight.clone(),
            };
            acc.insert(key, w);
        }
    }
    let transition_count = acc.len();
    let mut keys: Vec<_> = acc.into_iter().collect();
    keys.sort_by_key(|&((q, m, t), _)| (q, m, t));
    let mut out: HashMap<(StateId, usize), Vec<(StateId, S::Elem)>> = HashMap::new();
    for ((q, m, t), w) in keys {
        out.entry((q, m)).or_default().push((t, w));
    }
    ModuleAutomaton {
        automaton: apost.clone(),
        out,
        transition_count,
    }
}

fn step_module<S: Semiring>(
    s: &S,
    maut: &ModuleAutomaton<S::Elem>,
    f: &Frontier<S::Elem>,
    m: usize,
    ops: &mut OpCount,
) -> Frontier<S::Elem> {
    let mut next = HashMap::new();
    for (q, v) in f {
        for (t, w) in maut.out(*q, m) {
            ops.ops += 1;
            let x = s.extend(w, v);
            add_into(s, &mut next, *t, x, ops);
        }
    }
    next
}

fn check_superconfig<S: Semiring>(rsm: &Rsm<S>, sc: &Superconfiguration) -> Result<()> {
    if sc.node.idx() >= rsm.node_count() || !rsm.kind(sc.node).is_configuration_node() {
        return Err(Error::IllFormedConfiguration(alloc::format!(
            "node #{} cannot head a superconfiguration",
            sc.node.0
        )));
    }
    if let Some(m) = sc.modules.iter().find(|&&m| m >= rsm.modules().len()) {
        return Err(Error::IllFormedConfiguration(alloc::format!("module index {m} out of range")));
    }
    Ok(())
}

/// The combine of `A_post*(⟨u, S⟩)` over every stack `S` whose i-th box
/// belongs to the i-th module of `sc`.
pub fn superconfig_distance<S: Semiring>(
    rsm: &Rsm<S>,
    maut: &ModuleAutomaton<S::Elem>,
    sc: &Superconfiguration,
) -> Result<S::Elem> {
    check_superconfig(rsm, sc)?;
    let s = rsm.semiring();
    let mut ops = OpCount::default();
    let mut f = initial_frontier(rsm, &maut.automaton, sc.node, &mut ops);
    for &m in &sc.modules {
        if f.is_empty() {
            break;
        }
        f = step_module(s, maut, &f, m, &mut ops);
    }
    Ok(finish(s, &maut.automaton, &f, &mut ops))
}

/// Per-node distances `⊕_S A_post*(⟨u, S⟩)`, indexed by node id.
#[derive(Debug, Clone)]
pub struct NodeDistances<W> {
    values: Vec<W>,
}

impl<W> NodeDistances<W> {
    #[inline]
    pub fn get(&self, u: NodeId) -> &W {
        &self.values[u.idx()]
    }

    pub fn values(&self) -> &[W] {
        &self.values
    }
}

/// Single-source distances on the reversed box-transition graph from the
/// final states, then one ε-step per node.
pub fn node_distances<S: Semiring>(rsm: &Rsm<S>, apost: &ConfigAutomaton<S::Elem>) -> NodeDistances<S::Elem> {
    let s = rsm.semiring();
    let n = apost.state_count();
    let mut incoming: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
    for (id, t) in apost.transitions().iter().enumerate() {
        if let Label::Box(_) = t.label {
            incoming[t.tgt.idx()].push(id as u32);
        }
    }
    let mut g: Vec<S::Elem> = alloc::vec![s.zero(); n];
    let mut queue = alloc::collections::VecDeque::new();
    let mut queued = alloc::vec![false; n];
    for q in apost.final_states() {
        g[q.idx()] = s.one();
        queued[q.idx()] = true;
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        queued[q.idx()] = false;
        for &id in &incoming[q.idx()] {
            let t = apost.transition(id);
            if s.is_zero(&t.weight) {
                continue;
            }
            let v = s.extend(&g[q.idx()], &t.weight);
            let new = s.combine(&g[t.src.idx()], &v);
            if new != g[t.src.idx()] {
                g[t.src.idx()] = new;
                if !queued[t.src.idx()] {
                    queued[t.src.idx()] = true;
                    queue.push_back(t.src);
                }
            }
        }
    }
    let mut values: Vec<S::Elem> = alloc::vec![s.zero(); rsm.node_count()];
    for q in apost.state_ids() {
        if !apost.is_initial(q) {
            continue;
        }
        let u = apost.node_of(q);
        let mut acc = values[u.idx()].clone();
        if rsm.kind(u) == NodeKind::Entry {
            acc = s.combine(&acc, &g[q.idx()]);
        }
        for &t in apost.eps_out(q) {
            let tr = apost.transition(t);
            acc = s.combine(&acc, &s.extend(&g[tr.tgt.idx()], &tr.weight));
        }
        values[u.idx()] = acc;
    }
    NodeDistances { values }
}

/// Same-context distances `dist(Mᵢ, u) = ⊕_{e∈Enᵢ} dist(⟨e,ε⟩, ⟨u,ε⟩)` for
/// every configuration node `u`, indexed by node id (the module is the one
/// owning `u`). Requires a normalized RSM.
pub fn same_context_distances<S: Semiring>(rsm: &Rsm<S>) -> Result<NodeDistances<S::Elem>> {
    let init = crate::automaton::all_entries_automaton(rsm);
    let out = post_star(rsm, &init)?;
    let s = rsm.semiring();
    let mut values = alloc::vec![s.zero(); rsm.node_count()];
    for u in rsm.node_ids() {
        if rsm.kind(u).is_configuration_node() {
            values[u.idx()] = config_distance(rsm, &out.automaton, &Configuration::new(u, Vec::new()))?;
        }
    }
    Ok(NodeDistances { values })
}

type SparseMatrix<W> = HashMap<StateId, Vec<(StateId, W)>>;

/// Products of module-labeled transition matrices for every valid module
/// sequence of length `z + 1`.
#[derive(Debug, Clone)]
pub struct BlockTable<W> {
    z: usize,
    ids: HashMap<Vec<usize>, usize>,
    blocks: Vec<SparseMatrix<W>>,
}

impl<W> BlockTable<W> {
    pub fn z(&self) -> usize {
        self.z
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, seq: &[usize]) -> bool {
        self.ids.contains_key(seq)
    }

    /// The stored sequences, sorted.
    pub fn sequences(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.ids.keys().cloned().collect();
        v.sort();
        v
    }
}

/// `(a, b)` may be adjacent in a module stack iff `b` has a box calling `a`.
pub fn valid_pair<S: Semiring>(rsm: &Rsm<S>, a: usize, b: usize) -> bool {
    rsm.callers(a).iter().any(|&bx| rsm.box_info(bx).owner == b)
}

/// Builds every block of `z` consecutive module steps. Fails when more than
/// `budget` sequences would be stored.
pub fn block_precompute<S: Semiring>(
    rsm: &Rsm<S>,
    maut: &ModuleAutomaton<S::Elem>,
    z: usize,
    budget: usize,
) -> Result<BlockTable<S::Elem>> {
    if z == 0 {
        return Err(Error::Precondition("block length z must be positive".into()));
    }
    let s = rsm.semiring();
    let k = rsm.modules().len();
    let succ: Vec<Vec<usize>> = (0..k).map(|a| (0..k).filter(|&b| valid_pair(rsm, a, b)).collect()).collect();
    // Count sequences before building any of them.
    let mut ending: Vec<usize> = alloc::vec![1; k];
    for _ in 0..z {
        let mut next = alloc::vec![0usize; k];
        for a in 0..k {
            for &b in &succ[a] {
                next[b] = next[b].saturating_add(ending[a]);
            }
        }
        ending = next;
    }
    let needed = ending.iter().fold(0usize, |a, &b| a.saturating_add(b));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    // One matrix per valid pair: transitions labeled `b` leaving states of `a`.
    let mut pair: HashMap<(usize, usize), SparseMatrix<S::Elem>> = HashMap::new();
    for (q, m, t, w) in maut.transitions() {
        let a = rsm.module_of(maut.automaton.node_of(q));
        pair.entry((a, m)).or_default().entry(q).or_default().push((t, w));
    }
    let mut ids = HashMap::new();
    let mut blocks = Vec::new();
    let mut stack: Vec<(Vec<usize>, SparseMatrix<S::Elem>)> = Vec::new();
    for a in 0..k {
        for &b in &succ[a] {
            stack.push((alloc::vec![a, b], pair.get(&(a, b)).cloned().unwrap_or_default()));
        }
    }
    while let Some((seq, mat)) = stack.pop() {
        if seq.len() == z + 1 {
            ids.insert(seq, blocks.len());
            blocks.push(mat);
            continue;
        }
        let last = *seq.last().expect("non-empty sequence");
        for &c in &succ[last] {
            let empty = SparseMatrix::new();
            let step = pair.get(&(last, c)).unwrap_or(&empty);
            let mut seq2 = seq.clone();
            seq2.push(c);
            stack.push((seq2, multiply(s, &mat, step)));
        }
    }
    Ok(BlockTable { z, ids, blocks })
}

/// Composition "first `a`, then `b`": `(a·b)[q][r] = ⊕ b[p][r] ⊗ a[q][p]`.
fn multiply<S: Semiring>(s: &S, a: &SparseMatrix<S::Elem>, b: &SparseMatrix<S::Elem>) -> SparseMatrix<S::Elem> {
    let mut out = SparseMatrix::new();
    for (q, row) in a {
        let mut acc: HashMap<StateId, S::Elem> = HashMap::new();
        for (p, w1) in row {
            if let Some(row2) = b.get(p) {
                for (r, w2) in row2 {
                    let v = s.extend(w2, w1);
                    let cur = acc.remove(r).unwrap_or_else(|| s.zero());
                    acc.insert(*r, s.combine(&cur, &v));
                }
            }
        }
        let mut entries: Vec<(StateId, S::Elem)> = acc.into_iter().filter(|(_, w)| !s.is_zero(w)).collect();
        if !entries.is_empty() {
            entries.sort_by_key(|(r, _)| *r);
            out.insert(*q, entries);
        }
    }
    out
}

/// [`superconfig_distance`] consuming the module stack in blocks of `z`.
pub fn superconfig_distance_blocked<S: Semiring>(
    rsm: &Rsm<S>,
    maut: &ModuleAutomaton<S::Elem>,
    table: &BlockTable<S::Elem>,
    sc: &Superconfiguration,
) -> Result<S::Elem> {
    check_superconfig(rsm, sc)?;
    let s = rsm.semiring();
    let mut ops = OpCount::default();
    let mut seq = Vec::with_capacity(sc.modules.len() + 1);
    seq.push(rsm.module_of(sc.node));
    seq.extend_from_slice(&sc.modules);
    if seq.windows(2).any(|w| !valid_pair(rsm, w[0], w[1])) {
        return Ok(s.zero());
    }
    let mut f = initial_frontier(rsm, &maut.automaton, sc.node, &mut ops);
    let z = table.z;
    let mut pos = 0;
    while pos + z < seq.len() {
        let Some(&id) = table.ids.get(&seq[pos..=pos + z]) else {
            return Ok(s.zero());
        };
        let block = &table.blocks[id];
        let mut next = HashMap::new();
        for (q, v) in &f {
            if let Some(row) = block.get(q) {
                for (r, w) in row {
                    let x = s.extend(w, v);
                    add_into(s, &mut next, *r, x, &mut ops);
                }
            }
        }
        f = next;
        pos += z;
    }
    for &m in &seq[pos + 1..] {
        f = step_module(s, maut, &f, m, &mut ops);
    }
    Ok(finish(s, &maut.automaton, &f, &mut ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{accept_weight, singleton_automaton};
    use crate::generators::two_module_mutual_recursion;
    use crate::rsm::{BoxDef, ModuleDef, RsmDef, TransitionDef};
    use crate::semiring::{Boolean, Cost, Tropical};

    fn trop() -> (Rsm<Tropical>, ConfigAutomaton<Cost>) {
        let r = Rsm::new(Tropical::new(), &two_module_mutual_recursion([Cost::Finite(1); 8]))
            .unwrap()
            .normalize_exit_weights();
        let init = singleton_automaton(&r, &r.config("e1_1", &[]).unwrap()).unwrap();
        let out = post_star(&r, &init).unwrap();
        (r, out.automaton)
    }

    fn boolean() -> (Rsm<Boolean>, ConfigAutomaton<bool>) {
        let r = Rsm::new(Boolean, &two_module_mutual_recursion([true; 8])).unwrap();
        let init = singleton_automaton(&r, &r.config("e1_1", &[]).unwrap()).unwrap();
        let out = post_star(&r, &init).unwrap();
        (r, out.automaton)
    }

    #[test]
    fn config_distance_examples() {
        let (r, a) = boolean();
        assert!(config_distance(&r, &a, &r.config("u1", &["b2", "b1"]).unwrap()).unwrap());
        assert!(!config_distance(&r, &a, &r.config("e1_2", &[]).unwrap()).unwrap());
        let (t, a) = trop();
        let c = t.config("u1", &["b2", "b1"]).unwrap();
        assert_eq!(config_distance(&t, &a, &c).unwrap(), Cost::Finite(3));
        assert_eq!(config_distance(&t, &a, &c).unwrap(), accept_weight(&t, &a, &c).unwrap());
    }

    #[test]
    fn superconfig_examples() {
        let (r, a) = boolean();
        let m = superconfig_automaton(&r, &a);
        assert!(superconfig_distance(&r, &m, &r.superconfig("e1_1", &["M2", "M1"]).unwrap()).unwrap());
        let (t, a) = trop();
        let m = superconfig_automaton(&t, &a);
        let sc = t.superconfig("u1", &["M2", "M1"]).unwrap();
        assert_eq!(superconfig_distance(&t, &m, &sc).unwrap(), Cost::Finite(3));
        let flat = t.superconfig("u1", &[]).unwrap();
        let plain = config_distance(&t, &a, &t.config("u1", &[]).unwrap()).unwrap();
        assert_eq!(superconfig_distance(&t, &m, &flat).unwrap(), plain);
    }

    #[test]
    fn module_automaton_combines_parallel_boxes() {
        // Two boxes of `main` calling `f`; the same pair of states is linked twice.
        let mut main = ModuleDef::new("main");
        main.entries.push("s".into());
        main.boxes.push(BoxDef { name: "p".into(), callee: 1 });
        main.boxes.push(BoxDef { name: "q".into(), callee: 1 });
        let mut f = ModuleDef::new("f");
        f.entries.push("fe".into());
        let def = RsmDef {
            modules: alloc::vec![main, f],
        };
        let r = Rsm::new(Tropical::new(), &def).unwrap();
        let mut a = ConfigAutomaton::new();
        let fe = a.add_state(r.node_id("fe").unwrap(), 0);
        let s = a.add_state(r.node_id("s").unwrap(), 1);
        a.set_transition(fe, Label::Box(r.box_id("p").unwrap()), s, Cost::Finite(2));
        a.set_transition(fe, Label::Box(r.box_id("q").unwrap()), s, Cost::Finite(5));
        let m = superconfig_automaton(&r, &a);
        assert_eq!(m.transition_count(), 1);
        assert_eq!(m.out(fe, 0), &[(s, Cost::Finite(2))]);
        let empty = superconfig_automaton(&r, &ConfigAutomaton::new());
        assert_eq!(empty.transition_count(), 0);
    }

    #[test]
    fn node_distance_examples() {
        let (r, a) = boolean();
        let nd = node_distances(&r, &a);
        assert!(*nd.get(r.node_id("u1").unwrap()));
        assert!(*nd.get(r.node_id("e1_2").unwrap()));
        let (t, a) = trop();
        let nd = node_distances(&t, &a);
        assert_eq!(*nd.get(t.node_id("u1").unwrap()), Cost::Finite(3));
        assert_eq!(*nd.get(t.node_id("e1_1").unwrap()), Cost::Finite(0));
        // e1_2 is only entered under a b2 frame: e1_1 → e2 → e1_2.
        assert_eq!(*nd.get(t.node_id("e1_2").unwrap()), Cost::Finite(2));
    }

    #[test]
    fn same_context_examples() {
        let (t, _) = trop();
        let sc = same_context_distances(&t).unwrap();
        assert_eq!(*sc.get(t.node_id("u1").unwrap()), Cost::Finite(1));
        assert_eq!(*sc.get(t.node_id("e1_1").unwrap()), Cost::Finite(0));
        assert_eq!(*sc.get(t.node_id("e2").unwrap()), Cost::Finite(0));
        // b1.x2 is reached from e1_1 through e2 → x2 (weights 1 + 1 + 0).
        assert_eq!(*sc.get(t.node_id("b1.x2").unwrap()), Cost::Finite(2));
        let mut m = ModuleDef::new("main");
        m.entries.push("e".into());
        m.internals.push("lonely".into());
        m.transitions.push(TransitionDef::new("lonely", "lonely2", Cost::Finite(1)));
        m.internals.push("lonely2".into());
        let r = Rsm::new(Tropical::new(), &RsmDef { modules: alloc::vec![m] }).unwrap();
        let sc = same_context_distances(&r).unwrap();
        assert_eq!(*sc.get(r.node_id("lonely").unwrap()), Cost::Infinite);
    }

    #[test]
    fn blocks() {
        let (t, a) = trop();
        let m = superconfig_automaton(&t, &a);
        let one = block_precompute(&t, &m, 1, 100).unwrap();
        assert_eq!(one.sequences(), alloc::vec![alloc::vec![0, 1], alloc::vec![1, 0]]);
        let two = block_precompute(&t, &m, 2, 100).unwrap();
        assert_eq!(two.sequences(), alloc::vec![alloc::vec![0, 1, 0], alloc::vec![1, 0, 1]]);
        assert!(matches!(
            block_precompute(&t, &m, 2, 1),
            Err(Error::BudgetExceeded { needed: 2, budget: 1 })
        ));
        for z in 1..=3 {
            let table = block_precompute(&t, &m, z, 100).unwrap();
            for (node, ms) in [
                ("e1_1", &["M2", "M1", "M2", "M1"][..]),
                ("u1", &["M2", "M1"]),
                ("e2", &["M1", "M2", "M1"]),
                ("u1", &[]),
            ] {
                let sc = t.superconfig(node, ms).unwrap();
                assert_eq!(
                    superconfig_distance_blocked(&t, &m, &table, &sc).unwrap(),
                    superconfig_distance(&t, &m, &sc).unwrap()
                );
            }
            let bad = t.superconfig("u1", &["M1"]).unwrap();
            assert_eq!(superconfig_distance_blocked(&t, &m, &table, &bad).unwrap(), Cost::Infinite);
        }
    }
}
