//! Weighted pushdown systems and the classical post* saturation, used as a
//! baseline for the summary-based engine.
//!
//! The translation keeps one control state `•` for ordinary steps plus one
//! control state per exit index. Stack symbols are the configuration nodes
//! and the boxes, so `⟨u, b₁…b_r⟩` becomes `⟨•, u b₁ … b_r⟩`.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::rsm::{BoxId, Configuration, NodeId, NodeKind, Rsm};
use crate::semiring::Semiring;

pub type Control = u32;
pub type Symbol = u32;

/// The control state of ordinary steps.
pub const MAIN: Control = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rhs {
    Pop,
    Swap(Symbol),
    /// `Push(top, below)`.
    Push(Symbol, Symbol),
}

/// `⟨from, sym⟩ → ⟨to, rhs⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule<W> {
    pub from: Control,
    pub sym: Symbol,
    pub to: Control,
    pub rhs: Rhs,
    pub weight: W,
}

#[derive(Debug, Clone)]
pub struct Wpds<W> {
    controls: u32,
    symbols: u32,
    rules: Vec<Rule<W>>,
    by_head: HashMap<(Control, Symbol), Vec<u32>>,
}

impl<W> Wpds<W> {
    pub fn new(controls: u32, symbols: u32) -> Self {
        Self {
            controls,
            symbols,
            rules: Vec::new(),
            by_head: HashMap::new(),
        }
    }

    pub fn add_rule(&mut self, rule: Rule<W>) {
        assert!(rule.from < self.controls && rule.to < self.controls, "control out of range");
        let syms = match rule.rhs {
            Rhs::Pop => alloc::vec![rule.sym],
            Rhs::Swap(a) => alloc::vec![rule.sym, a],
            Rhs::Push(a, b) => alloc::vec![rule.sym, a, b],
        };
        assert!(syms.iter().all(|&g| g < self.symbols), "symbol out of range");
        self.by_head
            .entry((rule.from, rule.sym))
            .or_default()
            .push(self.rules.len() as u32);
        self.rules.push(rule);
    }

    pub fn controls(&self) -> u32 {
        self.controls
    }

    pub fn symbols(&self) -> u32 {
        self.symbols
    }

    pub fn rules(&self) -> &[Rule<W>] {
        &self.rules
    }

    fn rules_for(&self, p: Control, g: Symbol) -> &[u32] {
        self.by_head.get(&(p, g)).map_or(&[], Vec::as_slice)
    }
}

/// A pushdown configuration; `stack[0]` is the top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PdsConfig {
    pub control: Control,
    pub stack: Vec<Symbol>,
}

/// Relates RSM configurations to pushdown configurations.
#[derive(Debug, Clone)]
pub struct Correspondence {
    node_sym: Vec<Option<Symbol>>,
    box_sym: Vec<Symbol>,
    sym_node: Vec<Option<NodeId>>,
    sym_box: Vec<Option<BoxId>>,
}

impl Correspondence {
    pub fn node_symbol(&self, u: NodeId) -> Option<Symbol> {
        self.node_sym[u.idx()]
    }

    pub fn box_symbol(&self, b: BoxId) -> Symbol {
        self.box_sym[b.idx()]
    }

    /// `⟨u, b₁…b_r⟩ ↦ ⟨•, u b₁ … b_r⟩`.
    pub fn encode(&self, c: &Configuration) -> Result<PdsConfig> {
        let head = self.node_symbol(c.node).ok_or_else(|| {
            Error::IllFormedConfiguration(format!("node #{} has no stack symbol", c.node.0))
        })?;
        let mut stack = Vec::with_capacity(c.stack.len() + 1);
        stack.push(head);
        stack.extend(c.stack.iter().map(|&b| self.box_symbol(b)));
        Ok(PdsConfig { control: MAIN, stack })
    }

    /// Inverse of [`Correspondence::encode`] on its image.
    pub fn decode(&self, pc: &PdsConfig) -> Option<Configuration> {
        let (&head, rest) = pc.stack.split_first()?;
        if pc.control != MAIN {
            return None;
        }
        let node = (*self.sym_node.get(head as usize)?)?;
        let stack = rest
            .iter()
            .map(|&g| self.sym_box.get(g as usize).copied().flatten())
            .collect::<Option<Vec<_>>>()?;
        Some(Configuration::new(node, stack))
    }
}

/// Internal steps become swaps, calls pushes and exits pops into the
/// control state of the exit index; a swap from that state on a box symbol
/// lands on the matching return node.
pub fn rsm_to_wpds<S: Semiring>(rsm: &Rsm<S>) -> (Wpds<S::Elem>, Correspondence) {
    let s = rsm.semiring();
    let mut node_sym = alloc::vec![None; rsm.node_count()];
    let mut sym_node = Vec::new();
    let mut sym_box = Vec::new();
    for u in rsm.node_ids() {
        if rsm.kind(u).is_configuration_node() {
            node_sym[u.idx()] = Some(sym_node.len() as Symbol);
            sym_node.push(Some(u));
            sym_box.push(None);
        }
    }
    let mut box_sym = Vec::with_capacity(rsm.boxes().len());
    for b in rsm.box_ids() {
        box_sym.push(sym_node.len() as Symbol);
        sym_node.push(None);
        sym_box.push(Some(b));
    }
    let theta_x = rsm.modules().iter().map(|m| m.exits.len()).max().unwrap_or(0);
    let mut wpds = Wpds::new(1 + theta_x as u32, sym_node.len() as u32);
    for t in rsm.transitions() {
        let Some(from) = node_sym[t.from.idx()] else { continue };
        let (to, rhs) = match rsm.kind(t.to) {
            NodeKind::Internal => (MAIN, Rhs::Swap(node_sym[t.to.idx()].expect("configuration node"))),
            NodeKind::Call { bx, entry } => (
                MAIN,
                Rhs::Push(node_sym[entry.idx()].expect("entry symbol"), box_sym[bx.idx()]),
            ),
            NodeKind::Exit => (1 + rsm.port(t.to) as Control, Rhs::Pop),
            NodeKind::Entry | NodeKind::Return { .. } => unreachable!("validated RSM"),
        };
        wpds.add_rule(Rule {
            from: MAIN,
            sym: from,
            to,
            rhs,
            weight: t.weight.clone(),
        });
    }
    for b in rsm.box_ids() {
        let info = rsm.box_info(b);
        for (i, &ret) in info.returns.iter().enumerate() {
            wpds.add_rule(Rule {
                from: 1 + i as Control,
                sym: box_sym[b.idx()],
                to: MAIN,
                rhs: Rhs::Swap(node_sym[ret.idx()].expect("return symbol")),
                weight: s.one(),
            });
        }
    }
    (
        wpds,
        Correspondence {
            node_sym,
            box_sym,
            sym_node,
            sym_box,
        },
    )
}

pub type PState = u32;

/// `(src, sym, tgt)`; `sym == None` is an ε-transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PTransition<W> {
    pub src: PState,
    pub sym: Option<Symbol>,
    pub tgt: PState,
    pub weight: W,
}

/// A weighted P-automaton. States `0..controls` are the control states.
#[derive(Debug, Clone)]
pub struct PAutomaton<W> {
    controls: u32,
    states: u32,
    finals: Vec<bool>,
    transitions: Vec<PTransition<W>>,
    index: HashMap<(PState, Option<Symbol>, PState), u32>,
    out: Vec<Vec<u32>>,
    eps_in: Vec<Vec<u32>>,
}

impl<W: Clone> PAutomaton<W> {
    pub fn new(controls: u32) -> Self {
        Self {
            controls,
            states: controls,
            finals: alloc::vec![false; controls as usize],
            transitions: Vec::new(),
            index: HashMap::new(),
            out: alloc::vec![Vec::new(); controls as usize],
            eps_in: alloc::vec![Vec::new(); controls as usize],
        }
    }

    pub fn add_state(&mut self) -> PState {
        let q = self.states;
        self.states += 1;
        self.finals.push(false);
        self.out.push(Vec::new());
        self.eps_in.push(Vec::new());
        q
    }

    pub fn state_count(&self) -> usize {
        self.states as usize
    }

    pub fn set_final(&mut self, q: PState) {
        self.finals[q as usize] = true;
    }

    pub fn is_final(&self, q: PState) -> bool {
        self.finals[q as usize]
    }

    pub fn is_control(&self, q: PState) -> bool {
        q < self.controls
    }

    pub fn transitions(&self) -> &[PTransition<W>] {
        &self.transitions
    }

    pub fn find(&self, src: PState, sym: Option<Symbol>, tgt: PState) -> Option<u32> {
        self.index.get(&(src, sym, tgt)).copied()
    }

    pub fn add_transition(&mut self, src: PState, sym: Option<Symbol>, tgt: PState, weight: W) -> u32 {
        let id = self.transitions.len() as u32;
        self.transitions.push(PTransition { src, sym, tgt, weight });
        self.index.insert((src, sym, tgt), id);
        self.out[src as usize].push(id);
        if sym.is_none() {
            self.eps_in[tgt as usize].push(id);
        }
        id
    }

    /// Combined weight of all accepting paths for `pc`. A path may begin
    /// with one ε-transition.
    pub fn accept_weight<S: Semiring<Elem = W>>(&self, s: &S, pc: &PdsConfig) -> W {
        let mut f: HashMap<PState, W> = HashMap::new();
        f.insert(pc.control, s.one());
        for &id in &self.out[pc.control as usize] {
            let t = &self.transitions[id as usize];
            if t.sym.is_none() {
                let cur = f.remove(&t.tgt).unwrap_or_else(|| s.zero());
                f.insert(t.tgt, s.combine(&cur, &t.weight));
            }
        }
        for &g in &pc.stack {
            let mut next: HashMap<PState, W> = HashMap::new();
            for (q, v) in &f {
                for &id in &self.out[*q as usize] {
                    let t = &self.transitions[id as usize];
                    if t.sym == Some(g) {
                        let x = s.extend(&t.weight, v);
                        let cur = next.remove(&t.tgt).unwrap_or_else(|| s.zero());
                        next.insert(t.tgt, s.combine(&cur, &x));
                    }
                }
            }
            f = next;
        }
        f.iter()
            .filter(|(q, _)| self.is_final(**q))
            .fold(s.zero(), |acc, (_, v)| s.combine(&acc, v))
    }
}

/// A P-automaton accepting exactly the images of `configs`, one chain of
/// fresh states per configuration, all weights one.
pub fn p_automaton_for<S: Semiring>(
    rsm: &Rsm<S>,
    wpds: &Wpds<S::Elem>,
    corr: &Correspondence,
    configs: &[Configuration],
) -> Result<PAutomaton<S::Elem>> {
    let mut a = PAutomaton::new(wpds.controls());
    for c in configs {
        rsm.check_configuration(c)?;
        let pc = corr.encode(c)?;
        let mut q = pc.control;
        for &g in &pc.stack {
            let next = a.add_state();
            a.add_transition(q, Some(g), next, rsm.semiring().one());
            q = next;
        }
        a.set_final(q);
    }
    Ok(a)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WpdsStats {
    pub items: u64,
    pub relaxations: u64,
    pub max_relaxations_per_transition: u64,
    pub combine_ops: u64,
    pub extend_ops: u64,
}

impl WpdsStats {
    pub fn semiring_ops(&self) -> u64 {
        self.combine_ops + self.extend_ops
    }
}

#[derive(Debug, Clone)]
pub struct WpdsPostStar<W> {
    pub automaton: PAutomaton<W>,
    pub stats: WpdsStats,
}

struct Saturation<'a, S: Semiring> {
    s: &'a S,
    wpds: &'a Wpds<S::Elem>,
    a: PAutomaton<S::Elem>,
    wl: VecDeque<u32>,
    in_wl: Vec<bool>,
    counts: Vec<u64>,
    cap: u64,
    stats: WpdsStats,
}

impl<S: Semiring> Saturation<'_, S> {
    fn extend(&mut self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        self.stats.extend_ops += 1;
        self.s.extend(a, b)
    }

    fn relax(&mut self, src: PState, sym: Option<Symbol>, tgt: PState, v: S::Elem) -> Result<()> {
        if self.s.is_zero(&v) {
            return Ok(());
        }
        let id = match self.a.find(src, sym, tgt) {
            Some(id) => {
                let old = &self.a.transitions[id as usize].weight;
                self.stats.combine_ops += 1;
                let new = self.s.combine(old, &v);
                if new == *old {
                    return Ok(());
                }
                self.a.transitions[id as usize].weight = new;
                id
            }
            None => {
                let id = self.a.add_transition(src, sym, tgt, v);
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
            return Err(Error::NonTermination {
                what: format!("P-automaton transition {src} -> {tgt}"),
                count: *count,
            });
        }
        if !self.in_wl[id as usize] {
            self.in_wl[id as usize] = true;
            self.wl.push_back(id);
        }
        Ok(())
    }

    fn run(&mut self, mids: &HashMap<(Control, Symbol), PState>) -> Result<()> {
        while let Some(id) = self.wl.pop_front() {
            self.stats.items += 1;
            self.in_wl[id as usize] = false;
            let t = self.a.transitions[id as usize].clone();
            match t.sym {
                None => {
                    // Compose ⟨p, ε, q⟩ with every transition leaving q.
                    let outs = self.a.out[t.tgt as usize].clone();
                    for o in outs {
                        let u = self.a.transitions[o as usize].clone();
                        if u.sym.is_some() {
                            let v = self.extend(&u.weight, &t.weight);
                            self.relax(t.src, u.sym, u.tgt, v)?;
                        }
                    }
                }
                Some(g) if self.a.is_control(t.src) => {
                    for &r in self.wpds.rules_for(t.src, g) {
                        let rule = &self.wpds.rules[r as usize];
                        let v = self.extend(&t.weight, &rule.weight);
                        match rule.rhs {
                            Rhs::Pop => self.relax(rule.to, None, t.tgt, v)?,
                            Rhs::Swap(a) => self.relax(rule.to, Some(a), t.tgt, v)?,
                            Rhs::Push(a, b) => {
                                let mid = mids[&(rule.to, a)];
                                self.relax(rule.to, Some(a), mid, self.s.one())?;
                                self.relax(mid, Some(b), t.tgt, v)?;
                            }
                        }
                    }
                }
                Some(g) => {
                    // A transition out of a non-control state meets the
                    // ε-transitions already entering it.
                    let ins = self.a.eps_in[t.src as usize].clone();
                    for e in ins {
                        let eps = self.a.transitions[e as usize].clone();
                        let v = self.extend(&t.weight, &eps.weight);
                        self.relax(eps.src, Some(g), t.tgt, v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Weighted post* saturation. `init` must have no transitions into control
/// states.
pub fn wpds_post_star<S: Semiring>(
    s: &S,
    wpds: &Wpds<S::Elem>,
    init: &PAutomaton<S::Elem>,
    relax_cap: u64,
) -> Result<WpdsPostStar<S::Elem>> {
    if init.controls != wpds.controls() {
        return Err(Error::Precondition("P-automaton and WPDS disagree on control states".into()));
    }
    if init.transitions.iter().any(|t| init.is_control(t.tgt)) {
        return Err(Error::Precondition("P-automaton has a transition into a control state".into()));
    }
    let mut a = init.clone();
    let mut mids = HashMap::new();
    for r in wpds.rules() {
        if let Rhs::Push(top, _) = r.rhs {
            if !mids.contains_key(&(r.to, top)) {
                let q = a.add_state();
                mids.insert((r.to, top), q);
            }
        }
    }
    let n = a.transitions.len();
    let mut sat = Saturation {
        s,
        wpds,
        a,
        wl: (0..n as u32).collect(),
        in_wl: alloc::vec![true; n],
        counts: alloc::vec![0; n],
        cap: relax_cap,
        stats: WpdsStats::default(),
    };
    sat.run(&mids)?;
    Ok(WpdsPostStar {
        automaton: sat.a,
        stats: sat.stats,
    })
}
