//! Weighted recursive state machines.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::semiring::Semiring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxId(pub u32);

impl NodeId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl BoxId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Name-based description of an RSM, as read from a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsmDef<W> {
    pub modules: Vec<ModuleDef<W>>,
}

impl<W> RsmDef<W> {
    /// Replaces every transition weight.
    pub fn map_weights<V>(self, mut f: impl FnMut(W) -> V) -> RsmDef<V> {
        RsmDef {
            modules: self
                .modules
                .into_iter()
                .map(|m| ModuleDef {
                    name: m.name,
                    entries: m.entries,
                    exits: m.exits,
                    internals: m.internals,
                    boxes: m.boxes,
                    transitions: m
                        .transitions
                        .into_iter()
                        .map(|t| TransitionDef::new(t.from, t.to, f(t.weight)))
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDef<W> {
    pub name: String,
    pub entries: Vec<String>,
    pub exits: Vec<String>,
    pub internals: Vec<String>,
    pub boxes: Vec<BoxDef>,
    pub transitions: Vec<TransitionDef<W>>,
}

impl<W> ModuleDef<W> {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            entries: Vec::new(),
            exits: Vec::new(),
            internals: Vec::new(),
            boxes: Vec::new(),
            transitions: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxDef {
    pub name: String,
    pub callee: usize,
}

/// A transition between named nodes. Call and return nodes are written
/// `box.entry` and `box.exit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDef<W> {
    pub from: String,
    pub to: String,
    pub weight: W,
}

impl<W> TransitionDef<W> {
    pub fn new(from: impl Into<String>, to: impl Into<String>, weight: W) -> Self {
        Self {
            from: from.into(),
            to: to.into(),
            weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Internal,
    Entry,
    Exit,
    Call { bx: BoxId, entry: NodeId },
    Return { bx: BoxId, exit: NodeId },
}

impl NodeKind {
    /// Internal, entry and return nodes are the nodes a configuration may sit at.
    pub fn is_configuration_node(self) -> bool {
        matches!(self, NodeKind::Internal | NodeKind::Entry | NodeKind::Return { .. })
    }

    fn word(self) -> &'static str {
        match self {
            NodeKind::Internal => "internal",
            NodeKind::Entry => "entry",
            NodeKind::Exit => "exit",
            NodeKind::Call { .. } => "call",
            NodeKind::Return { .. } => "return",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeInfo {
    pub name: String,
    pub module: usize,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxInfo {
    pub name: String,
    pub owner: usize,
    pub callee: usize,
    /// Call nodes, in the order of the callee's entries.
    pub calls: Vec<NodeId>,
    /// Return nodes, in the order of the callee's exits.
    pub returns: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    pub name: String,
    pub entries: Vec<NodeId>,
    pub exits: Vec<NodeId>,
    pub internals: Vec<NodeId>,
    pub boxes: Vec<BoxId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition<W> {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: W,
}

/// A structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyName { module: String },
    DuplicateModule(String),
    DuplicateNode(String),
    DuplicateBox(String),
    BoxCalleeOutOfRange { bx: String, callee: usize },
    UnknownNode { module: String, node: String },
    CrossModule { from: String, to: String },
    BadSource { node: String, kind: &'static str },
    BadTarget { node: String, kind: &'static str },
    DuplicateTransition { from: String, to: String },
    BadWeight { from: String, to: String, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyName { module } => write!(f, "empty name in module `{module}`"),
            Violation::DuplicateModule(m) => write!(f, "duplicate module name `{m}`"),
            Violation::DuplicateNode(n) => write!(f, "duplicate node name `{n}`"),
            Violation::DuplicateBox(b) => write!(f, "duplicate box name `{b}`"),
            Violation::BoxCalleeOutOfRange { bx, callee } => {
                write!(f, "box `{bx}` calls module index {callee}, which does not exist")
            }
            Violation::UnknownNode { module, node } => {
                write!(f, "transition in module `{module}` mentions unknown node `{node}`")
            }
            Violation::CrossModule { from, to } => {
                write!(f, "transition {from} -> {to} crosses modules")
            }
            Violation::BadSource { node, kind } => {
                write!(f, "{kind} node as transition source (`{node}`)")
            }
            Violation::BadTarget { node, kind } => {
                write!(f, "{kind} node as transition target (`{node}`)")
            }
            Violation::DuplicateTransition { from, to } => {
                write!(f, "duplicate transition {from} -> {to}")
            }
            Violation::BadWeight { from, to, reason } => {
                write!(f, "weight of {from} -> {to} rejected: {reason}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

struct NameTable {
    modules: HashMap<String, usize>,
    nodes: HashMap<String, (usize, NodeKind)>,
}

/// Resolves every node name of `def`, recording duplicate names.
fn name_table<W>(def: &RsmDef<W>, report: &mut ValidationReport) -> NameTable {
    let mut modules = HashMap::new();
    let mut nodes: HashMap<String, (usize, NodeKind)> = HashMap::new();
    let mut boxes = HashSet::new();
    let placeholder = NodeId(u32::MAX);
    let mut add = |name: &str, m: usize, kind: NodeKind, report: &mut ValidationReport| {
        if name.is_empty() {
            report.violations.push(Violation::EmptyName {
                module: def.modules[m].name.clone(),
            });
        } else if nodes.insert(name.to_string(), (m, kind)).is_some() {
            report.violations.push(Violation::DuplicateNode(name.to_string()));
        }
    };
    for (m, module) in def.modules.iter().enumerate() {
        if modules.insert(module.name.clone(), m).is_some() {
            report.violations.push(Violation::DuplicateModule(module.name.clone()));
        }
        for n in &module.entries {
            add(n, m, NodeKind::Entry, report);
        }
        for n in &module.exits {
            add(n, m, NodeKind::Exit, report);
        }
        for n in &module.internals {
            add(n, m, NodeKind::Internal, report);
        }
    }
    for (m, module) in def.modules.iter().enumerate() {
        for b in &module.boxes {
            if b.name.is_empty() {
                report.violations.push(Violation::EmptyName {
                    module: module.name.clone(),
                });
            }
            if !boxes.insert(b.name.as_str()) {
                report.violations.push(Violation::DuplicateBox(b.name.clone()));
            }
            let Some(callee) = def.modules.get(b.callee) else {
                report.violations.push(Violation::BoxCalleeOutOfRange {
                    bx: b.name.clone(),
                    callee: b.callee,
                });
                continue;
            };
            for e in &callee.entries {
                let kind = NodeKind::Call { bx: BoxId(u32::MAX), entry: placeholder };
                add(&format!("{}.{}", b.name, e), m, kind, report);
            }
            for x in &callee.exits {
                let kind = NodeKind::Return { bx: BoxId(u32::MAX), exit: placeholder };
                add(&format!("{}.{}", b.name, x), m, kind, report);
            }
        }
    }
    NameTable { modules, nodes }
}

/// Checks every structural constraint of an RSM description. Weights are
/// checked against the semiring instance.
pub fn validate<S: Semiring>(semiring: &S, def: &RsmDef<S::Elem>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let table = name_table(def, &mut report);
    for module in &def.modules {
        let mut seen = HashSet::new();
        for t in &module.transitions {
            let mut ok = true;
            for n in [&t.from, &t.to] {
                if !table.nodes.contains_key(n.as_str()) {
                    report.violations.push(Violation::UnknownNode {
                        module: module.name.clone(),
                        node: n.clone(),
                    });
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            let (fm, fk) = table.nodes[t.from.as_str()];
            let (tm, tk) = table.nodes[t.to.as_str()];
            let here = table.modules.get(&module.name).copied();
            if fm != tm || here.is_some_and(|h| h != fm) {
                report.violations.push(Violation::CrossModule {
                    from: t.from.clone(),
                    to: t.to.clone(),
                });
            }
            if !fk.is_configuration_node() {
                report.violations.push(Violation::BadSource {
                    node: t.from.clone(),
                    kind: fk.word(),
                });
            }
            if matches!(tk, NodeKind::Entry | NodeKind::Return { .. }) {
                report.violations.push(Violation::BadTarget {
                    node: t.to.clone(),
                    kind: tk.word(),
                });
            }
            if !seen.insert((t.from.as_str(), t.to.as_str())) {
                report.violations.push(Violation::DuplicateTransition {
                    from: t.from.clone(),
                    to: t.to.clone(),
                });
            }
            if let Err(e) = semiring.check(&t.weight) {
                report.violations.push(Violation::BadWeight {
                    from: t.from.clone(),
                    to: t.to.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    report
}

/// Size parameters of an RSM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub nodes: usize,
    pub transitions: usize,
    /// `max(|N|, Σ|δᵢ|)`.
    pub size: usize,
    pub theta_e: usize,
    pub theta_x: usize,
    pub calls: usize,
    pub modules: usize,
}

/// A configuration `⟨u, S⟩`; `stack[0]` is the top box.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub node: NodeId,
    pub stack: Vec<BoxId>,
}

impl Configuration {
    pub fn new(node: NodeId, stack: Vec<BoxId>) -> Self {
        Self { node, stack }
    }
}

/// A node together with a sequence of modules; `modules[0]` is the top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Superconfiguration {
    pub node: NodeId,
    pub modules: Vec<usize>,
}

/// A validated, indexed RSM over semiring `S`.
#[derive(Debug, Clone)]
pub struct Rsm<S: Semiring> {
    semiring: S,
    modules: Vec<Module>,
    nodes: Vec<NodeInfo>,
    boxes: Vec<BoxInfo>,
    transitions: Vec<Transition<S::Elem>>,
    out: Vec<Vec<u32>>,
    callers: Vec<Vec<BoxId>>,
    node_index: HashMap<String, NodeId>,
    box_index: HashMap<String, BoxId>,
    module_index: HashMap<String, usize>,
    /// Position of each entry or exit in its module's list.
    port: Vec<u32>,
}

impl<S: Semiring> Rsm<S> {
    /// Validates `def` and builds the indexed form.
    pub fn new(semiring: S, def: &RsmDef<S::Elem>) -> Result<Self> {
        let report = validate(&semiring, def);
        if !report.is_empty() {
            return Err(Error::InvalidRsm(report));
        }
        let mut nodes: Vec<NodeInfo> = Vec::new();
        let mut node_index = HashMap::new();
        let mut push = |name: String, module: usize, kind: NodeKind, nodes: &mut Vec<NodeInfo>| {
            let id = NodeId(nodes.len() as u32);
            node_index.insert(name.clone(), id);
            nodes.push(NodeInfo { name, module, kind });
            id
        };
        let mut modules = Vec::with_capacity(def.modules.len());
        for (m, md) in def.modules.iter().enumerate() {
            let entries = md.entries.iter().map(|n| push(n.clone(), m, NodeKind::Entry, &mut nodes)).collect();
            let exits = md.exits.iter().map(|n| push(n.clone(), m, NodeKind::Exit, &mut nodes)).collect();
            let internals = md
                .internals
                .iter()
                .map(|n| push(n.clone(), m, NodeKind::Internal, &mut nodes))
                .collect();
            modules.push(Module {
                name: md.name.clone(),
                entries,
                exits,
                internals,
                boxes: Vec::new(),
            });
        }
        let mut boxes = Vec::new();
        let mut box_index = HashMap::new();
        let mut callers = alloc::vec![Vec::new(); def.modules.len()];
        for (m, md) in def.modules.iter().enumerate() {
            for bd in &md.boxes {
                let bx = BoxId(boxes.len() as u32);
                let callee = &modules[bd.callee];
                let calls = callee
                    .entries
                    .clone()
                    .into_iter()
                    .map(|e: NodeId| {
                        let name = format!("{}.{}", bd.name, nodes[e.idx()].name);
                        push(name, m, NodeKind::Call { bx, entry: e }, &mut nodes)
                    })
                    .collect();
                let returns = callee
                    .exits
                    .clone()
                    .into_iter()
                    .map(|x: NodeId| {
                        let name = format!("{}.{}", bd.name, nodes[x.idx()].name);
                        push(name, m, NodeKind::Return { bx, exit: x }, &mut nodes)
                    })
                    .collect();
                box_index.insert(bd.name.clone(), bx);
                boxes.push(BoxInfo {
                    name: bd.name.clone(),
                    owner: m,
                    callee: bd.callee,
                    calls,
                    returns,
                });
                modules[m].boxes.push(bx);
                callers[bd.callee].push(bx);
            }
        }
        let mut transitions = Vec::new();
        let mut out = alloc::vec![Vec::new(); nodes.len()];
        for md in &def.modules {
            for t in &md.transitions {
                let from = node_index[t.from.as_str()];
                let to = node_index[t.to.as_str()];
                out[from.idx()].push(transitions.len() as u32);
                transitions.push(Transition {
                    from,
                    to,
                    weight: t.weight.clone(),
                });
            }
        }
        let module_index = modules.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
        let mut port = alloc::vec![0u32; nodes.len()];
        for m in &modules {
            for (i, &u) in m.entries.iter().chain(m.exits.iter()).enumerate() {
                port[u.idx()] = if i < m.entries.len() { i } else { i - m.entries.len() } as u32;
            }
        }
        Ok(Self {
            semiring,
            modules,
            nodes,
            boxes,
            transitions,
            out,
            callers,
            node_index,
            box_index,
            module_index,
            port,
        })
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn module(&self, m: usize) -> &Module {
        &self.modules[m]
    }

    pub fn nodes(&self) -> &[NodeInfo] {
        &self.nodes
    }

    pub fn node(&self, u: NodeId) -> &NodeInfo {
        &self.nodes[u.idx()]
    }

    #[inline]
    pub fn kind(&self, u: NodeId) -> NodeKind {
        self.nodes[u.idx()].kind
    }

    #[inline]
    pub fn module_of(&self, u: NodeId) -> usize {
        self.nodes[u.idx()].module
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn boxes(&self) -> &[BoxInfo] {
        &self.boxes
    }

    pub fn box_info(&self, b: BoxId) -> &BoxInfo {
        &self.boxes[b.idx()]
    }

    pub fn box_ids(&self) -> impl Iterator<Item = BoxId> {
        (0..self.boxes.len() as u32).map(BoxId)
    }

    /// Boxes whose callee is module `m`.
    pub fn callers(&self, m: usize) -> &[BoxId] {
        &self.callers[m]
    }

    pub fn transitions(&self) -> &[Transition<S::Elem>] {
        &self.transitions
    }

    /// Outgoing transitions of `u`, in declaration order.
    #[inline]
    pub fn outgoing(&self, u: NodeId) -> impl Iterator<Item = &Transition<S::Elem>> + '_ {
        self.out[u.idx()].iter().map(move |&t| &self.transitions[t as usize])
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId> {
        self.node_index.get(name).copied().ok_or_else(|| Error::Unknown {
            kind: "node",
            name: name.to_string(),
        })
    }

    pub fn box_id(&self, name: &str) -> Result<BoxId> {
        self.box_index.get(name).copied().ok_or_else(|| Error::Unknown {
            kind: "box",
            name: name.to_string(),
        })
    }

    pub fn module_id(&self, name: &str) -> Result<usize> {
        self.module_index.get(name).copied().ok_or_else(|| Error::Unknown {
            kind: "module",
            name: name.to_string(),
        })
    }

    /// Call node `(b, e)`.
    pub fn call_node(&self, b: BoxId, entry: NodeId) -> Option<NodeId> {
        let info = &self.boxes[b.idx()];
        if self.kind(entry) != NodeKind::Entry || self.module_of(entry) != info.callee {
            return None;
        }
        Some(info.calls[self.port[entry.idx()] as usize])
    }

    /// Return node `(b, x)`.
    pub fn return_node(&self, b: BoxId, exit: NodeId) -> Option<NodeId> {
        let info = &self.boxes[b.idx()];
        if self.kind(exit) != NodeKind::Exit || self.module_of(exit) != info.callee {
            return None;
        }
        Some(info.returns[self.port[exit.idx()] as usize])
    }

    /// Index of an entry among its module's entries, or of an exit among
    /// its module's exits.
    #[inline]
    pub fn port(&self, u: NodeId) -> usize {
        self.port[u.idx()] as usize
    }

    pub fn metrics(&self) -> Metrics {
        let theta_e = self.modules.iter().map(|m| m.entries.len()).max().unwrap_or(0);
        let theta_x = self.modules.iter().map(|m| m.exits.len()).max().unwrap_or(0);
        let calls = self.boxes.iter().map(|b| b.calls.len()).sum();
        Metrics {
            nodes: self.nodes.len(),
            transitions: self.transitions.len(),
            size: self.nodes.len().max(self.transitions.len()),
            theta_e,
            theta_x,
            calls,
            modules: self.modules.len(),
        }
    }

    /// Whether every transition into an exit node has weight one.
    pub fn is_normalized(&self) -> bool {
        self.transitions
            .iter()
            .all(|t| self.kind(t.to) != NodeKind::Exit || self.semiring.is_one(&t.weight))
    }

    /// Builds a configuration from names; `stack[0]` is the top box.
    pub fn config(&self, node: &str, stack: &[&str]) -> Result<Configuration> {
        let node = self.node_id(node)?;
        let stack = stack.iter().map(|b| self.box_id(b)).collect::<Result<Vec<_>>>()?;
        let c = Configuration { node, stack };
        self.check_configuration(&c)?;
        Ok(c)
    }

    pub fn superconfig(&self, node: &str, modules: &[&str]) -> Result<Superconfiguration> {
        let node = self.node_id(node)?;
        let modules = modules.iter().map(|m| self.module_id(m)).collect::<Result<Vec<_>>>()?;
        Ok(Superconfiguration { node, modules })
    }

    /// Checks node kind and the chain condition of the stack.
    pub fn check_configuration(&self, c: &Configuration) -> Result<()> {
        let bad = |msg: String| Err(Error::IllFormedConfiguration(msg));
        let Some(info) = self.nodes.get(c.node.idx()) else {
            return bad(format!("node id {} out of range", c.node.0));
        };
        if !info.kind.is_configuration_node() {
            return bad(format!("`{}` is {} node", info.name, info.kind.word()));
        }
        let mut module = info.module;
        for b in &c.stack {
            let Some(bi) = self.boxes.get(b.idx()) else {
                return bad(format!("box id {} out of range", b.0));
            };
            if bi.callee != module {
                return bad(format!(
                    "box `{}` calls `{}`, not `{}`",
                    bi.name, self.modules[bi.callee].name, self.modules[module].name
                ));
            }
            module = bi.owner;
        }
        Ok(())
    }

    /// Successors of `c` with the weight of the step taken.
    pub fn step(&self, c: &Configuration) -> Result<Vec<(Configuration, S::Elem)>> {
        self.check_configuration(c)?;
        let mut out = Vec::new();
        for t in self.outgoing(c.node) {
            match self.kind(t.to) {
                NodeKind::Internal => out.push((Configuration::new(t.to, c.stack.clone()), t.weight.clone())),
                NodeKind::Call { bx, entry } => {
                    let mut stack = Vec::with_capacity(c.stack.len() + 1);
                    stack.push(bx);
                    stack.extend_from_slice(&c.stack);
                    out.push((Configuration::new(entry, stack), t.weight.clone()));
                }
                NodeKind::Exit => {
                    if let Some((&b, rest)) = c.stack.split_first() {
                        let ret = self.return_node(b, t.to).expect("chain condition guarantees the return node");
                        out.push((Configuration::new(ret, rest.to_vec()), t.weight.clone()));
                    }
                }
                NodeKind::Entry | NodeKind::Return { .. } => unreachable!("validated RSM"),
            }
        }
        Ok(out)
    }

    /// Parses `node [b1,b2]`; the bracket part may be omitted for an empty
    /// stack.
    pub fn parse_config(&self, text: &str) -> Result<Configuration> {
        let text = text.trim();
        let (node, stack) = match text.find('[') {
            Some(i) => {
                let inner = text[i + 1..]
                    .trim_end()
                    .strip_suffix(']')
                    .ok_or_else(|| Error::IllFormedConfiguration(format!("missing `]` in `{text}`")))?;
                (text[..i].trim(), inner)
            }
            None => (text, ""),
        };
        let boxes: Vec<&str> = stack.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        self.config(node, &boxes)
    }

    pub fn fmt_config(&self, c: &Configuration) -> String {
        let stack: Vec<&str> = c.stack.iter().map(|b| self.boxes[b.idx()].name.as_str()).collect();
        format!("{} [{}]", self.nodes[c.node.idx()].name, stack.join(","))
    }

    pub fn fmt_superconfig(&self, sc: &Superconfiguration) -> String {
        let ms: Vec<&str> = sc.modules.iter().map(|&m| self.modules[m].name.as_str()).collect();
        format!("{} [{}]", self.nodes[sc.node.idx()].name, ms.join(","))
    }

    /// Recovers the name-based description.
    pub fn to_def(&self) -> RsmDef<S::Elem> {
        let names = |ids: &[NodeId]| ids.iter().map(|n| self.nodes[n.idx()].name.clone()).collect();
        let mut modules: Vec<ModuleDef<S::Elem>> = self
            .modules
            .iter()
            .map(|m| ModuleDef {
                name: m.name.clone(),
                entries: names(&m.entries),
                exits: names(&m.exits),
                internals: names(&m.internals),
                boxes: m
                    .boxes
                    .iter()
                    .map(|b| BoxDef {
                        name: self.boxes[b.idx()].name.clone(),
                        callee: self.boxes[b.idx()].callee,
                    })
                    .collect(),
                transitions: Vec::new(),
            })
            .collect();
        for t in &self.transitions {
            modules[self.module_of(t.from)].transitions.push(TransitionDef {
                from: self.nodes[t.from.idx()].name.clone(),
                to: self.nodes[t.to.idx()].name.clone(),
                weight: t.weight.clone(),
            });
        }
        RsmDef { modules }
    }
}

impl<S: Semiring + Clone> Rsm<S> {
    /// Splits every transition `(u, x, w)` into an exit with `w ≠ 1̄` into
    /// `(u, u', w)` and `(u', x, 1̄)` through a fresh internal node `u'`.
    pub fn normalize_exit_weights(&self) -> Rsm<S> {
        if self.is_normalized() {
            return self.clone();
        }
        let mut def = self.to_def();
        let mut taken: HashSet<String> = self.node_index.keys().cloned().collect();
        let one = self.semiring.one();
        for module in &mut def.modules {
            let mut rewritten = Vec::with_capacity(module.transitions.len());
            for t in core::mem::take(&mut module.transitions) {
                let to = self.node_index[t.to.as_str()];
                if self.kind(to) != NodeKind::Exit || self.semiring.is_one(&t.weight) {
                    rewritten.push(t);
                    continue;
                }
                let base = format!("{}~{}", t.from, t.to);
                let mut aux = base.clone();
                let mut k = 1;
                while taken.contains(&aux) {
                    aux = format!("{base}~{k}");
                    k += 1;
                }
                taken.insert(aux.clone());
                module.internals.push(aux.clone());
                rewritten.push(TransitionDef::new(t.from, aux.clone(), t.weight));
                rewritten.push(TransitionDef::new(aux, t.to, one.clone()));
            }
            module.transitions = rewritten;
        }
        Rsm::new(self.semiring.clone(), &def).expect("normalization keeps the RSM well-formed")
    }
}
