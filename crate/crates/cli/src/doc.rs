//! JSON documents: RSMs, configuration automata, queries and concurrent RSMs.

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

use wrsm::automaton::{ConfigAutomaton, Label, StateId};
use wrsm::concurrent::{ComponentDef, CrsmDef};
use wrsm::rsm::{BoxDef, ModuleDef, Rsm, RsmDef, TransitionDef};
use wrsm::semiring::{Cost, GenKill, GenKillValue, SemiringSpec, Value};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("transition {from} -> {to} in module `{module}`: {msg}")]
    Weight {
        module: String,
        from: String,
        to: String,
        msg: String,
    },
    #[error("box `{bx}` calls unknown module `{callee}`")]
    UnknownCallee { bx: String, callee: String },
    #[error("automaton transition {index}: {msg}")]
    Transition { index: usize, msg: String },
    #[error(transparent)]
    Model(#[from] wrsm::Error),
}

impl From<wrsm::SemiringError> for DocError {
    fn from(e: wrsm::SemiringError) -> Self {
        DocError::Model(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RsmDocument {
    pub semiring: String,
    pub modules: Vec<ModuleDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub name: String,
    #[serde(default)]
    pub entries: Vec<String>,
    #[serde(default)]
    pub exits: Vec<String>,
    #[serde(default)]
    pub internals: Vec<String>,
    #[serde(default)]
    pub boxes: Vec<BoxDoc>,
    #[serde(default)]
    pub transitions: Vec<TransitionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxDoc {
    pub name: String,
    pub calls: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub to: String,
    pub weight: Json,
}

/// Reads a weight: `true`/`false`, a non-negative integer or `"inf"`, or
/// `{"kill": [...], "gen": [...]}` (and `"zero"`) depending on `spec`.
pub fn parse_weight(spec: &SemiringSpec, w: &Json) -> Result<Value, String> {
    match spec {
        SemiringSpec::Boolean(_) => w.as_bool().map(Value::Bool).ok_or_else(|| format!("expected true or false, found {w}")),
        SemiringSpec::Tropical(t) => match w {
            Json::String(s) if s == "inf" => Ok(Value::Cost(Cost::Infinite)),
            Json::Number(n) => n
                .as_u64()
                .map(|v| Value::Cost(t.cost(v)))
                .ok_or_else(|| format!("expected a non-negative integer, found {n}")),
            _ => Err(format!("expected a non-negative integer or \"inf\", found {w}")),
        },
        SemiringSpec::GenKill(g) => parse_genkill(g, w).map(Value::GenKill),
    }
}

fn parse_genkill(g: &GenKill, w: &Json) -> Result<GenKillValue, String> {
    if w.as_str() == Some("zero") {
        return Ok(GenKillValue::Zero);
    }
    let obj = w.as_object().ok_or_else(|| format!("expected {{\"kill\": [...], \"gen\": [...]}}, found {w}"))?;
    if let Some(k) = obj.keys().find(|k| *k != "kill" && *k != "gen") {
        return Err(format!("unknown field `{k}` in gen/kill weight"));
    }
    let names = |key: &str| -> Result<Vec<&str>, String> {
        match obj.get(key) {
            None => Ok(Vec::new()),
            Some(Json::Array(xs)) => xs
                .iter()
                .map(|x| x.as_str().ok_or_else(|| format!("`{key}` must list fact names")))
                .collect(),
            Some(_) => Err(format!("`{key}` must be an array")),
        }
    };
    g.transfer_named(&names("kill")?, &names("gen")?).map_err(|e| e.to_string())
}

pub fn weight_to_json(spec: &SemiringSpec, w: &Value) -> Json {
    match (spec, w) {
        (_, Value::Bool(b)) => Json::Bool(*b),
        (_, Value::Cost(Cost::Finite(v))) => Json::from(*v),
        (_, Value::Cost(Cost::Infinite)) => Json::from("inf"),
        (_, Value::GenKill(GenKillValue::Zero)) => Json::from("zero"),
        (SemiringSpec::GenKill(g), Value::GenKill(GenKillValue::Transfer { kill, gen })) => {
            let names = |s: &wrsm::semiring::FactSet| -> Vec<Json> {
                s.iter().map(|i| Json::from(g.facts()[i].as_str())).collect()
            };
            serde_json::json!({ "kill": names(kill), "gen": names(gen) })
        }
        _ => Json::Null,
    }
}

fn modules_to_def<W>(
    modules: &[ModuleDoc],
    mut weight: impl FnMut(&ModuleDoc, &TransitionDoc) -> Result<W, DocError>,
) -> Result<RsmDef<W>, DocError> {
    let mut out = Vec::with_capacity(modules.len());
    for m in modules {
        let mut def = ModuleDef::new(m.name.clone());
        def.entries = m.entries.clone();
        def.exits = m.exits.clone();
        def.internals = m.internals.clone();
        for b in &m.boxes {
            let callee = modules.iter().position(|x| x.name == b.calls).ok_or_else(|| DocError::UnknownCallee {
                bx: b.name.clone(),
                callee: b.calls.clone(),
            })?;
            def.boxes.push(BoxDef { name: b.name.clone(), callee });
        }
        for t in &m.transitions {
            def.transitions.push(TransitionDef::new(t.from.clone(), t.to.clone(), weight(m, t)?));
        }
        out.push(def);
    }
    Ok(RsmDef { modules: out })
}

fn def_to_modules<W>(def: &RsmDef<W>, mut weight: impl FnMut(&W) -> Json) -> Vec<ModuleDoc> {
    def.modules
        .iter()
        .map(|m| ModuleDoc {
            name: m.name.clone(),
            entries: m.entries.clone(),
            exits: m.exits.clone(),
            internals: m.internals.clone(),
            boxes: m
                .boxes
                .iter()
                .map(|b| BoxDoc { name: b.name.clone(), calls: def.modules[b.callee].name.clone() })
                .collect(),
            transitions: m
                .transitions
                .iter()
                .map(|t| TransitionDoc { from: t.from.clone(), to: t.to.clone(), weight: weight(&t.weight) })
                .collect(),
        })
        .collect()
}

impl RsmDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn semiring(&self) -> Result<SemiringSpec, DocError> {
        Ok(SemiringSpec::from_name(&self.semiring)?)
    }

    pub fn to_def(&self) -> Result<(SemiringSpec, RsmDef<Value>), DocError> {
        let spec = self.semiring()?;
        let def = modules_to_def(&self.modules, |m, t| {
            parse_weight(&spec, &t.weight).map_err(|msg| DocError::Weight {
                module: m.name.clone(),
                from: t.from.clone(),
                to: t.to.clone(),
                msg,
            })
        })?;
        Ok((spec, def))
    }

    pub fn to_rsm(&self) -> Result<Rsm<SemiringSpec>, DocError> {
        let (spec, def) = self.to_def()?;
        Ok(Rsm::new(spec, &def)?)
    }

    pub fn from_rsm(rsm: &Rsm<SemiringSpec>) -> Self {
        let spec = rsm.semiring();
        RsmDocument {
            semiring: spec.name(),
            modules: def_to_modules(&rsm.to_def(), |w| weight_to_json(spec, w)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDocument {
    pub semiring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fresh: Option<u32>,
    pub states: Vec<StateDoc>,
    #[serde(default)]
    pub transitions: Vec<AutTransitionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub node: String,
    pub mark: u32,
    #[serde(default, skip_serializing_if = "is_false")]
    pub initial: bool,
    #[serde(default, rename = "final", skip_serializing_if = "is_false")]
    pub is_final: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// An automaton transition between state indices; a missing `box` means ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutTransitionDoc {
    pub from: usize,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub bx: Option<String>,
    pub to: usize,
    pub weight: Json,
}

impl AutomatonDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_automaton(rsm: &Rsm<SemiringSpec>, aut: &ConfigAutomaton<Value>) -> Self {
        let spec = rsm.semiring();
        let states = aut
            .state_ids()
            .map(|q| StateDoc {
                node: rsm.node(aut.node_of(q)).name.clone(),
                mark: aut.mark_of(q),
                initial: aut.is_explicitly_initial(q),
                is_final: aut.is_final(q),
            })
            .collect();
        let transitions = aut
            .transitions()
            .iter()
            .map(|t| AutTransitionDoc {
                from: t.src.idx(),
                bx: match t.label {
                    Label::Eps => None,
                    Label::Box(b) => Some(rsm.box_info(b).name.clone()),
                },
                to: t.tgt.idx(),
                weight: weight_to_json(spec, &t.weight),
            })
            .collect();
        AutomatonDocument {
            semiring: spec.name(),
            fresh: aut.fresh_mark(),
            states,
            transitions,
        }
    }

    pub fn to_automaton(&self, rsm: &Rsm<SemiringSpec>) -> Result<ConfigAutomaton<Value>, DocError> {
        let spec = rsm.semiring();
        if SemiringSpec::from_name(&self.semiring)? != *spec {
            return Err(DocError::Model(wrsm::Error::Precondition(format!(
                "automaton is over `{}`, the RSM over `{}`",
                self.semiring,
                spec.name()
            ))));
        }
        let mut aut = ConfigAutomaton::new();
        let mut ids = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let u = rsm.node_id(&s.node)?;
            if aut.state(u, s.mark).is_some() {
                return Err(DocError::Model(wrsm::Error::Precondition(format!(
                    "duplicate state ({}, {})",
                    s.node, s.mark
                ))));
            }
            let q = aut.add_state(u, s.mark);
            aut.set_initial(q, s.initial);
            aut.set_final(q, s.is_final);
            ids.push(q);
        }
        aut.set_fresh_mark(self.fresh);
        let state = |i: usize, index: usize| -> Result<StateId, DocError> {
            ids.get(i).copied().ok_or_else(|| DocError::Transition { index, msg: format!("no state {i}") })
        };
        for (index, t) in self.transitions.iter().enumerate() {
            let src = state(t.from, index)?;
            let tgt = state(t.to, index)?;
            let label = match &t.bx {
                None => Label::Eps,
                Some(b) => Label::Box(rsm.box_id(b)?),
            };
            let w = parse_weight(spec, &t.weight).map_err(|msg| DocError::Transition { index, msg })?;
            aut.set_transition(src, label, tgt, w);
        }
        Ok(aut)
    }
}

/// One query; stacks list boxes and module stacks list modules, top first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Query {
    Config {
        node: String,
        #[serde(default)]
        stack: Vec<String>,
    },
    Superconfig {
        node: String,
        #[serde(default)]
        modules: Vec<String>,
    },
    Node {
        node: String,
    },
    SameContext {
        node: String,
    },
}

impl Query {
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Config { .. } => "config",
            Query::Superconfig { .. } => "superconfig",
            Query::Node { .. } => "node",
            Query::SameContext { .. } => "same-context",
        }
    }

    /// The query input as printed in result lines.
    pub fn input(&self) -> String {
        match self {
            Query::Config { node, stack } => format!("{node} [{}]", stack.join(",")),
            Query::Superconfig { node, modules } => format!("{node} [{}]", modules.join(",")),
            Query::Node { node } | Query::SameContext { node } => node.clone(),
        }
    }
}

pub fn parse_queries(text: &str) -> Result<Vec<Query>, DocError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrsmDocument {
    pub globals: Vec<String>,
    pub components: Vec<ComponentDoc>,
}

/// A component's node names carry their global state as `local@global`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub name: String,
    pub modules: Vec<ModuleDoc>,
    pub initial: InitialDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDoc {
    pub node: String,
    #[serde(default)]
    pub stack: Vec<String>,
}

impl CrsmDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn to_def(&self) -> Result<CrsmDef, DocError> {
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let rsm = modules_to_def(&c.modules, |m, t| {
                t.weight.as_bool().ok_or_else(|| DocError::Weight {
                    module: m.name.clone(),
                    from: t.from.clone(),
                    to: t.to.clone(),
                    msg: format!("expected true, found {}", t.weight),
                })
            })?;
            components.push(ComponentDef {
                name: c.name.clone(),
                rsm,
                initial: (c.initial.node.clone(), c.initial.stack.clone()),
            });
        }
        Ok(CrsmDef { globals: self.globals.clone(), components })
    }

    pub fn from_def(def: &CrsmDef) -> Self {
        CrsmDocument {
            globals: def.globals.clone(),
            components: def
                .components
                .iter()
                .map(|c| ComponentDoc {
                    name: c.name.clone(),
                    modules: def_to_modules(&c.rsm, |w| Json::Bool(*w)),
                    initial: InitialDoc { node: c.initial.0.clone(), stack: c.initial.1.clone() },
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wrsm::semiring::Tropical;

    #[test]
    fn tropical_weights() {
        let t = SemiringSpec::Tropical(Tropical::new());
        assert_eq!(parse_weight(&t, &serde_json::json!(4)), Ok(Value::Cost(Cost::Finite(4))));
        assert_eq!(parse_weight(&t, &serde_json::json!("inf")), Ok(Value::Cost(Cost::Infinite)));
        assert!(parse_weight(&t, &serde_json::json!(-1)).is_err());
        assert!(parse_weight(&t, &serde_json::json!(true)).is_err());
    }

    #[test]
    fn genkill_weights() {
        let g = SemiringSpec::from_name("genkill:a,b").unwrap();
        let w = parse_weight(&g, &serde_json::json!({"kill": ["a"], "gen": ["b"]})).unwrap();
        assert_eq!(weight_to_json(&g, &w), serde_json::json!({"kill": ["a"], "gen": ["b"]}));
        assert_eq!(parse_weight(&g, &serde_json::json!("zero")), Ok(Value::GenKill(GenKillValue::Zero)));
        assert!(parse_weight(&g, &serde_json::json!({"kill": ["z"]})).is_err());
        assert!(parse_weight(&g, &serde_json::json!({"gens": []})).is_err());
    }

    #[test]
    fn queries() {
        let q = parse_queries(
            r#"[{"kind": "config", "node": "u1", "stack": ["b2", "b1"]},
                {"kind": "same-context", "node": "u1"}]"#,
        )
        .unwrap();
        assert_eq!(q[0].kind(), "config");
        assert_eq!(q[0].input(), "u1 [b2,b1]");
        assert_eq!(q[1].input(), "u1");
        assert!(parse_queries(r#"[{"kind": "path", "node": "u1"}]"#).is_err());
    }

    #[test]
    fn unknown_callee() {
        let doc = RsmDocument::parse(
            r#"{"semiring": "boolean", "modules": [{"name": "M", "boxes": [{"name": "b", "calls": "N"}]}]}"#,
        )
        .unwrap();
        assert!(matches!(doc.to_rsm(), Err(DocError::UnknownCallee { .. })));
    }

    #[test]
    fn json_errors_have_positions() {
        let err = RsmDocument::parse("{\"semiring\": \"boolean\",\n \"modules\": [}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
