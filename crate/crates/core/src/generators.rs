//! Fixture and synthetic RSM generators.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concurrent::{ComponentDef, CrsmDef};
use crate::automaton::configurations_automaton;
use crate::confdist::{post_star, PostStar};
use crate::rsm::{BoxDef, Configuration, ModuleDef, Rsm, RsmDef, TransitionDef};
use crate::semiring::{Boolean, Cost, FactSet, GenKill, GenKillValue, Semiring, Tropical};

/// Two mutually recursive modules.
///
/// `M1` has entries `e1_1`, `e1_2`, exit `x1`, internal `u1` and box `b1`
/// calling `M2`; `M2` has entry `e2`, exit `x2` and box `b2` calling `M1`.
/// The weights label, in order: `e1_1→b1.e2`, `e1_2→u1`, `b1.x2→u1`,
/// `u1→x1`, `e2→b2.e1_1`, `e2→b2.e1_2`, `b2.x1→x2`, `e2→x2`.
pub fn two_module_mutual_recursion<W: Clone>(w: [W; 8]) -> RsmDef<W> {
    let [w1, w2, w3, w4, w5, w6, w7, w8] = w;
    let mut m1 = ModuleDef::new("M1");
    m1.entries = strings(&["e1_1", "e1_2"]);
    m1.exits = strings(&["x1"]);
    m1.internals = strings(&["u1"]);
    m1.boxes.push(BoxDef { name: "b1".into(), callee: 1 });
    m1.transitions = alloc::vec![
        TransitionDef::new("e1_1", "b1.e2", w1),
        TransitionDef::new("e1_2", "u1", w2),
        TransitionDef::new("b1.x2", "u1", w3),
        TransitionDef::new("u1", "x1", w4),
    ];
    let mut m2 = ModuleDef::new("M2");
    m2.entries = strings(&["e2"]);
    m2.exits = strings(&["x2"]);
    m2.boxes.push(BoxDef { name: "b2".into(), callee: 0 });
    m2.transitions = alloc::vec![
        TransitionDef::new("e2", "b2.e1_1", w5),
        TransitionDef::new("e2", "b2.e1_2", w6),
        TransitionDef::new("b2.x1", "x2", w7),
        TransitionDef::new("e2", "x2", w8),
    ];
    RsmDef { modules: alloc::vec![m1, m2] }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| String::from(*s)).collect()
}

/// The dense single-module family: `n` entries `e1..en`, `n` exits
/// `x1..xn`, one box `b` calling the module itself, and
/// `δ = En×(Call∪Ex) ∪ Ret×Ex` with every weight one.
pub fn dense_family_def<W: Clone>(n: usize, one: W) -> RsmDef<W> {
    assert!(n >= 1, "dense family needs n >= 1");
    let mut m = ModuleDef::new("M");
    m.entries = (1..=n).map(|i| format!("e{i}")).collect();
    m.exits = (1..=n).map(|i| format!("x{i}")).collect();
    m.boxes.push(BoxDef { name: "b".into(), callee: 0 });
    for e in &m.entries {
        for c in &m.entries {
            m.transitions.push(TransitionDef::new(e.clone(), format!("b.{c}"), one.clone()));
        }
        for x in &m.exits {
            m.transitions.push(TransitionDef::new(e.clone(), x.clone(), one.clone()));
        }
    }
    for r in &m.exits {
        for x in &m.exits {
            m.transitions.push(TransitionDef::new(format!("b.{r}"), x.clone(), one.clone()));
        }
    }
    RsmDef { modules: alloc::vec![m] }
}

pub fn dense_family<S: Semiring>(semiring: S, n: usize) -> Rsm<S> {
    let one = semiring.one();
    Rsm::new(semiring, &dense_family_def(n, one)).expect("dense family is well-formed")
}

/// Shape parameters for [`random_rsm`].
#[derive(Debug, Clone, Copy)]
pub struct RandomParams {
    pub max_modules: usize,
    pub max_entries: usize,
    pub max_exits: usize,
    pub max_internals: usize,
    pub max_boxes: usize,
    pub max_transitions: usize,
    /// Probability that a box may call any module, including its own
    /// module or an earlier one. Otherwise it calls a later module.
    pub recursion: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            max_modules: 6,
            max_entries: 3,
            max_exits: 3,
            max_internals: 3,
            max_boxes: 2,
            max_transitions: 40,
            recursion: 0.4,
        }
    }
}

/// A seeded random RSM description. Weights are drawn from `weight`; exit
/// transitions may get non-one weights, so normalize before post*.
pub fn random_rsm<R, W, F>(params: &RandomParams, rng: &mut R, mut weight: F) -> RsmDef<W>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> W,
{
    let f = rng.gen_range(1..=params.max_modules.max(1));
    let mut modules: Vec<ModuleDef<W>> = Vec::with_capacity(f);
    for i in 0..f {
        let mut m = ModuleDef::new(format!("m{i}"));
        let ne = rng.gen_range(1..=params.max_entries.max(1));
        let nx = rng.gen_range(0..=params.max_exits);
        let nx = if nx == 0 && rng.gen_bool(0.7) { 1 } else { nx };
        let ni = rng.gen_range(0..=params.max_internals);
        m.entries = (0..ne).map(|j| format!("e{i}_{j}")).collect();
        m.exits = (0..nx).map(|j| format!("x{i}_{j}")).collect();
        m.internals = (0..ni).map(|j| format!("u{i}_{j}")).collect();
        modules.push(m);
    }
    for i in 0..f {
        let nb = if rng.gen_bool(0.8) {
            rng.gen_range(1..=params.max_boxes.max(1))
        } else {
            0
        };
        for j in 0..nb {
            let callee = if rng.gen_bool(params.recursion) {
                rng.gen_range(0..f)
            } else if i + 1 < f {
                rng.gen_range(i + 1..f)
            } else {
                continue;
            };
            modules[i].boxes.push(BoxDef {
                name: format!("b{i}_{j}"),
                callee,
            });
        }
    }
    let mut budget = params.max_transitions;
    for i in 0..f {
        let mut sources: Vec<String> = Vec::new();
        let mut targets: Vec<String> = Vec::new();
        sources.extend(modules[i].entries.iter().cloned());
        sources.extend(modules[i].internals.iter().cloned());
        targets.extend(modules[i].internals.iter().cloned());
        targets.extend(modules[i].exits.iter().cloned());
        for b in &modules[i].boxes {
            for e in &modules[b.callee].entries {
                targets.push(format!("{}.{e}", b.name));
            }
            for x in &modules[b.callee].exits {
                sources.push(format!("{}.{x}", b.name));
            }
        }
        if targets.is_empty() || budget == 0 {
            continue;
        }
        let modules_left = f - i;
        let share = (budget / modules_left).max(1);
        let want = share.min(sources.len() * targets.len());
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        // Every source gets an outgoing transition before extra ones are drawn.
        for src in 0..sources.len() {
            if pairs.len() == want {
                break;
            }
            pairs.push((src, rng.gen_range(0..targets.len())));
        }
        for _ in 0..want * 3 {
            if pairs.len() == want {
                break;
            }
            let p = (rng.gen_range(0..sources.len()), rng.gen_range(0..targets.len()));
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        budget -= pairs.len();
        for (s, t) in pairs {
            let w = weight(rng);
            modules[i]
                .transitions
                .push(TransitionDef::new(sources[s].clone(), targets[t].clone(), w));
        }
    }
    RsmDef { modules }
}

/// Mostly `true`, occasionally `false` (a transition that is never taken).
pub fn sample_bool<R: Rng + ?Sized>(rng: &mut R) -> bool {
    rng.gen_bool(0.9)
}

/// A cost in `0..=max`.
pub fn sample_cost<R: Rng + ?Sized>(rng: &mut R, max: u64) -> Cost {
    Cost::Finite(rng.gen_range(0..=max))
}

/// A random transfer function over the universe of `gk`.
pub fn sample_genkill<R: Rng + ?Sized>(gk: &GenKill, rng: &mut R) -> GenKillValue {
    let n = gk.facts().len();
    let mut kill = FactSet::EMPTY;
    let mut gen = FactSet::EMPTY;
    for i in 0..n {
        match rng.gen_range(0..4) {
            0 => kill = kill.union(FactSet::from_indices([i])),
            1 => gen = gen.union(FactSet::from_indices([i])),
            _ => {}
        }
    }
    GenKillValue::transfer(kill, gen)
}

/// Initial configurations for a corpus instance: the first entry of the
/// first module with empty stack, sometimes joined by one more random
/// configuration of height at most 2.
pub fn sample_initial<S: Semiring, R: Rng + ?Sized>(rsm: &Rsm<S>, rng: &mut R) -> Vec<Configuration> {
    let mut out = Vec::new();
    if let Some(&e) = rsm.module(0).entries.first() {
        out.push(Configuration::new(e, Vec::new()));
    }
    if rng.gen_bool(0.35) {
        let all = crate::oracle::all_configurations(rsm, 2);
        let representable: Vec<&Configuration> = all
            .iter()
            .filter(|c| {
                !rsm.module(rsm.module_of(c.node)).entries.is_empty()
                    && c.stack.iter().all(|b| !rsm.module(rsm.box_info(*b).owner).entries.is_empty())
            })
            .collect();
        if !representable.is_empty() {
            let c = representable[rng.gen_range(0..representable.len())].clone();
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// One instance of the seeded test corpus: a normalized random RSM and its
/// initial configurations.
#[derive(Debug, Clone)]
pub struct CorpusCase<S: Semiring> {
    pub seed: u64,
    pub rsm: Rsm<S>,
    pub initial: Vec<Configuration>,
}

impl<S: Semiring> CorpusCase<S> {
    /// The initial configurations, each with weight `1̄`.
    pub fn seeds(&self) -> Vec<(Configuration, S::Elem)> {
        self.initial.iter().map(|c| (c.clone(), self.rsm.semiring().one())).collect()
    }

    pub fn post_star(&self) -> PostStar<S::Elem> {
        let init = configurations_automaton(&self.rsm, &self.initial).expect("corpus configurations are well-formed");
        post_star(&self.rsm, &init).expect("corpus semirings have finite height or DCC")
    }
}

/// The unweighted shape shared by all semirings for `seed`.
pub fn corpus_shape(seed: u64) -> RsmDef<()> {
    random_rsm(&RandomParams::default(), &mut ChaCha8Rng::seed_from_u64(seed), |_| ())
}

fn corpus_case<S: Semiring + Clone>(seed: u64, s: S, mut weight: impl FnMut(&mut ChaCha8Rng) -> S::Elem) -> CorpusCase<S> {
    let mut wrng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9) ^ 0x5eed);
    let def = corpus_shape(seed).map_weights(|()| weight(&mut wrng));
    let rsm = Rsm::new(s, &def).expect("generated RSMs are well-formed").normalize_exit_weights();
    let initial = sample_initial(&rsm, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x1417));
    CorpusCase { seed, rsm, initial }
}

pub fn corpus_boolean(seed: u64) -> CorpusCase<Boolean> {
    corpus_case(seed, Boolean, sample_bool)
}

/// Tropical weights in `0..=5`.
pub fn corpus_tropical(seed: u64) -> CorpusCase<Tropical> {
    corpus_case(seed, Tropical::new(), |r| sample_cost(r, 5))
}

/// Gen/kill weights over the universe `{a, b, c}`.
pub fn corpus_genkill(seed: u64) -> CorpusCase<GenKill> {
    let gk = GenKill::new(["a", "b", "c"]).expect("three distinct facts");
    let g = gk.clone();
    corpus_case(seed, gk, move |r| sample_genkill(&g, r))
}

/// A random concurrent RSM with two components, one to three global states
/// and at most four local nodes per component. Every component starts at
/// `e0@g0` with an empty stack.
pub fn random_crsm<R: Rng + ?Sized>(rng: &mut R) -> CrsmDef {
    let ng = rng.gen_range(1..=3);
    let globals: Vec<String> = (0..ng).map(|g| format!("g{g}")).collect();
    let at = |l: &str, g: usize| format!("{l}@g{g}");
    let mut components = Vec::new();
    for ci in 0..2 {
        // Local nodes per module: (entries, exits, internals).
        let mut shapes: Vec<(Vec<String>, Vec<String>, Vec<String>)> = Vec::new();
        let mut budget = 4;
        let mut m0 = (alloc::vec![String::from("e0")], Vec::new(), Vec::new());
        budget -= 1;
        if rng.gen_bool(0.8) {
            m0.1.push("x0".into());
            budget -= 1;
        }
        if rng.gen_bool(0.6) {
            m0.2.push("u0".into());
            budget -= 1;
        }
        shapes.push(m0);
        if budget >= 2 && rng.gen_bool(0.5) {
            shapes.push((alloc::vec!["e1".into()], alloc::vec!["x1".into()], Vec::new()));
        }
        let nm = shapes.len();
        let mut modules: Vec<ModuleDef<bool>> = Vec::new();
        for (i, (en, ex, int)) in shapes.iter().enumerate() {
            let mut m = ModuleDef::new(format!("M{i}"));
            let expand = |xs: &Vec<String>| -> Vec<String> {
                xs.iter().flat_map(|x| (0..ng).map(move |g| at(x, g))).collect()
            };
            m.entries = expand(en);
            m.exits = expand(ex);
            m.internals = expand(int);
            if rng.gen_bool(if i == 0 { 0.7 } else { 0.4 }) {
                m.boxes.push(BoxDef {
                    name: format!("b{i}"),
                    callee: rng.gen_range(0..nm),
                });
            }
            modules.push(m);
        }
        for i in 0..nm {
            let (en, ex, int) = &shapes[i];
            let mut src: Vec<String> = en.iter().chain(int).cloned().collect();
            let mut tgt: Vec<String> = int.iter().chain(ex).cloned().collect();
            for b in &modules[i].boxes {
                let (cen, cex, _) = &shapes[b.callee];
                tgt.extend(cen.iter().map(|e| format!("{}.{e}", b.name)));
                src.extend(cex.iter().map(|x| format!("{}.{x}", b.name)));
            }
            if tgt.is_empty() {
                continue;
            }
            let mut seen = Vec::new();
            for g in 0..ng {
                for s in &src {
                    for _ in 0..rng.gen_range(0..=2) {
                        let t = &tgt[rng.gen_range(0..tgt.len())];
                        let g2 = if rng.gen_bool(0.6) { g } else { rng.gen_range(0..ng) };
                        let pair = (at(s, g), at(t, g2));
                        if !seen.contains(&pair) {
                            seen.push(pair);
                        }
                    }
                }
            }
            for (a, b) in seen {
                modules[i].transitions.push(TransitionDef::new(a, b, true));
            }
        }
        components.push(ComponentDef {
            name: format!("c{ci}"),
            rsm: RsmDef { modules },
            initial: (at("e0", 0), Vec::new()),
        });
    }
    CrsmDef { globals, components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsm::{validate, NodeKind};
    use crate::semiring::Boolean;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dense_counts() {
        let r1 = dense_family(Boolean, 1);
        assert_eq!(r1.transitions().len(), 3);
        let m = r1.metrics();
        assert_eq!((m.theta_e, m.theta_x, m.calls), (1, 1, 1));
        assert_eq!(r1.nodes().iter().filter(|n| matches!(n.kind, NodeKind::Return { .. })).count(), 1);
        assert_eq!(dense_family(Boolean, 2).transitions().len(), 12);
        for n in 1..6 {
            assert!(validate(&Boolean, &dense_family_def(n, true)).is_empty());
            assert_eq!(dense_family(Boolean, n).transitions().len(), 3 * n * n);
        }
    }

    #[test]
    fn random_rsms_are_valid_and_bounded() {
        let params = RandomParams::default();
        for seed in 0..300 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let def = random_rsm(&params, &mut rng, |r| r.gen_bool(0.8));
            let report = validate(&Boolean, &def);
            assert!(report.is_empty(), "seed {seed}: {report}");
            let rsm = Rsm::new(Boolean, &def).unwrap();
            let m = rsm.metrics();
            assert!(m.modules <= 6 && m.theta_e <= 3 && m.theta_x <= 3);
            assert!(m.transitions <= 40);
        }
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let params = RandomParams::default();
        let a = random_rsm(&params, &mut ChaCha8Rng::seed_from_u64(7), |r| r.gen_range(0..5u64));
        let b = random_rsm(&params, &mut ChaCha8Rng::seed_from_u64(7), |r| r.gen_range(0..5u64));
        assert_eq!(a, b);
    }
}
