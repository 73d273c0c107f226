//! Idempotent semirings.
//!
//! Every analysis in this crate is parameterised by a value implementing
//! [`Semiring`]. The semiring is a value, not a type-level constant, so one
//! algorithm body serves every instance, including the runtime-selected
//! [`SemiringSpec`] used by the command-line front-end.
//!
//! Three instances are provided:
//!
//! * [`Boolean`]: reachability (`OR` / `AND`),
//! * [`Tropical`]: shortest paths over the naturals (`min` / saturating `+`),
//! * [`GenKill`]: distributive gen/kill transfer functions over a finite fact
//!   universe (may-analysis, union at merge points).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Debug};
use core::hash::Hash;

use crate::error::SemiringError;

/// An idempotent semiring `(D, ⊕, ⊗, 0̄, 1̄)`.
///
/// Implementations must satisfy the usual axioms: `⊕` is associative,
/// commutative and idempotent with neutral `0̄`; `⊗` is associative with
/// neutral `1̄`; `⊗` distributes over `⊕` on both sides and `0̄` annihilates.
/// [`verify_laws`] checks these on a finite sample.
pub trait Semiring {
    type Elem: Clone + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn combine(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn extend(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// The canonical order: `a ⊑ b` iff `a ⊕ b = a`.
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.combine(a, b) == *a
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Number of elements of the longest strictly descending chain, when the
    /// instance has a finite height. `None` means only the descending chain
    /// condition is assumed.
    fn height_bound(&self) -> Option<usize> {
        None
    }

    /// Checks that `a` is an element of this particular instance.
    fn check(&self, _a: &Self::Elem) -> Result<(), SemiringError> {
        Ok(())
    }

    fn fmt_elem(&self, a: &Self::Elem, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{a:?}")
    }

    fn try_combine(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, SemiringError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.combine(a, b))
    }

    fn try_extend(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, SemiringError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.extend(a, b))
    }

    fn try_leq(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool, SemiringError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq(a, b))
    }
}

/// Displays an element through its semiring's formatter.
pub struct Shown<'a, S: Semiring>(pub &'a S, pub &'a S::Elem);

impl<S: Semiring> fmt::Display for Shown<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_elem(self.1, f)
    }
}

/// Formats an element to a string.
pub fn show<S: Semiring>(s: &S, a: &S::Elem) -> String {
    Shown(s, a).to_string()
}

/// Reachability: `OR` combines, `AND` extends.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Boolean;

impl Semiring for Boolean {
    type Elem = bool;

    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn combine(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn extend(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn height_bound(&self) -> Option<usize> {
        Some(2)
    }
    fn fmt_elem(&self, a: &bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{a}")
    }
}

/// A tropical cost: a natural number or `+∞`.
///
/// Variant order makes the derived `Ord` agree with the numeric order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cost {
    Finite(u64),
    Infinite,
}

impl Cost {
    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Infinite => None,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// Min-plus over the naturals with saturation: any sum reaching `ceiling`
/// becomes `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tropical {
    ceiling: u64,
}

impl Default for Tropical {
    fn default() -> Self {
        Self { ceiling: u64::MAX }
    }
}

impl Tropical {
    pub fn new() -> Self {
        Self::default()
    }

    /// Instance whose finite costs are exactly `0..ceiling`.
    pub fn with_ceiling(ceiling: u64) -> Self {
        assert!(ceiling > 0, "tropical ceiling must be positive");
        Self { ceiling }
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    /// Maps a raw number into the instance (values at or above the ceiling
    /// become `+∞`).
    pub fn cost(&self, v: u64) -> Cost {
        if v >= self.ceiling {
            Cost::Infinite
        } else {
            Cost::Finite(v)
        }
    }
}

impl Semiring for Tropical {
    type Elem = Cost;

    fn zero(&self) -> Cost {
        Cost::Infinite
    }
    fn one(&self) -> Cost {
        Cost::Finite(0)
    }
    fn combine(&self, a: &Cost, b: &Cost) -> Cost {
        *a.min(b)
    }
    fn extend(&self, a: &Cost, b: &Cost) -> Cost {
        match (a, b) {
            (Cost::Finite(x), Cost::Finite(y)) => self.cost(x.saturating_add(*y)),
            _ => Cost::Infinite,
        }
    }
    fn leq(&self, a: &Cost, b: &Cost) -> bool {
        a <= b
    }
    fn check(&self, a: &Cost) -> Result<(), SemiringError> {
        match a {
            Cost::Finite(v) if *v >= self.ceiling => Err(SemiringError::OutOfRange(format!(
                "cost {v} is not below the ceiling {}",
                self.ceiling
            ))),
            _ => Ok(()),
        }
    }
    fn fmt_elem(&self, a: &Cost, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{a}")
    }
}

/// A set of facts drawn from a universe of at most 64 facts.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactSet(pub u64);

impl FactSet {
    pub const EMPTY: FactSet = FactSet(0);

    pub fn full(size: usize) -> FactSet {
        if size >= 64 {
            FactSet(u64::MAX)
        } else {
            FactSet((1u64 << size) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> FactSet {
        FactSet(it.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, o: FactSet) -> FactSet {
        FactSet(self.0 | o.0)
    }

    pub fn intersection(self, o: FactSet) -> FactSet {
        FactSet(self.0 & o.0)
    }

    pub fn difference(self, o: FactSet) -> FactSet {
        FactSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: FactSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }
}

impl Debug for FactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An element of the gen/kill semiring.
///
/// `Transfer { kill, gen }` denotes `X ↦ (X ∖ kill) ∪ gen` and is kept in the
/// canonical form `gen ∩ kill = ∅`. `Zero` is the adjoined "no path" element:
/// the constant-`∅` transfer function is neutral for `⊕` but does not
/// annihilate composition, so it cannot serve as `0̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKillValue {
    Zero,
    Transfer { kill: FactSet, gen: FactSet },
}

impl GenKillValue {
    /// Builds a transfer function in canonical form.
    pub fn transfer(kill: FactSet, gen: FactSet) -> Self {
        GenKillValue::Transfer {
            kill: kill.difference(gen),
            gen,
        }
    }

    pub fn identity() -> Self {
        GenKillValue::Transfer {
            kill: FactSet::EMPTY,
            gen: FactSet::EMPTY,
        }
    }

    /// Applies the transfer function; `Zero` maps everything to `None`.
    pub fn apply(&self, x: FactSet) -> Option<FactSet> {
        match self {
            GenKillValue::Zero => None,
            GenKillValue::Transfer { kill, gen } => Some(x.difference(*kill).union(*gen)),
        }
    }
}

/// Gen/kill transfer functions over a named fact universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenKill {
    facts: Vec<String>,
}

impl GenKill {
    pub const MAX_FACTS: usize = 64;

    pub fn new<I, T>(facts: I) -> Result<Self, SemiringError>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let facts: Vec<String> = facts.into_iter().map(Into::into).collect();
        if facts.len() > Self::MAX_FACTS {
            return Err(SemiringError::UniverseTooLarge(facts.len()));
        }
        for (i, f) in facts.iter().enumerate() {
            if f.is_empty() {
                return Err(SemiringError::BadName(String::from("empty fact name")));
            }
            if facts[..i].contains(f) {
                return Err(SemiringError::BadName(format!("duplicate fact `{f}`")));
            }
        }
        Ok(Self { facts })
    }

    pub fn facts(&self) -> &[String] {
        &self.facts
    }

    pub fn universe(&self) -> FactSet {
        FactSet::full(self.facts.len())
    }

    pub fn fact_index(&self, name: &str) -> Option<usize> {
        self.facts.iter().position(|f| f == name)
    }

    /// Looks up facts by name and builds a canonical transfer function.
    pub fn transfer_named(&self, kill: &[&str], gen: &[&str]) -> Result<GenKillValue, SemiringError> {
        let lookup = |names: &[&str]| -> Result<FactSet, SemiringError> {
            let mut set = FactSet::EMPTY;
            for n in names {
                let i = self
                    .fact_index(n)
                    .ok_or_else(|| SemiringError::BadName(format!("unknown fact `{n}`")))?;
                set = set.union(FactSet::from_indices([i]));
            }
            Ok(set)
        };
        Ok(GenKillValue::transfer(lookup(kill)?, lookup(gen)?))
    }

    /// Every element of the instance (`3^|U| + 1` of them).
    pub fn all_elements(&self) -> Vec<GenKillValue> {
        let n = self.facts.len();
        assert!(n <= 12, "enumerating gen/kill elements is only sensible for tiny universes");
        let mut out = Vec::new();
        out.push(GenKillValue::Zero);
        let mut code = 0usize;
        let total = 3usize.pow(n as u32);
        while code < total {
            let (mut kill, mut gen, mut c) = (FactSet::EMPTY, FactSet::EMPTY, code);
            for i in 0..n {
                match c % 3 {
                    1 => kill = kill.union(FactSet::from_indices([i])),
                    2 => gen = gen.union(FactSet::from_indices([i])),
                    _ => {}
                }
                c /= 3;
            }
            out.push(GenKillValue::Transfer { kill, gen });
            code += 1;
        }
        out
    }
}

impl Semiring for GenKill {
    type Elem = GenKillValue;

    fn zero(&self) -> GenKillValue {
        GenKillValue::Zero
    }

    fn one(&self) -> GenKillValue {
        GenKillValue::identity()
    }

    fn combine(&self, a: &GenKillValue, b: &GenKillValue) -> GenKillValue {
        match (a, b) {
            (GenKillValue::Zero, x) | (x, GenKillValue::Zero) => *x,
            (
                GenKillValue::Transfer { kill: k1, gen: g1 },
                GenKillValue::Transfer { kill: k2, gen: g2 },
            ) => GenKillValue::transfer(k1.intersection(*k2), g1.union(*g2)),
        }
    }

    /// `a ⊗ b` applies `a` first, then `b`.
    fn extend(&self, a: &GenKillValue, b: &GenKillValue) -> GenKillValue {
        match (a, b) {
            (GenKillValue::Zero, _) | (_, GenKillValue::Zero) => GenKillValue::Zero,
            (
                GenKillValue::Transfer { kill: k1, gen: g1 },
                GenKillValue::Transfer { kill: k2, gen: g2 },
            ) => GenKillValue::transfer(k1.union(*k2), g1.difference(*k2).union(*g2)),
        }
    }

    fn height_bound(&self) -> Option<usize> {
        Some(2 * self.facts.len() + 2)
    }

    fn check(&self, a: &GenKillValue) -> Result<(), SemiringError> {
        match a {
            GenKillValue::Zero => Ok(()),
            GenKillValue::Transfer { kill, gen } => {
                let u = self.universe();
                if !kill.is_subset(u) || !gen.is_subset(u) {
                    Err(SemiringError::Mismatch(String::from(
                        "gen/kill value mentions facts outside the universe",
                    )))
                } else if kill.intersection(*gen) != FactSet::EMPTY {
                    Err(SemiringError::OutOfRange(String::from(
                        "gen/kill value is not in canonical form",
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn fmt_elem(&self, a: &GenKillValue, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match a {
            GenKillValue::Zero => f.write_str("zero"),
            GenKillValue::Transfer { kill, gen } => {
                let names = |s: &FactSet| -> Vec<&str> {
                    s.iter()
                        .map(|i| self.facts.get(i).map_or("?", String::as_str))
                        .collect()
                };
                write!(f, "{{kill:[{}],gen:[{}]}}", names(kill).join(","), names(gen).join(","))
            }
        }
    }
}

/// An element of a runtime-selected semiring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Cost(Cost),
    GenKill(GenKillValue),
}

/// A semiring chosen at runtime by name: `boolean`, `tropical` or
/// `genkill:<comma-separated universe>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiringSpec {
    Boolean(Boolean),
    Tropical(Tropical),
    GenKill(GenKill),
}

impl SemiringSpec {
    pub fn from_name(name: &str) -> Result<Self, SemiringError> {
        match name.trim() {
            "boolean" => Ok(SemiringSpec::Boolean(Boolean)),
            "tropical" => Ok(SemiringSpec::Tropical(Tropical::new())),
            other => match other.strip_prefix("genkill:") {
                Some(list) => {
                    let facts: Vec<&str> = if list.trim().is_empty() {
                        Vec::new()
                    } else {
                        list.split(',').map(str::trim).collect()
                    };
                    Ok(SemiringSpec::GenKill(GenKill::new(facts)?))
                }
                None => Err(SemiringError::UnknownSemiring(other.to_string())),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            SemiringSpec::Boolean(_) => String::from("boolean"),
            SemiringSpec::Tropical(_) => String::from("tropical"),
            SemiringSpec::GenKill(g) => format!("genkill:{}", g.facts().join(",")),
        }
    }

    fn mismatch(a: &Value, b: &Value) -> ! {
        panic!("semiring instance mismatch: {a:?} vs {b:?}")
    }
}

impl Semiring for SemiringSpec {
    type Elem = Value;

    fn zero(&self) -> Value {
        match self {
            SemiringSpec::Boolean(s) => Value::Bool(s.zero()),
            SemiringSpec::Tropical(s) => Value::Cost(s.zero()),
            SemiringSpec::GenKill(s) => Value::GenKill(s.zero()),
        }
    }

    fn one(&self) -> Value {
        match self {
            SemiringSpec::Boolean(s) => Value::Bool(s.one()),
            SemiringSpec::Tropical(s) => Value::Cost(s.one()),
            SemiringSpec::GenKill(s) => Value::GenKill(s.one()),
        }
    }

    /// Panics on elements of another instance; use [`Semiring::try_combine`]
    /// for unchecked inputs.
    fn combine(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (SemiringSpec::Boolean(s), Value::Bool(x), Value::Bool(y)) => Value::Bool(s.combine(x, y)),
            (SemiringSpec::Tropical(s), Value::Cost(x), Value::Cost(y)) => Value::Cost(s.combine(x, y)),
            (SemiringSpec::GenKill(s), Value::GenKill(x), Value::GenKill(y)) => {
                Value::GenKill(s.combine(x, y))
            }
            _ => Self::mismatch(a, b),
        }
    }

    fn extend(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (SemiringSpec::Boolean(s), Value::Bool(x), Value::Bool(y)) => Value::Bool(s.extend(x, y)),
            (SemiringSpec::Tropical(s), Value::Cost(x), Value::Cost(y)) => Value::Cost(s.extend(x, y)),
            (SemiringSpec::GenKill(s), Value::GenKill(x), Value::GenKill(y)) => {
                Value::GenKill(s.extend(x, y))
            }
            _ => Self::mismatch(a, b),
        }
    }

    fn height_bound(&self) -> Option<usize> {
        match self {
            SemiringSpec::Boolean(s) => s.height_bound(),
            SemiringSpec::Tropical(s) => s.height_bound(),
            SemiringSpec::GenKill(s) => s.height_bound(),
        }
    }

    fn check(&self, a: &Value) -> Result<(), SemiringError> {
        match (self, a) {
            (SemiringSpec::Boolean(_), Value::Bool(_)) => Ok(()),
            (SemiringSpec::Tropical(s), Value::Cost(c)) => s.check(c),
            (SemiringSpec::GenKill(s), Value::GenKill(g)) => s.check(g),
            _ => Err(SemiringError::Mismatch(format!(
                "value {a:?} does not belong to the {} semiring",
                self.name()
            ))),
        }
    }

    fn fmt_elem(&self, a: &Value, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, a) {
            (SemiringSpec::Boolean(s), Value::Bool(x)) => s.fmt_elem(x, f),
            (SemiringSpec::Tropical(s), Value::Cost(x)) => s.fmt_elem(x, f),
            (SemiringSpec::GenKill(s), Value::GenKill(x)) => s.fmt_elem(x, f),
            _ => write!(f, "{a:?}"),
        }
    }
}

/// The semiring axioms and monotonicity properties checked by [`verify_laws`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    CombineAssociative,
    CombineCommutative,
    CombineIdempotent,
    CombineNeutral,
    ExtendAssociative,
    ExtendNeutral,
    ZeroAnnihilates,
    LeftDistributive,
    RightDistributive,
    MonotoneCombine,
    MonotoneExtendRight,
    MonotoneExtendLeft,
}

impl Law {
    pub const ALL: [Law; 12] = [
        Law::CombineAssociative,
        Law::CombineCommutative,
        Law::CombineIdempotent,
        Law::CombineNeutral,
        Law::ExtendAssociative,
        Law::ExtendNeutral,
        Law::ZeroAnnihilates,
        Law::LeftDistributive,
        Law::RightDistributive,
        Law::MonotoneCombine,
        Law::MonotoneExtendRight,
        Law::MonotoneExtendLeft,
    ];
}

/// Outcome of one law: the first counterexample found, if any.
#[derive(Debug, Clone)]
pub struct LawOutcome<E> {
    pub law: Law,
    pub counterexample: Option<Vec<E>>,
}

impl<E> LawOutcome<E> {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct LawReport<E> {
    pub outcomes: Vec<LawOutcome<E>>,
}

impl<E> LawReport<E> {
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(LawOutcome::holds)
    }

    pub fn holds(&self, law: Law) -> bool {
        self.outcomes.iter().find(|o| o.law == law).is_some_and(LawOutcome::holds)
    }

    pub fn failed(&self) -> impl Iterator<Item = Law> + '_ {
        self.outcomes.iter().filter(|o| !o.holds()).map(|o| o.law)
    }
}

/// Exhaustively checks every law over all triples drawn from `samples`.
///
/// `0̄` and `1̄` are always added to the sample set.
pub fn verify_laws<S: Semiring>(s: &S, samples: &[S::Elem]) -> LawReport<S::Elem> {
    let mut xs: Vec<S::Elem> = samples.to_vec();
    for extra in [s.zero(), s.one()] {
        if !xs.contains(&extra) {
            xs.push(extra);
        }
    }
    let zero = s.zero();
    let one = s.one();
    let mut outcomes = Vec::with_capacity(Law::ALL.len());
    for law in Law::ALL {
        let mut counterexample = None;
        'search: for a in &xs {
            for b in &xs {
                for c in &xs {
                    let ok = match law {
                        Law::CombineAssociative => {
                            s.combine(&s.combine(a, b), c) == s.combine(a, &s.combine(b, c))
                        }
                        Law::CombineCommutative => s.combine(a, b) == s.combine(b, a),
                        Law::CombineIdempotent => s.combine(a, a) == *a,
                        Law::CombineNeutral => s.combine(a, &zero) == *a && s.combine(&zero, a) == *a,
                        Law::ExtendAssociative => {
                            s.extend(&s.extend(a, b), c) == s.extend(a, &s.extend(b, c))
                        }
                        Law::ExtendNeutral => s.extend(a, &one) == *a && s.extend(&one, a) == *a,
                        Law::ZeroAnnihilates => s.extend(a, &zero) == zero && s.extend(&zero, a) == zero,
                        Law::LeftDistributive => {
                            s.extend(a, &s.combine(b, c)) == s.combine(&s.extend(a, b), &s.extend(a, c))
                        }
                        Law::RightDistributive => {
                            s.extend(&s.combine(b, c), a) == s.combine(&s.extend(b, a), &s.extend(c, a))
                        }
                        Law::MonotoneCombine => {
                            !s.leq(a, b) || s.leq(&s.combine(a, c), &s.combine(b, c))
                        }
                        Law::MonotoneExtendRight => {
                            !s.leq(a, b) || s.leq(&s.extend(a, c), &s.extend(b, c))
                        }
                        Law::MonotoneExtendLeft => {
                            !s.leq(a, b) || s.leq(&s.extend(c, a), &s.extend(c, b))
                        }
                    };
                    if !ok {
                        counterexample = Some(alloc::vec![a.clone(), b.clone(), c.clone()]);
                        break 'search;
                    }
                }
            }
        }
        outcomes.push(LawOutcome { law, counterexample });
    }
    LawReport { outcomes }
}

/// Length, in strict descents, of the longest `⊑`-descending chain that
/// starts at `start` and stays inside `domain`.
pub fn longest_descent<S: Semiring>(s: &S, domain: &[S::Elem], start: &S::Elem) -> usize {
    fn go<S: Semiring>(
        s: &S,
        domain: &[S::Elem],
        at: usize,
        memo: &mut [Option<usize>],
    ) -> usize {
        if let Some(v) = memo[at] {
            return v;
        }
        let mut best = 0;
        for (j, y) in domain.iter().enumerate() {
            if y != &domain[at] && s.leq(y, &domain[at]) {
                best = best.max(1 + go(s, domain, j, memo));
            }
        }
        memo[at] = Some(best);
        best
    }
    let mut dom: Vec<S::Elem> = domain.to_vec();
    let at = match dom.iter().position(|x| x == start) {
        Some(i) => i,
        None => {
            dom.push(start.clone());
            dom.len() - 1
        }
    };
    let mut memo = alloc::vec![None; dom.len()];
    go(s, &dom, at, &mut memo)
}
