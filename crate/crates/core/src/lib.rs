//! Weighted recursive state machines and configuration-distance analysis.
//!
//! The crate computes, for a weighted RSM and a regular set of initial
//! configurations, a saturated configuration automaton from which distances
//! to configurations, superconfigurations and nodes can be read off. Around
//! the core saturation engine it provides:
//!
//! * [`semiring`]: the idempotent semiring abstraction and three instances,
//! * [`rsm`] and [`generators`]: the RSM model, stepping semantics and
//!   synthetic inputs,
//! * [`automaton`]: configuration automata,
//! * [`confdist`]: the summary-based post* saturation,
//! * [`extraction`]: distance queries over a saturated automaton,
//! * [`concurrent`]: context-bounded reachability for concurrent RSMs,
//! * [`oracle`]: a brute-force reference semantics,
//! * [`wpds`]: a weighted pushdown baseline.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod automaton;
pub mod concurrent;
pub mod confdist;
pub mod error;
pub mod extraction;
pub mod generators;
pub mod oracle;
pub mod rsm;
pub mod semiring;
pub mod wpds;

pub use error::{Error, Result, SemiringError};
pub use rsm::{BoxId, Configuration, NodeId, Rsm, RsmDef, Superconfiguration};
pub use semiring::{Boolean, Cost, GenKill, GenKillValue, Semiring, SemiringSpec, Tropical, Value};
