//! Document formats, benchmark harness and command-line driver for `wrsm`.

pub mod app;
pub mod bench;
pub mod doc;
