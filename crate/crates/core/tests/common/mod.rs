#![allow(dead_code, unused_imports)]

pub use wrsm::generators::{
    corpus_boolean as boolean, corpus_genkill as genkill, corpus_shape as shape, corpus_tropical as tropical,
    CorpusCase as Case,
};
