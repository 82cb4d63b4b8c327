//! Discourse parsing toolkit for Persian built on Rhetorical Structure Theory.
//!
//! The pipeline turns pre-tokenized, morphosyntactically annotated text into
//! binary RST trees and scores them:
//!
//! * [`normalize`] — deterministic Persian text normalization (character
//!   unification, ZWNJ affix joining, punctuation padding).
//! * [`ingest`] — CoNLL-U and Brown-cluster loading, token alignment,
//!   JSON-lines persistence.
//! * [`treebank`] — the RST tree domain model, rs3 and bracketed
//!   serialization, structural validation, corpus statistics.
//! * [`segmenter`] — a linear classifier that places EDU boundaries.
//! * [`parser`] — shift-reduce tree construction trained with a large-margin
//!   objective over projected surface features.
//! * [`eval`] — RST-Parseval span/nuclearity/relation F1 and confusion
//!   matrices.
//!
//! Corpus-scale operations (grid search, batch parsing, batch evaluation)
//! run data-parallel via rayon when the default `parallel` feature is
//! enabled; disabling it yields a sequential build with identical results.

pub mod eval;
pub mod exec;
pub mod features;
pub mod ingest;
pub mod normalize;
pub mod parser;
pub mod segmenter;
pub mod treebank;
