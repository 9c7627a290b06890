//! Corpus-to-model pipeline for predicting notional vs. strict pronoun
//! agreement: parse coreference-annotated corpora, select singular-headed
//! antecedent / pronoun-anaphor pairs, featurize them, train an extremely
//! randomized trees classifier, and reproduce the evaluation and
//! association analyses.

pub mod analysis;
pub mod conll;
pub mod ensemble;
pub mod error;
pub mod extract;
pub mod features;
pub mod lexicon;
pub mod pipeline;
pub mod syntax;
pub mod synthetic;

pub use error::{Error, Result};
