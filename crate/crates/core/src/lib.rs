//! Cross-lingual document similarity without parallel corpora.
//!
//! Each language gets its own topic model. Topics are annotated with the
//! multilingual synsets of their top words, documents are reduced to a
//! small hierarchy of topic sets ordered by relevance, and the hierarchy is
//! translated into synset space where documents from any language can be
//! compared with a level-wise Jaccard distance.
//!
//! The pipeline, module by module:
//!
//! * [`corpus`]: JSON-Lines ingestion, lemmatization and length filtering.
//! * [`vocabulary`]: document-frequency filtered vocabularies and bags of words.
//! * [`topics`]: collapsed Gibbs LDA, LabeledLDA and fold-in inference.
//! * [`lexicon`]: synset lexicons and topic annotation.
//! * [`hashing`]: hierarchical hash codes and their distance.
//! * [`search`]: inverted index over synset hash codes.
//! * [`taxonomy`]: reduction of thesaurus labels to their roots.
//! * [`evaluation`]: B-Cubed and precision@k.

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod hashing;
pub mod lexicon;
pub mod rng;
pub mod search;
pub mod taxonomy;
pub mod topics;
pub mod vocabulary;

pub use error::{Error, Result};
