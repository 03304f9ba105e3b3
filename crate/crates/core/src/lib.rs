//! Query preprocessing and retrieval evaluation based on speech-act theory.
//!
//! User queries are split into an illocutionary force and a propositional
//! content; the content alone is embedded and searched. The crate provides
//! the classifier and rule-based extractor ([`speechact`]), a remote
//! language-model alternative ([`backends`]), embeddings ([`embedding`]), a
//! flat two-layer vector index ([`corpus`]) and the statistics used to
//! compare the original and propositional forms ([`evalkit`]).

pub mod backends;
pub mod cli;
pub mod corpus;
pub mod embedding;
pub mod evalkit;
pub mod pool;
pub mod speechact;
pub mod transport;
