//! Toolkit for interpretable sentence similarity: two sentences are segmented
//! into chunks, chunks are aligned across the sentences, and every alignment
//! carries a relation label, a similarity score in [0,5], and optionally an
//! English explanation of what the two chunks have in common.
//!
//! The crates in this workspace split the work as follows: this library holds
//! the data model, the `.wa` alignment file format, lexical resources, the
//! chunking/alignment/labeling/scoring pipeline, the evaluator and the
//! verbalizer; `ists-cli` wraps it all into a command line tool.

pub mod model;
pub mod wa;
pub mod resources;
pub mod chunking;
pub mod assignment;
pub mod token_align;
pub mod chunk_align;
pub mod stopwords;
pub mod logreg;
pub mod label;
pub mod score;
pub mod eval;
pub mod verbalize;
pub mod pipeline;

pub use model::{
    AlignmentLabel, AlignmentScore, Chunk, ChunkAlignment, ChunkedSentence, CoreLabel,
    EntailmentRelation, InterpretablePair, Token,
};
