//! Column-format chunk input and chunk post-processing.
//!
//! The reader consumes the classic three-column shallow-parsing format,
//! `token TAB pos TAB bioTag` with an optional fourth lemma column and blank
//! lines between sentences. Tags are `B-XXX` / `I-XXX` / `O`.
//!
//! [`merge_chunks`] repairs the usual over-segmentation of shallow chunkers
//! before alignment: prepositions are glued onto the following noun phrase,
//! and noun phrases separated only by commas or conjunctions are joined into
//! one chunk. The rules run to fixpoint, so chains merge transitively.

use std::path::Path;

use thiserror::Error;

use crate::model::{Chunk, ChunkedSentence, Token};

#[derive(Debug, Error)]
pub enum ChunkError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> ChunkError {
    ChunkError::Syntax {
        line,
        message: message.into(),
    }
}

/// A chunk that still remembers the phrase label of its BIO span. Chunks
/// derived from other sources (gold alignments) carry no label and are left
/// alone by the merge rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledChunk {
    /// 1-based token indices, contiguous and ascending.
    pub token_indices: Vec<usize>,
    pub label: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LabeledSentence {
    pub tokens: Vec<Token>,
    pub chunks: Vec<LabeledChunk>,
}

impl LabeledSentence {
    pub fn to_chunked(&self) -> ChunkedSentence {
        let chunks = self
            .chunks
            .iter()
            .map(|c| {
                let text = c
                    .token_indices
                    .iter()
                    .map(|&i| self.tokens[i - 1].surface.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                Chunk {
                    token_indices: c.token_indices.clone(),
                    text,
                }
            })
            .collect();
        ChunkedSentence {
            tokens: self.tokens.clone(),
            chunks,
        }
    }

    pub fn from_chunked(sentence: &ChunkedSentence) -> Self {
        LabeledSentence {
            tokens: sentence.tokens.clone(),
            chunks: sentence
                .chunks
                .iter()
                .map(|c| LabeledChunk {
                    token_indices: c.token_indices.clone(),
                    label: None,
                })
                .collect(),
        }
    }
}

/// Parses blank-line-separated sentences in `token TAB pos TAB bioTag` form
/// (optionally `... TAB lemma`). An `I-` tag is only legal directly after a
/// `B-` or `I-` tag with the same phrase label.
pub fn parse_conll_chunks(text: &str) -> Result<Vec<LabeledSentence>, ChunkError> {
    let mut sentences = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut chunks: Vec<LabeledChunk> = Vec::new();
    let mut open: Option<String> = None; // phrase label of the chunk being built

    let mut flush_sentence = |tokens: &mut Vec<Token>, chunks: &mut Vec<LabeledChunk>| {
        if !tokens.is_empty() {
            sentences.push(LabeledSentence {
                tokens: std::mem::take(tokens),
                chunks: std::mem::take(chunks),
            });
        }
    };

    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim_end();
        if line.is_empty() {
            open = None;
            flush_sentence(&mut tokens, &mut chunks);
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(syntax(
                line_no,
                format!("expected 3 or 4 tab-separated fields, got {}", fields.len()),
            ));
        }
        let index = tokens.len() + 1;
        tokens.push(Token {
            index,
            surface: fields[0].to_string(),
            pos: Some(fields[1].to_string()),
            lemma: fields.get(3).map(|l| l.to_string()),
        });

        let tag = fields[2];
        if tag == "O" {
            open = None;
        } else if let Some(label) = tag.strip_prefix("B-") {
            chunks.push(LabeledChunk {
                token_indices: vec![index],
                label: Some(label.to_string()),
            });
            open = Some(label.to_string());
        } else if let Some(label) = tag.strip_prefix("I-") {
            match &open {
                Some(current) if current == label => {
                    chunks.last_mut().unwrap().token_indices.push(index);
                }
                Some(current) => {
                    return Err(syntax(
                        line_no,
                        format!("I-{label} continues a {current} chunk"),
                    ));
                }
                None => {
                    return Err(syntax(line_no, format!("I-{label} without an open chunk")));
                }
            }
        } else {
            return Err(syntax(line_no, format!("unknown chunk tag `{tag}`")));
        }
    }
    flush_sentence(&mut tokens, &mut chunks);
    Ok(sentences)
}

pub fn parse_conll_file(path: impl AsRef<Path>) -> Result<Vec<LabeledSentence>, ChunkError> {
    let text = std::fs::read_to_string(path)?;
    parse_conll_chunks(&text)
}

const NOUN_LABEL: &str = "NP";
const PREP_LABEL: &str = "PP";

fn is_separator(surface: &str) -> bool {
    matches!(
        surface.to_lowercase().as_str(),
        "," | ";" | "&" | "/" | "and" | "or"
    )
}

fn is_noun(chunk: &LabeledChunk) -> bool {
    chunk.label.as_deref() == Some(NOUN_LABEL)
}

fn is_prepositional(chunk: &LabeledChunk) -> bool {
    chunk.label.as_deref() == Some(PREP_LABEL)
}

/// Joins over-segmented chunks, repeatedly until nothing changes:
///
/// 1. a prepositional chunk directly followed by a noun phrase becomes one
///    noun phrase;
/// 2. two noun phrases separated only by comma/conjunction tokens (outside
///    any chunk, or forming a chunk of only such tokens) become one noun
///    phrase, separators included.
///
/// Because the pass runs to fixpoint, chains like `[in] [A] , [B]` collapse
/// transitively. Chunks without phrase labels never match a rule, so
/// sentences chunked from gold alignments come back unchanged.
pub fn merge_chunks(sentence: &LabeledSentence) -> LabeledSentence {
    let mut chunks = sentence.chunks.clone();
    chunks.sort_by_key(|c| c.token_indices[0]);

    loop {
        let mut merged_any = false;
        let mut i = 0;
        while i + 1 < chunks.len() {
            if let Some(joined) = try_merge(&chunks[i], &chunks[i + 1], &sentence.tokens) {
                chunks[i] = joined;
                chunks.remove(i + 1);
                merged_any = true;
            } else {
                i += 1;
            }
        }
        if !merged_any {
            break;
        }
    }

    LabeledSentence {
        tokens: sentence.tokens.clone(),
        chunks,
    }
}

fn try_merge(left: &LabeledChunk, right: &LabeledChunk, tokens: &[Token]) -> Option<LabeledChunk> {
    let gap_start = *left.token_indices.last().unwrap() + 1;
    let gap_end = right.token_indices[0]; // exclusive

    let join = |label: &str| {
        let mut token_indices = left.token_indices.clone();
        token_indices.extend(gap_start..gap_end);
        token_indices.extend(right.token_indices.iter().copied());
        Some(LabeledChunk {
            token_indices,
            label: Some(label.to_string()),
        })
    };

    // Preposition glued to the following noun phrase.
    if gap_start == gap_end && is_prepositional(left) && is_noun(right) {
        return join(NOUN_LABEL);
    }
    // Noun phrases bridged by separator tokens that belong to no chunk.
    if is_noun(left) && is_noun(right) && gap_start < gap_end {
        let all_separators = (gap_start..gap_end).all(|i| is_separator(&tokens[i - 1].surface));
        if all_separators {
            return join(NOUN_LABEL);
        }
    }
    None
}
