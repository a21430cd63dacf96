//! One-to-one token alignment between the two sentences of a pair.
//!
//! Two modes. *Identity* pairs tokens with equal lowercased surfaces,
//! matching the k-th occurrence on the left to the k-th on the right.
//! *Lexical* builds a similarity matrix from surface/lemma equality and the
//! resource bundle, zeroes entries below a threshold and solves a
//! maximum-weight assignment over the rest.

use thiserror::Error;

use crate::assignment::max_weight_assignment;
use crate::model::Token;
use crate::resources::LexicalResources;

/// Default similarity threshold below which lexical links are discarded.
pub const DEFAULT_THETA: f64 = 0.6;

/// Magnitude of the position-based tie-break added to positive matrix
/// entries, small enough never to flip a genuine weight difference.
const TIE_BREAK: f64 = 1e-9;

#[derive(Debug, Error)]
#[error("lexical token alignment requires a resource bundle")]
pub struct MissingResources;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenAlignMode {
    Identity,
    Lexical,
}

/// A one-to-one set of (left token index, right token index) links, 1-based,
/// sorted by the left index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenAlignment {
    pub pairs: Vec<(usize, usize)>,
}

impl TokenAlignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn right_of(&self, left: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(l, _)| l == left).map(|&(_, r)| r)
    }

    pub fn has_left(&self, left: usize) -> bool {
        self.pairs.iter().any(|&(l, _)| l == left)
    }

    pub fn has_right(&self, right: usize) -> bool {
        self.pairs.iter().any(|&(_, r)| r == right)
    }

    /// Number of links joining a token of `left_chunk` to one of
    /// `right_chunk` (both as 1-based token index slices).
    pub fn links_between(&self, left_chunk: &[usize], right_chunk: &[usize]) -> usize {
        self.pairs
            .iter()
            .filter(|&&(l, r)| left_chunk.contains(&l) && right_chunk.contains(&r))
            .count()
    }
}

pub fn align_tokens(
    sent1: &[Token],
    sent2: &[Token],
    mode: TokenAlignMode,
    bundle: Option<&LexicalResources>,
    theta: f64,
) -> Result<TokenAlignment, MissingResources> {
    match mode {
        TokenAlignMode::Identity => Ok(align_identity(sent1, sent2)),
        TokenAlignMode::Lexical => {
            let bundle = bundle.ok_or(MissingResources)?;
            Ok(align_lexical(sent1, sent2, bundle, theta))
        }
    }
}

fn align_identity(sent1: &[Token], sent2: &[Token]) -> TokenAlignment {
    use std::collections::HashMap;
    // Queue up right-side occurrences per surface, then consume them
    // left-to-right: the k-th occurrence on each side meets its twin.
    let mut queues: HashMap<String, std::collections::VecDeque<usize>> = HashMap::new();
    for t in sent2 {
        queues
            .entry(t.surface.to_lowercase())
            .or_default()
            .push_back(t.index);
    }
    let mut pairs = Vec::new();
    for t in sent1 {
        if let Some(queue) = queues.get_mut(&t.surface.to_lowercase()) {
            if let Some(j) = queue.pop_front() {
                pairs.push((t.index, j));
            }
        }
    }
    pairs.sort_unstable();
    TokenAlignment { pairs }
}

fn token_similarity(a: &Token, b: &Token, bundle: &LexicalResources) -> f64 {
    if a.surface.to_lowercase() == b.surface.to_lowercase()
        || a.lemma_or_surface() == b.lemma_or_surface()
    {
        return 1.0;
    }
    bundle.word_similarity(&a.surface, &b.surface)
}

fn align_lexical(
    sent1: &[Token],
    sent2: &[Token],
    bundle: &LexicalResources,
    theta: f64,
) -> TokenAlignment {
    let n1 = sent1.len();
    let n2 = sent2.len();
    if n1 == 0 || n2 == 0 {
        return TokenAlignment::default();
    }
    let mut base = vec![vec![0.0f64; n2]; n1];
    for (i, a) in sent1.iter().enumerate() {
        for (j, b) in sent2.iter().enumerate() {
            let s = token_similarity(a, b, bundle);
            if s >= theta {
                base[i][j] = s;
            }
        }
    }
    // Equal-weight assignments are broken towards links between nearby
    // positions, which keeps duplicate words in their original order.
    let span = (n1 + n2) as f64;
    let perturbed: Vec<Vec<f64>> = base
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &w)| {
                    if w > 0.0 {
                        let skew = (i as f64 - j as f64) / span;
                        w + TIE_BREAK * (1.0 - skew * skew)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = max_weight_assignment(&perturbed)
        .into_iter()
        .filter(|&(i, j)| base[i][j] > 0.0)
        .map(|(i, j)| (sent1[i].index, sent2[j].index))
        .collect();
    pairs.sort_unstable();
    TokenAlignment { pairs }
}
