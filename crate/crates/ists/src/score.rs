//! Similarity scores for aligned chunk pairs.
//!
//! The chunk similarity is the mean of two directed sums: each word of one
//! chunk contributes its best word similarity against the other chunk,
//! weighted by idf. The final 0–5 alignment score is then fixed by the
//! label: exact equivalence pins the score to 5, unalignable chunks carry no
//! score, and every other relation maps the similarity into the open
//! interval by clamping.

use crate::model::{AlignmentScore, ChunkedSentence, CoreLabel, Token};
use crate::resources::LexicalResources;

/// Idf-weighted bidirectional chunk similarity in [0, 1].
///
/// For each direction, every word takes the maximum of
/// `word_similarity(w, v)` over the opposite chunk, and the contributions
/// are combined as a weighted mean with idf weights. A side whose idf mass
/// is zero falls back to uniform weights.
pub fn chunk_similarity(
    sent1: &ChunkedSentence,
    indices1: &[usize],
    sent2: &ChunkedSentence,
    indices2: &[usize],
    bundle: &LexicalResources,
) -> f64 {
    let c1: Vec<&Token> = indices1.iter().map(|&i| &sent1.tokens[i - 1]).collect();
    let c2: Vec<&Token> = indices2.iter().map(|&i| &sent2.tokens[i - 1]).collect();
    (directed_similarity(&c1, &c2, bundle) + directed_similarity(&c2, &c1, bundle)) / 2.0
}

fn directed_similarity(from: &[&Token], to: &[&Token], bundle: &LexicalResources) -> f64 {
    if from.is_empty() || to.is_empty() {
        return 0.0;
    }
    let mut weighted = 0.0;
    let mut mass = 0.0;
    let mut plain = 0.0;
    for w in from {
        let best = to
            .iter()
            .map(|v| bundle.word_similarity(&w.surface, &v.surface))
            .fold(0.0f64, f64::max);
        let idf = bundle.idf(&w.surface);
        weighted += best * idf;
        mass += idf;
        plain += best;
    }
    if mass > 0.0 {
        weighted / mass
    } else {
        plain / from.len() as f64
    }
}

/// Lower and upper clamp for scores of relations that are neither exact
/// equivalence nor unaligned: the score must stay strictly inside (0, 5).
pub const SCORE_FLOOR: f64 = 0.5;
pub const SCORE_CEIL: f64 = 4.9;

/// Final score under the label constraints: EQUI is always 5, partially
/// aligned and unaligned chunks have no score, and the remaining relations
/// scale the similarity to [`SCORE_FLOOR`], [`SCORE_CEIL`].
pub fn assign_score(label: CoreLabel, similarity: f64) -> AlignmentScore {
    match label {
        CoreLabel::Equi => AlignmentScore::Value(5.0),
        CoreLabel::Alic | CoreLabel::Noali => AlignmentScore::Nil,
        _ => AlignmentScore::Value((5.0 * similarity).clamp(SCORE_FLOOR, SCORE_CEIL)),
    }
}
