//! Chunk alignment on top of a token alignment.
//!
//! Each chunk pair gets a weight: the number of token links between the two
//! chunks, normalized by the mean chunk length. Pairs are then selected
//! either greedily (repeatedly take the heaviest remaining cell) or by a
//! maximum-weight assignment; chunks left over are tagged as partially
//! aligned or unaligned depending on whether any of their tokens is linked.

use crate::assignment::max_weight_assignment;
use crate::model::{ChunkedSentence, CoreLabel};
use crate::token_align::TokenAlignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkAlignStrategy {
    /// Locally best pair first; ties broken by row then column.
    Greedy,
    /// Globally maximum total weight.
    Optimal,
}

/// `weights[a][b]` = links between chunk `a` of sentence 1 and chunk `b` of
/// sentence 2, divided by the mean of the two chunk lengths.
pub fn build_weight_matrix(
    sent1: &ChunkedSentence,
    sent2: &ChunkedSentence,
    tokens: &TokenAlignment,
) -> Vec<Vec<f64>> {
    sent1
        .chunks
        .iter()
        .map(|a| {
            sent2
                .chunks
                .iter()
                .map(|b| {
                    let links = tokens.links_between(&a.token_indices, &b.token_indices);
                    if links == 0 {
                        0.0
                    } else {
                        let mean = (a.len() + b.len()) as f64 / 2.0;
                        links as f64 / mean
                    }
                })
                .collect()
        })
        .collect()
}

/// Repeatedly picks the heaviest positive cell, earliest row then earliest
/// column on ties, and retires its row and column. Output sorted by row.
pub fn greedy_align(weights: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut pairs = Vec::new();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for (i, row) in weights.iter().enumerate() {
            if row_used[i] {
                continue;
            }
            for (j, &w) in row.iter().enumerate() {
                if col_used[j] || w <= 0.0 {
                    continue;
                }
                if best.map_or(true, |(bw, _, _)| w > bw) {
                    best = Some((w, i, j));
                }
            }
        }
        match best {
            Some((_, i, j)) => {
                row_used[i] = true;
                col_used[j] = true;
                pairs.push((i, j));
            }
            None => break,
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Maximum-weight one-to-one selection; zero-weight pairs are dropped.
pub fn optimal_align(weights: &[Vec<f64>]) -> Vec<(usize, usize)> {
    max_weight_assignment(weights)
        .into_iter()
        .filter(|&(i, j)| weights[i][j] > 0.0)
        .collect()
}

pub fn align_chunks(
    sent1: &ChunkedSentence,
    sent2: &ChunkedSentence,
    tokens: &TokenAlignment,
    strategy: ChunkAlignStrategy,
) -> Vec<(usize, usize)> {
    let weights = build_weight_matrix(sent1, sent2, tokens);
    match strategy {
        ChunkAlignStrategy::Greedy => greedy_align(&weights),
        ChunkAlignStrategy::Optimal => optimal_align(&weights),
    }
}

/// Label for a chunk that ended up in no chunk pair: partially aligned when
/// at least one of its tokens carries a link, unaligned otherwise. `side` is
/// 1 for the left sentence, 2 for the right.
pub fn classify_unaligned(
    chunk_tokens: &[usize],
    side: usize,
    tokens: &TokenAlignment,
) -> CoreLabel {
    let linked = chunk_tokens.iter().any(|&t| match side {
        1 => tokens.has_left(t),
        _ => tokens.has_right(t),
    });
    if linked {
        CoreLabel::Alic
    } else {
        CoreLabel::Noali
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChunkedSentence;

    fn chunked(words: &[&str], spans: &[(usize, usize)]) -> ChunkedSentence {
        ChunkedSentence::from_spans(words, spans)
    }

    #[test]
    fn weight_is_links_over_mean_length() {
        // [a b] vs [a b c]: two links over mean length 2.5.
        let s1 = chunked(&["a", "b"], &[(1, 2)]);
        let s2 = chunked(&["a", "b", "c"], &[(1, 3)]);
        let ta = TokenAlignment {
            pairs: vec![(1, 1), (2, 2)],
        };
        let w = build_weight_matrix(&s1, &s2, &ta);
        assert!((w[0][0] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn zero_link_cells_stay_zero() {
        let s1 = chunked(&["a"], &[(1, 1)]);
        let s2 = chunked(&["b"], &[(1, 1)]);
        let ta = TokenAlignment::default();
        let w = build_weight_matrix(&s1, &s2, &ta);
        assert_eq!(w, vec![vec![0.0]]);
    }

    #[test]
    fn greedy_and_optimal_agree_on_dominant_diagonal() {
        let w = vec![vec![1.0, 0.4], vec![0.4, 0.9]];
        assert_eq!(greedy_align(&w), [(0, 0), (1, 1)]);
        assert_eq!(optimal_align(&w), [(0, 0), (1, 1)]);
    }

    #[test]
    fn greedy_can_lose_to_optimal() {
        // Greedy grabs 0.6 first and is left with 0.1; the assignment takes
        // the two 0.5 cells instead.
        let w = vec![vec![0.6, 0.5], vec![0.5, 0.1]];
        assert_eq!(greedy_align(&w), [(0, 0), (1, 1)]);
        assert_eq!(optimal_align(&w), [(0, 1), (1, 0)]);
        let total = |pairs: &[(usize, usize)]| -> f64 {
            pairs.iter().map(|&(i, j)| w[i][j]).sum()
        };
        assert!(total(&optimal_align(&w)) > total(&greedy_align(&w)));
    }

    #[test]
    fn greedy_breaks_ties_towards_earlier_rows_and_columns() {
        let w = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        assert_eq!(greedy_align(&w), [(0, 0), (1, 1)]);
    }

    #[test]
    fn zero_weight_pairs_are_not_emitted() {
        let w = vec![vec![0.9, 0.0], vec![0.0, 0.0]];
        assert_eq!(greedy_align(&w), [(0, 0)]);
        assert_eq!(optimal_align(&w), [(0, 0)]);
    }

    #[test]
    fn optimal_never_trails_greedy_on_random_matrices() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let w: Vec<Vec<f64>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| {
                            if rng.gen_bool(0.3) {
                                0.0
                            } else {
                                rng.gen_range(0.0..1.0)
                            }
                        })
                        .collect()
                })
                .collect();
            let total = |pairs: &[(usize, usize)]| -> f64 {
                pairs.iter().map(|&(i, j)| w[i][j]).sum()
            };
            assert!(total(&optimal_align(&w)) >= total(&greedy_align(&w)) - 1e-9);
        }
    }

    #[test]
    fn leftover_chunks_split_into_partial_and_unaligned() {
        let ta = TokenAlignment {
            pairs: vec![(2, 5)],
        };
        // Left chunk [1,2] has a linked token; [3,4] has none.
        assert_eq!(classify_unaligned(&[1, 2], 1, &ta), CoreLabel::Alic);
        assert_eq!(classify_unaligned(&[3, 4], 1, &ta), CoreLabel::Noali);
        // Right side looks at the other end of the links.
        assert_eq!(classify_unaligned(&[5], 2, &ta), CoreLabel::Alic);
        assert_eq!(classify_unaligned(&[2], 2, &ta), CoreLabel::Noali);
    }

    #[test]
    fn end_to_end_chunk_alignment() {
        // "12 killed in Pakistan" / "10 killed in NW Pakistan" with chunks
        // [12] [killed] [in Pakistan] and [10] [killed] [in NW Pakistan].
        let s1 = chunked(&["12", "killed", "in", "Pakistan"], &[(1, 1), (2, 2), (3, 4)]);
        let s2 = chunked(
            &["10", "killed", "in", "NW", "Pakistan"],
            &[(1, 1), (2, 2), (3, 5)],
        );
        let ta = TokenAlignment {
            pairs: vec![(2, 2), (3, 3), (4, 5)],
        };
        let pairs = align_chunks(&s1, &s2, &ta, ChunkAlignStrategy::Optimal);
        assert_eq!(pairs, [(1, 1), (2, 2)]);
        // The number chunks exchanged no token links, so they are left over
        // and classified as fully unaligned.
        assert_eq!(classify_unaligned(&[1], 1, &ta), CoreLabel::Noali);
        assert_eq!(classify_unaligned(&[1], 2, &ta), CoreLabel::Noali);
    }
}
