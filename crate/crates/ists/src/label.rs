//! Relation labeling of aligned chunk pairs.
//!
//! Two labelers are provided. The rule baseline tags every aligned pair
//! EQUI with score 5. The trained labeler extracts 21 features per chunk
//! pair — token-overlap ratios, length differences, six taxonomy
//! similarities with presence flags, specificity and depth signals, two
//! hashed bags of lemmas and per-resource maximum word similarities — and
//! feeds them to a multinomial logistic regression over the six relation
//! labels. Grid search over the L2 strength with shuffled 5-fold cross
//! validation picks the final model.

use std::collections::HashSet;
use std::path::Path;

use crate::logreg::{self, LogReg, SparseVec};
use crate::model::{
    AlignmentLabel, AlignmentScore, ChunkAlignment, ChunkedSentence, CoreLabel, Token,
    RELATION_LABELS,
};
use crate::resources::{LexicalResources, RootMode, TaxonomyMeasure};
use crate::stopwords::StopwordList;

/// Width of each hashed bag-of-lemmas block.
pub const HASH_BITS: u32 = 15;
pub const HASH_SIZE: usize = 1 << HASH_BITS;
/// Dense feature slots ahead of the two hashed blocks.
pub const DENSE_SLOTS: usize = 31;

/// Total model input dimension (dense slots plus both hashed blocks).
pub fn feature_dim() -> usize {
    DENSE_SLOTS + 2 * HASH_SIZE
}

// Dense slot layout.
const F_JACCARD_ALL: usize = 0;
const F_JACCARD_CONTENT: usize = 1;
const F_JACCARD_STOP: usize = 2;
const F_LEN_12: usize = 3;
const F_LEN_21: usize = 4;
const F_TAX_BASE: usize = 5; // six measures: path/lch/jcn × trueRoot/lcsAsRoot
const F_TAX_PRESENT: usize = 11; // six matching presence flags
const F_SPEC_12: usize = 17;
const F_SPEC_21: usize = 18;
const F_HEAD_DEPTH_DIFF: usize = 19;
const F_MIN_DEPTH_DIFF: usize = 20;
const F_MAX_DEPTH_DIFF: usize = 21;
const F_HEAD_DEPTH_PRESENT: usize = 22;
const F_MIN_DEPTH_PRESENT: usize = 23;
const F_MAX_DEPTH_PRESENT: usize = 24;
const F_RES_SIM: usize = 25; // embedding1, embedding2, paraphrase maxima
const F_RES_PRESENT: usize = 28;

/// Extracted features of one aligned chunk pair: a fixed dense block and the
/// hashed lemma indicators of each side.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub dense: [f64; DENSE_SLOTS],
    pub bag1: Vec<u32>,
    pub bag2: Vec<u32>,
}

fn fnv1a64(s: &str) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn hash_slot(word: &str) -> u32 {
    (fnv1a64(word) & (HASH_SIZE as u64 - 1)) as u32
}

fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Head of a chunk: its last non-stopword token, or the last token when all
/// of them are stopwords.
pub fn chunk_head<'a>(tokens: &[&'a Token], stop: &StopwordList) -> &'a Token {
    tokens
        .iter()
        .rev()
        .find(|t| !stop.contains(&t.surface))
        .copied()
        .unwrap_or_else(|| tokens.last().copied().expect("chunk cannot be empty"))
}

fn gather<'a>(sent: &'a ChunkedSentence, indices: &[usize]) -> Vec<&'a Token> {
    indices.iter().map(|&i| &sent.tokens[i - 1]).collect()
}

pub fn extract_features(
    sent1: &ChunkedSentence,
    indices1: &[usize],
    sent2: &ChunkedSentence,
    indices2: &[usize],
    bundle: &LexicalResources,
    stop: &StopwordList,
) -> FeatureVector {
    let c1 = gather(sent1, indices1);
    let c2 = gather(sent2, indices2);
    let mut dense = [0.0f64; DENSE_SLOTS];

    // Token-overlap ratios over lowercased surfaces: all tokens, then the
    // content and stopword halves separately.
    let lower = |ts: &[&Token], keep: &dyn Fn(&str) -> bool| -> HashSet<String> {
        ts.iter()
            .map(|t| t.surface.to_lowercase())
            .filter(|w| keep(w))
            .collect()
    };
    let all1 = lower(&c1, &|_| true);
    let all2 = lower(&c2, &|_| true);
    dense[F_JACCARD_ALL] = jaccard(&all1, &all2);
    dense[F_JACCARD_CONTENT] = jaccard(
        &lower(&c1, &|w| !stop.contains(w)),
        &lower(&c2, &|w| !stop.contains(w)),
    );
    dense[F_JACCARD_STOP] = jaccard(
        &lower(&c1, &|w| stop.contains(w)),
        &lower(&c2, &|w| stop.contains(w)),
    );

    dense[F_LEN_12] = c1.len() as f64 - c2.len() as f64;
    dense[F_LEN_21] = c2.len() as f64 - c1.len() as f64;

    let head1 = chunk_head(&c1, stop);
    let head2 = chunk_head(&c2, stop);
    if let Some(tax) = &bundle.taxonomy {
        let lemma1 = head1.lemma_or_surface();
        let lemma2 = head2.lemma_or_surface();
        let measures = [
            (TaxonomyMeasure::Path, RootMode::TrueRoot),
            (TaxonomyMeasure::Lch, RootMode::TrueRoot),
            (TaxonomyMeasure::Jcn, RootMode::TrueRoot),
            (TaxonomyMeasure::Path, RootMode::LcsAsRoot),
            (TaxonomyMeasure::Lch, RootMode::LcsAsRoot),
            (TaxonomyMeasure::Jcn, RootMode::LcsAsRoot),
        ];
        for (k, (measure, root)) in measures.into_iter().enumerate() {
            if let Some(v) = tax.feature_similarity(&lemma1, &lemma2, measure, root) {
                dense[F_TAX_BASE + k] = v;
                dense[F_TAX_PRESENT + k] = 1.0;
            }
        }
        dense[F_SPEC_12] = tax.is_more_specific(&lemma1, &lemma2) as u8 as f64;
        dense[F_SPEC_21] = tax.is_more_specific(&lemma2, &lemma1) as u8 as f64;

        let d1 = tax.lemma_depth(&lemma1);
        let d2 = tax.lemma_depth(&lemma2);
        if let (Some(d1), Some(d2)) = (d1, d2) {
            dense[F_HEAD_DEPTH_DIFF] = d1 as f64 - d2 as f64;
            dense[F_HEAD_DEPTH_PRESENT] = 1.0;
        }

        // Depth differences over every cross-chunk token pair with both
        // lemmas in the taxonomy.
        let mut min_diff: Option<f64> = None;
        let mut max_diff: Option<f64> = None;
        for a in &c1 {
            let Some(da) = tax.lemma_depth(&a.lemma_or_surface()) else {
                continue;
            };
            for b in &c2 {
                let Some(db) = tax.lemma_depth(&b.lemma_or_surface()) else {
                    continue;
                };
                let diff = da as f64 - db as f64;
                if min_diff.map_or(true, |m| diff < m) {
                    min_diff = Some(diff);
                }
                if max_diff.map_or(true, |m| diff > m) {
                    max_diff = Some(diff);
                }
            }
        }
        if let Some(m) = min_diff {
            dense[F_MIN_DEPTH_DIFF] = m;
            dense[F_MIN_DEPTH_PRESENT] = 1.0;
        }
        if let Some(m) = max_diff {
            dense[F_MAX_DEPTH_DIFF] = m;
            dense[F_MAX_DEPTH_PRESENT] = 1.0;
        }
    }

    // Per-resource maximum similarity over all cross-chunk word pairs.
    let lookups: [&dyn Fn(&str, &str) -> Option<f64>; 3] = [
        &|a, b| bundle.embedding1.as_ref().and_then(|e| e.similarity(a, b)),
        &|a, b| bundle.embedding2.as_ref().and_then(|e| e.similarity(a, b)),
        &|a, b| bundle.paraphrase.as_ref().and_then(|p| p.similarity(a, b)),
    ];
    for (k, lookup) in lookups.into_iter().enumerate() {
        let mut best: Option<f64> = None;
        for a in &c1 {
            for b in &c2 {
                if let Some(v) = lookup(&a.surface, &b.surface) {
                    if best.map_or(true, |x| v > x) {
                        best = Some(v);
                    }
                }
            }
        }
        if let Some(v) = best {
            dense[F_RES_SIM + k] = v;
            dense[F_RES_PRESENT + k] = 1.0;
        }
    }

    let bag = |ts: &[&Token]| -> Vec<u32> {
        let mut slots: Vec<u32> = ts.iter().map(|t| hash_slot(&t.lemma_or_surface())).collect();
        slots.sort_unstable();
        slots.dedup();
        slots
    };

    FeatureVector {
        dense,
        bag1: bag(&c1),
        bag2: bag(&c2),
    }
}

/// One training example: features plus the gold relation label.
#[derive(Debug, Clone)]
pub struct LabeledInstance {
    pub features: FeatureVector,
    pub label: CoreLabel,
}

pub fn class_index(label: CoreLabel) -> Option<usize> {
    RELATION_LABELS.iter().position(|&l| l == label)
}

/// A trained relation labeler: feature standardization plus the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelModel {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub lambda: f64,
    pub logreg: LogReg,
}

impl LabelModel {
    fn to_sparse(&self, fv: &FeatureVector) -> SparseVec {
        sparse_from(fv, &self.means, &self.stds)
    }

    pub fn predict(&self, fv: &FeatureVector) -> CoreLabel {
        RELATION_LABELS[self.logreg.predict(&self.to_sparse(fv))]
    }
}

fn sparse_from(fv: &FeatureVector, means: &[f64], stds: &[f64]) -> SparseVec {
    let mut x: SparseVec = Vec::with_capacity(DENSE_SLOTS + fv.bag1.len() + fv.bag2.len());
    for (i, &v) in fv.dense.iter().enumerate() {
        let centered = v - means[i];
        let scaled = if stds[i] > 0.0 { centered / stds[i] } else { centered };
        x.push((i as u32, scaled));
    }
    for &slot in &fv.bag1 {
        x.push((DENSE_SLOTS as u32 + slot, 1.0));
    }
    for &slot in &fv.bag2 {
        x.push(((DENSE_SLOTS + HASH_SIZE) as u32 + slot, 1.0));
    }
    x
}

/// Regularization strengths tried by the grid search.
pub const LAMBDA_GRID: [f64; 4] = [1e-4, 1e-3, 1e-2, 1e-1];

#[derive(Debug)]
pub struct TrainOutcome {
    pub model: LabelModel,
    /// (lambda, mean CV accuracy) per grid point, in grid order.
    pub grid_scores: Vec<(f64, f64)>,
    pub best_lambda: f64,
    pub best_accuracy: f64,
}

/// Grid-searched training: shuffled 5-fold cross validation per candidate
/// strength, then a final fit on everything with the winner.
pub fn train_labeler(instances: &[LabeledInstance], seed: u64) -> Result<TrainOutcome, String> {
    let labels: HashSet<CoreLabel> = instances.iter().map(|i| i.label).collect();
    if labels.len() < 2 {
        return Err(format!(
            "training needs at least two distinct labels, got {}",
            labels.len()
        ));
    }

    let mut means = vec![0.0f64; DENSE_SLOTS];
    let mut stds = vec![0.0f64; DENSE_SLOTS];
    let n = instances.len() as f64;
    for inst in instances {
        for (i, &v) in inst.features.dense.iter().enumerate() {
            means[i] += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    for inst in instances {
        for (i, &v) in inst.features.dense.iter().enumerate() {
            stds[i] += (v - means[i]) * (v - means[i]);
        }
    }
    for s in &mut stds {
        *s = (*s / n).sqrt();
    }

    let samples: Vec<(SparseVec, usize)> = instances
        .iter()
        .map(|inst| {
            let class = class_index(inst.label)
                .ok_or_else(|| format!("label {} cannot be trained on", inst.label))?;
            Ok((sparse_from(&inst.features, &means, &stds), class))
        })
        .collect::<Result<_, String>>()?;

    let dim = feature_dim();
    let k = RELATION_LABELS.len();
    let mut grid_scores = Vec::with_capacity(LAMBDA_GRID.len());
    let mut best: Option<(f64, f64)> = None; // (accuracy, lambda)
    for &lambda in &LAMBDA_GRID {
        let acc = logreg::cross_validate(&samples, dim, k, 5, lambda, seed);
        grid_scores.push((lambda, acc));
        if best.map_or(true, |(b, _)| acc > b) {
            best = Some((acc, lambda));
        }
    }
    let (best_accuracy, best_lambda) = best.unwrap();
    let logreg = logreg::fit(&samples, dim, k, best_lambda);
    Ok(TrainOutcome {
        model: LabelModel {
            means,
            stds,
            lambda: best_lambda,
            logreg,
        },
        grid_scores,
        best_lambda,
        best_accuracy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainMode {
    Gold,
    Mixed,
}

/// Builds (features, label) instances from gold pairs. Gold mode uses the
/// gold chunks of every relation-labeled record. Mixed mode appends a second
/// copy of the data recomputed over a system chunking: each gold record is
/// re-expressed through the system chunk with the largest token overlap on
/// each side, inheriting the gold label. FACT/POL flags are dropped;
/// unaligned records contribute nothing.
pub fn build_training_set(
    pairs: &[crate::model::InterpretablePair],
    system: Option<&[(ChunkedSentence, ChunkedSentence)]>,
    bundle: &LexicalResources,
    stop: &StopwordList,
    mode: TrainMode,
) -> Result<Vec<LabeledInstance>, String> {
    let mut instances = Vec::new();
    for pair in pairs {
        for a in &pair.alignments {
            if !a.label.core.is_relation() {
                continue;
            }
            let (Some(left), Some(right)) = (&a.left, &a.right) else {
                continue;
            };
            instances.push(LabeledInstance {
                features: extract_features(&pair.sent1, left, &pair.sent2, right, bundle, stop),
                label: a.label.core,
            });
        }
    }

    if mode == TrainMode::Mixed {
        let system = system.ok_or("mixed-mode training requires system chunkings")?;
        if system.len() != pairs.len() {
            return Err(format!(
                "system chunkings cover {} pairs, gold data has {}",
                system.len(),
                pairs.len()
            ));
        }
        for (pair, (sys1, sys2)) in pairs.iter().zip(system) {
            for (gold_sent, sys_sent) in [(&pair.sent1, sys1), (&pair.sent2, sys2)] {
                if gold_sent.tokens.len() != sys_sent.tokens.len() {
                    return Err(format!(
                        "pair {}: system chunking tokenization differs from gold",
                        pair.pair_id
                    ));
                }
                for (g, s) in gold_sent.tokens.iter().zip(&sys_sent.tokens) {
                    if g.surface != s.surface {
                        return Err(format!(
                            "pair {}: system token `{}` does not match gold `{}`",
                            pair.pair_id, s.surface, g.surface
                        ));
                    }
                }
            }
            for a in &pair.alignments {
                if !a.label.core.is_relation() {
                    continue;
                }
                let (Some(left), Some(right)) = (&a.left, &a.right) else {
                    continue;
                };
                let (Some(sys_left), Some(sys_right)) =
                    (best_overlap(sys1, left), best_overlap(sys2, right))
                else {
                    continue;
                };
                instances.push(LabeledInstance {
                    features: extract_features(sys1, sys_left, sys2, sys_right, bundle, stop),
                    label: a.label.core,
                });
            }
        }
    }
    Ok(instances)
}

/// The chunk of `sent` sharing the most tokens with `indices`; earliest
/// chunk on ties, `None` when nothing overlaps.
fn best_overlap<'a>(sent: &'a ChunkedSentence, indices: &[usize]) -> Option<&'a [usize]> {
    let mut best: Option<(usize, &[usize])> = None;
    for chunk in &sent.chunks {
        let overlap = chunk
            .token_indices
            .iter()
            .filter(|i| indices.contains(i))
            .count();
        if overlap > 0 && best.map_or(true, |(b, _)| overlap > b) {
            best = Some((overlap, &chunk.token_indices));
        }
    }
    best.map(|(_, c)| c)
}

/// The rule baseline: every aligned pair becomes EQUI with score 5; records
/// already marked partially aligned or unaligned keep their label and stay
/// unscored.
pub fn baseline_label(records: &[ChunkAlignment]) -> Vec<ChunkAlignment> {
    records
        .iter()
        .map(|r| {
            let mut out = r.clone();
            if r.is_aligned() {
                out.label = AlignmentLabel::new(CoreLabel::Equi);
                out.score = AlignmentScore::Value(5.0);
            } else {
                out.label = AlignmentLabel::new(r.label.core);
                out.score = AlignmentScore::Nil;
            }
            out
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Model persistence: a small line-oriented text format. Floats are written
// with Rust's shortest round-trip formatting, so load(save(m)) == m exactly.

impl LabelModel {
    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        out.push_str("chunk-relation-model v1\n");
        let names: Vec<&str> = RELATION_LABELS.iter().map(|l| l.as_str()).collect();
        let _ = writeln!(out, "classes {}", names.join(" "));
        let _ = writeln!(out, "dense {DENSE_SLOTS}");
        let _ = writeln!(out, "hash {HASH_SIZE}");
        let _ = writeln!(out, "lambda {}", self.lambda);
        let join = |vs: &[f64]| -> String {
            vs.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "means {}", join(&self.means));
        let _ = writeln!(out, "stds {}", join(&self.stds));
        for (label, w) in RELATION_LABELS.iter().zip(&self.logreg.weights) {
            let _ = writeln!(out, "class {label}");
            let entries: Vec<String> = w
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| format!("{i}:{v}"))
                .collect();
            let _ = writeln!(out, "{}", entries.join(" "));
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let text =
            std::fs::read_to_string(path.as_ref()).map_err(|e| format!("reading model: {e}"))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        fn take(lines: &mut std::str::Lines, prefix: &str) -> Result<String, String> {
            let line = lines.next().ok_or_else(|| format!("missing `{prefix}` line"))?;
            line.strip_prefix(prefix)
                .map(|r| r.trim().to_string())
                .ok_or_else(|| format!("expected `{prefix}...`, found `{line}`"))
        }
        let mut lines = text.lines();
        let version = take(&mut lines, "chunk-relation-model ")?;
        if version != "v1" {
            return Err(format!("unsupported model version `{version}`"));
        }
        let classes = take(&mut lines, "classes ")?;
        let expected: Vec<&str> = RELATION_LABELS.iter().map(|l| l.as_str()).collect();
        if classes.split_whitespace().collect::<Vec<_>>() != expected {
            return Err(format!("unexpected class list `{classes}`"));
        }
        let dense: usize = take(&mut lines, "dense ")?.parse().map_err(|_| "bad dense count")?;
        let hash: usize = take(&mut lines, "hash ")?.parse().map_err(|_| "bad hash size")?;
        if dense != DENSE_SLOTS || hash != HASH_SIZE {
            return Err(format!(
                "feature space mismatch: model has dense {dense} hash {hash}, \
                 this build uses dense {DENSE_SLOTS} hash {HASH_SIZE}"
            ));
        }
        let lambda: f64 = take(&mut lines, "lambda ")?.parse().map_err(|_| "bad lambda")?;
        let parse_row = |s: &str| -> Result<Vec<f64>, String> {
            s.split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|_| format!("bad float `{v}`")))
                .collect()
        };
        let means = parse_row(&take(&mut lines, "means ")?)?;
        let stds = parse_row(&take(&mut lines, "stds ")?)?;
        if means.len() != DENSE_SLOTS || stds.len() != DENSE_SLOTS {
            return Err("standardization rows have the wrong width".to_string());
        }
        let dim = feature_dim();
        let mut weights = Vec::with_capacity(RELATION_LABELS.len());
        for label in RELATION_LABELS {
            let header = take(&mut lines, "class ")?;
            if header != label.as_str() {
                return Err(format!("expected class {label}, found `{header}`"));
            }
            let row_line = lines.next().unwrap_or("");
            let mut row = vec![0.0f64; dim + 1];
            for entry in row_line.split_whitespace() {
                let (i, v) = entry
                    .split_once(':')
                    .ok_or_else(|| format!("bad weight entry `{entry}`"))?;
                let i: usize = i.parse().map_err(|_| format!("bad weight index `{i}`"))?;
                if i > dim {
                    return Err(format!("weight index {i} out of range"));
                }
                row[i] = v.parse().map_err(|_| format!("bad weight value `{v}`"))?;
            }
            weights.push(row);
        }
        Ok(LabelModel {
            means,
            stds,
            lambda,
            logreg: LogReg {
                dim,
                n_classes: RELATION_LABELS.len(),
                weights,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InterpretablePair;
    use crate::resources::{ParaphraseTable, SynsetEntry, Taxonomy};

    fn toy_bundle() -> LexicalResources {
        let entries = vec![
            SynsetEntry {
                id: "n1".into(),
                pos: "n".into(),
                lemmas: vec!["entity".into()],
                hypernyms: vec![],
            },
            SynsetEntry {
                id: "n2".into(),
                pos: "n".into(),
                lemmas: vec!["bird".into()],
                hypernyms: vec!["n1".into()],
            },
            SynsetEntry {
                id: "n3".into(),
                pos: "n".into(),
                lemmas: vec!["crow".into()],
                hypernyms: vec!["n2".into()],
            },
        ];
        let mut taxonomy = Taxonomy::build(entries).unwrap();
        taxonomy
            .set_ic([
                ("n1".to_string(), 0.5),
                ("n2".to_string(), 2.0),
                ("n3".to_string(), 4.0),
            ])
            .unwrap();
        LexicalResources {
            taxonomy: Some(taxonomy),
            paraphrase: Some(ParaphraseTable::from_entries([(
                "moped".to_string(),
                "scooter".to_string(),
                0.8,
            )])),
            ..LexicalResources::empty()
        }
    }

    fn features(words1: &[&str], words2: &[&str]) -> FeatureVector {
        let s1 = ChunkedSentence::from_spans(words1, &[(1, words1.len())]);
        let s2 = ChunkedSentence::from_spans(words2, &[(1, words2.len())]);
        extract_features(
            &s1,
            &s1.chunks[0].token_indices,
            &s2,
            &s2.chunks[0].token_indices,
            &toy_bundle(),
            &StopwordList::default(),
        )
    }

    #[test]
    fn jaccard_features_split_by_stopwords() {
        let fv = features(&["a", "red", "moped"], &["the", "red", "scooter"]);
        assert!((fv.dense[F_JACCARD_ALL] - 0.2).abs() < 1e-12);
        // Content words: {red, moped} vs {red, scooter}.
        assert!((fv.dense[F_JACCARD_CONTENT] - 1.0 / 3.0).abs() < 1e-12);
        // Stopwords: {a} vs {the}, disjoint.
        assert_eq!(fv.dense[F_JACCARD_STOP], 0.0);
        // The paraphrase table knows moped–scooter.
        assert!((fv.dense[F_RES_SIM + 2] - 0.8).abs() < 1e-12);
        assert_eq!(fv.dense[F_RES_PRESENT + 2], 1.0);
    }

    #[test]
    fn identical_chunks_have_unit_overlap() {
        let fv = features(&["red", "moped"], &["red", "moped"]);
        assert_eq!(fv.dense[F_JACCARD_ALL], 1.0);
        assert_eq!(fv.dense[F_JACCARD_CONTENT], 1.0);
        // No stopwords on either side: empty union counts as 0.
        assert_eq!(fv.dense[F_JACCARD_STOP], 0.0);
        assert_eq!(fv.dense[F_LEN_12], 0.0);
        assert_eq!(fv.dense[F_LEN_21], 0.0);
        assert_eq!(fv.bag1, fv.bag2);
    }

    #[test]
    fn specificity_flags_follow_the_taxonomy() {
        let fv = features(&["a", "crow"], &["a", "bird"]);
        assert_eq!(fv.dense[F_SPEC_12], 1.0);
        assert_eq!(fv.dense[F_SPEC_21], 0.0);
        // crow sits one level under bird.
        assert_eq!(fv.dense[F_HEAD_DEPTH_DIFF], 1.0);
        assert_eq!(fv.dense[F_HEAD_DEPTH_PRESENT], 1.0);
        // All six taxonomy measures are defined here.
        for k in 0..6 {
            assert_eq!(fv.dense[F_TAX_PRESENT + k], 1.0, "measure {k} absent");
            assert!(fv.dense[F_TAX_BASE + k] > 0.0);
        }
    }

    #[test]
    fn unknown_heads_leave_taxonomy_slots_absent() {
        let fv = features(&["the", "zeppelin"], &["a", "quasar"]);
        for k in 0..6 {
            assert_eq!(fv.dense[F_TAX_BASE + k], 0.0);
            assert_eq!(fv.dense[F_TAX_PRESENT + k], 0.0);
        }
        assert_eq!(fv.dense[F_HEAD_DEPTH_PRESENT], 0.0);
        assert_eq!(fv.dense[F_MIN_DEPTH_PRESENT], 0.0);
    }

    #[test]
    fn swapping_chunks_mirrors_the_asymmetric_features() {
        let cases: [(&[&str], &[&str]); 3] = [
            (&["a", "crow"], &["the", "big", "bird"]),
            (&["red", "moped"], &["the", "red", "scooter"]),
            (&["crow"], &["entity"]),
        ];
        for (w1, w2) in cases {
            let fwd = features(w1, w2);
            let rev = features(w2, w1);
            assert_eq!(fwd.dense[F_JACCARD_ALL], rev.dense[F_JACCARD_ALL]);
            assert_eq!(fwd.dense[F_JACCARD_CONTENT], rev.dense[F_JACCARD_CONTENT]);
            assert_eq!(fwd.dense[F_JACCARD_STOP], rev.dense[F_JACCARD_STOP]);
            assert_eq!(fwd.dense[F_LEN_12], rev.dense[F_LEN_21]);
            assert_eq!(fwd.dense[F_LEN_21], rev.dense[F_LEN_12]);
            for k in 0..6 {
                assert_eq!(fwd.dense[F_TAX_BASE + k], rev.dense[F_TAX_BASE + k]);
                assert_eq!(fwd.dense[F_TAX_PRESENT + k], rev.dense[F_TAX_PRESENT + k]);
            }
            assert_eq!(fwd.dense[F_SPEC_12], rev.dense[F_SPEC_21]);
            assert_eq!(fwd.dense[F_SPEC_21], rev.dense[F_SPEC_12]);
            assert_eq!(fwd.dense[F_HEAD_DEPTH_DIFF], -rev.dense[F_HEAD_DEPTH_DIFF]);
            assert_eq!(fwd.dense[F_MIN_DEPTH_DIFF], -rev.dense[F_MAX_DEPTH_DIFF]);
            assert_eq!(fwd.dense[F_MAX_DEPTH_DIFF], -rev.dense[F_MIN_DEPTH_DIFF]);
            for k in 0..3 {
                assert_eq!(fwd.dense[F_RES_SIM + k], rev.dense[F_RES_SIM + k]);
                assert_eq!(fwd.dense[F_RES_PRESENT + k], rev.dense[F_RES_PRESENT + k]);
            }
            assert_eq!(fwd.bag1, rev.bag2);
            assert_eq!(fwd.bag2, rev.bag1);
        }
    }

    fn pair_with_records() -> InterpretablePair {
        let sent1 = ChunkedSentence::from_spans(&["a", "crow", "flies"], &[(1, 2), (3, 3)]);
        let sent2 = ChunkedSentence::from_spans(&["a", "bird", "sits"], &[(1, 2), (3, 3)]);
        InterpretablePair {
            pair_id: "1".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![
                ChunkAlignment::aligned(
                    vec![1, 2],
                    vec![1, 2],
                    AlignmentLabel::new(CoreLabel::Spe1).with_fact(),
                    AlignmentScore::Value(4.0),
                ),
                ChunkAlignment::unaligned(vec![3], true, CoreLabel::Noali),
                ChunkAlignment::unaligned(vec![3], false, CoreLabel::Noali),
            ],
        }
    }

    #[test]
    fn gold_training_set_keeps_only_relation_records() {
        let pair = pair_with_records();
        let instances = build_training_set(
            std::slice::from_ref(&pair),
            None,
            &toy_bundle(),
            &StopwordList::default(),
            TrainMode::Gold,
        )
        .unwrap();
        assert_eq!(instances.len(), 1);
        // The FACT flag is gone: only the core label is kept.
        assert_eq!(instances[0].label, CoreLabel::Spe1);
    }

    #[test]
    fn mixed_training_projects_onto_system_chunks() {
        let pair = pair_with_records();
        // System chunking splits the left noun phrase in two.
        let sys1 = ChunkedSentence::from_spans(&["a", "crow", "flies"], &[(1, 1), (2, 2), (3, 3)]);
        let sys2 = ChunkedSentence::from_spans(&["a", "bird", "sits"], &[(1, 2), (3, 3)]);
        let instances = build_training_set(
            std::slice::from_ref(&pair),
            Some(&[(sys1, sys2)]),
            &toy_bundle(),
            &StopwordList::default(),
            TrainMode::Mixed,
        )
        .unwrap();
        // One gold instance plus one projected instance.
        assert_eq!(instances.len(), 2);
        assert_eq!(instances[1].label, CoreLabel::Spe1);
        // The projected left chunk is the best-overlap system chunk [1].
        // Both gold tokens overlap single-token chunks; the earliest wins.
        assert_eq!(instances[1].features.dense[F_LEN_12], -1.0);
    }

    #[test]
    fn mixed_training_requires_matching_tokens() {
        let pair = pair_with_records();
        let sys1 = ChunkedSentence::from_spans(&["a", "raven", "flies"], &[(1, 2), (3, 3)]);
        let sys2 = ChunkedSentence::from_spans(&["a", "bird", "sits"], &[(1, 2), (3, 3)]);
        let err = build_training_set(
            std::slice::from_ref(&pair),
            Some(&[(sys1, sys2)]),
            &toy_bundle(),
            &StopwordList::default(),
            TrainMode::Mixed,
        )
        .unwrap_err();
        assert!(err.contains("does not match gold"));
    }

    fn synthetic_instances() -> Vec<LabeledInstance> {
        // Dense slot 0 decides the class; everything else stays flat.
        let mut out = Vec::new();
        for k in 0..24 {
            let v = 0.4 + 0.02 * (k % 12) as f64;
            let mut dense = [0.0; DENSE_SLOTS];
            dense[0] = v;
            out.push(LabeledInstance {
                features: FeatureVector {
                    dense,
                    bag1: vec![3],
                    bag2: vec![7],
                },
                label: CoreLabel::Equi,
            });
            let mut dense = [0.0; DENSE_SLOTS];
            dense[0] = -v;
            out.push(LabeledInstance {
                features: FeatureVector {
                    dense,
                    bag1: vec![5],
                    bag2: vec![9],
                },
                label: CoreLabel::Oppo,
            });
        }
        out
    }

    #[test]
    fn training_separable_data_is_perfect() {
        let instances = synthetic_instances();
        let outcome = train_labeler(&instances, 7).unwrap();
        assert!((outcome.best_accuracy - 1.0).abs() < 1e-12);
        for inst in &instances {
            assert_eq!(outcome.model.predict(&inst.features), inst.label);
        }
        assert_eq!(outcome.grid_scores.len(), LAMBDA_GRID.len());
    }

    #[test]
    fn training_rejects_single_label_data() {
        let mut instances = synthetic_instances();
        instances.retain(|i| i.label == CoreLabel::Equi);
        assert!(train_labeler(&instances, 7).is_err());
    }

    #[test]
    fn training_is_reproducible_bytes_for_bytes() {
        let instances = synthetic_instances();
        let a = train_labeler(&instances, 99).unwrap();
        let b = train_labeler(&instances, 99).unwrap();
        assert_eq!(a.model.to_text(), b.model.to_text());
    }

    #[test]
    fn zero_model_falls_back_to_the_first_label() {
        let model = LabelModel {
            means: vec![0.0; DENSE_SLOTS],
            stds: vec![1.0; DENSE_SLOTS],
            lambda: 0.0,
            logreg: LogReg::zeros(feature_dim(), RELATION_LABELS.len()),
        };
        let fv = features(&["a", "crow"], &["a", "bird"]);
        assert_eq!(model.predict(&fv), CoreLabel::Equi);
    }

    #[test]
    fn model_text_round_trips_exactly() {
        let instances = synthetic_instances();
        let outcome = train_labeler(&instances, 3).unwrap();
        let text = outcome.model.to_text();
        let reloaded = LabelModel::from_text(&text).unwrap();
        assert_eq!(reloaded, outcome.model);
        assert_eq!(reloaded.to_text(), text);
    }

    #[test]
    fn model_load_rejects_foreign_feature_spaces() {
        let instances = synthetic_instances();
        let outcome = train_labeler(&instances, 3).unwrap();
        let text = outcome.model.to_text().replace("hash 32768", "hash 1024");
        let err = LabelModel::from_text(&text).unwrap_err();
        assert!(err.contains("feature space mismatch"));
    }

    #[test]
    fn baseline_marks_aligned_pairs_equi_five() {
        let records = vec![
            ChunkAlignment::aligned(
                vec![1],
                vec![1],
                AlignmentLabel::new(CoreLabel::Simi),
                AlignmentScore::Value(3.0),
            ),
            ChunkAlignment::unaligned(vec![2], true, CoreLabel::Noali),
            ChunkAlignment::unaligned(vec![2], false, CoreLabel::Alic),
        ];
        let out = baseline_label(&records);
        assert_eq!(out[0].label.core, CoreLabel::Equi);
        assert_eq!(out[0].score, AlignmentScore::Value(5.0));
        assert_eq!(out[1].label.core, CoreLabel::Noali);
        assert_eq!(out[1].score, AlignmentScore::Nil);
        assert_eq!(out[2].label.core, CoreLabel::Alic);
        assert_eq!(out[2].score, AlignmentScore::Nil);
        assert!(baseline_label(&[]).is_empty());
    }
}
