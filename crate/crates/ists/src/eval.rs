//! Evaluation of system annotations against gold, at four levels.
//!
//! Every aligned chunk record fans out into token pairs, each weighted by
//! `1/(|A|·|B|)` so the record carries total mass 1. Precision at a level is
//! the system-weighted matched mass over the number of system records;
//! recall mirrors it with gold weights. The levels only differ in the match
//! factor `m` of a token pair found on both sides: alignment ignores
//! annotations, the type level requires equal labels, the score level pays
//! `1 − |Δscore|/5`, and the combined level multiplies the last two.
//!
//! All pooling runs in one canonical order (sorted pair id, then token
//! indices), which makes swapping system and gold exchange precision and
//! recall bit for bit.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{AlignmentLabel, AlignmentScore, CoreLabel, InterpretablePair, RELATION_LABELS};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("pair `{0}` is missing from the {1} file")]
    MissingPair(String, &'static str),
    #[error("pair `{0}`: system and gold tokenizations differ")]
    TokenizationMismatch(String),
    #[error("pair `{0}`: token pair ({1}, {2}) appears in two alignment records")]
    DuplicateTokenPair(String, usize, usize),
}

/// Weighted token-pair expansion of one annotated pair. ALIC/NOALI records
/// have a null side and expand to nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenPairEntry {
    pub weight: f64,
    pub label: AlignmentLabel,
    pub score: AlignmentScore,
}

pub fn expand_token_pairs(
    pair: &InterpretablePair,
) -> Result<BTreeMap<(usize, usize), TokenPairEntry>, EvalError> {
    let mut map = BTreeMap::new();
    for a in &pair.alignments {
        let (Some(left), Some(right)) = (&a.left, &a.right) else {
            continue;
        };
        let weight = 1.0 / (left.len() * right.len()) as f64;
        for &i in left {
            for &j in right {
                let entry = TokenPairEntry {
                    weight,
                    label: a.label.clone(),
                    score: a.score,
                };
                if map.insert((i, j), entry).is_some() {
                    return Err(EvalError::DuplicateTokenPair(pair.pair_id.clone(), i, j));
                }
            }
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl EvalScores {
    fn from_parts(matched_sys: f64, matched_gold: f64, n_sys: usize, n_gold: usize) -> Self {
        let precision = if n_sys == 0 { 0.0 } else { matched_sys / n_sys as f64 };
        let recall = if n_gold == 0 { 0.0 } else { matched_gold / n_gold as f64 };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * (precision * recall) / (precision + recall)
        };
        EvalScores { precision, recall, f1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub ali: EvalScores,
    pub typ: EvalScores,
    pub score: EvalScores,
    pub ts: EvalScores,
    pub sys_alignments: usize,
    pub gold_alignments: usize,
}

/// Number of aligned (double-sided) records across all pairs.
fn count_aligned(pairs: &[InterpretablePair]) -> usize {
    pairs
        .iter()
        .flat_map(|p| &p.alignments)
        .filter(|a| a.is_aligned())
        .count()
}

fn score_factor(sys: AlignmentScore, gold: AlignmentScore) -> Option<f64> {
    match (sys, gold) {
        (AlignmentScore::Value(a), AlignmentScore::Value(b)) => Some(1.0 - (a - b).abs() / 5.0),
        _ => None,
    }
}

pub fn evaluate(
    sys: &[InterpretablePair],
    gold: &[InterpretablePair],
) -> Result<EvalReport, EvalError> {
    let sys_by_id: BTreeMap<&str, &InterpretablePair> =
        sys.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let gold_by_id: BTreeMap<&str, &InterpretablePair> =
        gold.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    for id in sys_by_id.keys() {
        if !gold_by_id.contains_key(id) {
            return Err(EvalError::MissingPair(id.to_string(), "gold"));
        }
    }
    for id in gold_by_id.keys() {
        if !sys_by_id.contains_key(id) {
            return Err(EvalError::MissingPair(id.to_string(), "system"));
        }
    }

    // Matched numerators: [level][side], side 0 = system, side 1 = gold.
    let mut ali = [0.0f64; 2];
    let mut typ = [0.0f64; 2];
    let mut sco = [0.0f64; 2];
    let mut ts = [0.0f64; 2];

    for (id, gold_pair) in &gold_by_id {
        let sys_pair = sys_by_id[id];
        let same_tokens = |a: &crate::model::ChunkedSentence, b: &crate::model::ChunkedSentence| {
            a.tokens.len() == b.tokens.len()
                && a.tokens
                    .iter()
                    .zip(&b.tokens)
                    .all(|(x, y)| x.surface == y.surface)
        };
        if !same_tokens(&sys_pair.sent1, &gold_pair.sent1)
            || !same_tokens(&sys_pair.sent2, &gold_pair.sent2)
        {
            return Err(EvalError::TokenizationMismatch(id.to_string()));
        }

        let sys_map = expand_token_pairs(sys_pair)?;
        let gold_map = expand_token_pairs(gold_pair)?;
        for (key, s) in &sys_map {
            let Some(g) = gold_map.get(key) else { continue };
            let weights = [s.weight, g.weight];
            for side in 0..2 {
                ali[side] += weights[side];
            }
            let labels_equal = s.label == g.label;
            if labels_equal {
                for side in 0..2 {
                    typ[side] += weights[side];
                }
            }
            if let Some(f) = score_factor(s.score, g.score) {
                for side in 0..2 {
                    sco[side] += weights[side] * f;
                }
                if labels_equal {
                    for side in 0..2 {
                        ts[side] += weights[side] * f;
                    }
                }
            }
        }
    }

    let n_sys = count_aligned(sys);
    let n_gold = count_aligned(gold);
    Ok(EvalReport {
        ali: EvalScores::from_parts(ali[0], ali[1], n_sys, n_gold),
        typ: EvalScores::from_parts(typ[0], typ[1], n_sys, n_gold),
        score: EvalScores::from_parts(sco[0], sco[1], n_sys, n_gold),
        ts: EvalScores::from_parts(ts[0], ts[1], n_sys, n_gold),
        sys_alignments: n_sys,
        gold_alignments: n_gold,
    })
}

impl EvalReport {
    /// Plain-text table followed by machine-readable key-value lines.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "{:<8}{:>11}{:>11}{:>11}", "level", "precision", "recall", "F1");
        for (name, s) in self.rows() {
            let _ = writeln!(
                out,
                "{:<8}{:>11.4}{:>11.4}{:>11.4}",
                name, s.precision, s.recall, s.f1
            );
        }
        let _ = writeln!(out, "sys_alignments={}", self.sys_alignments);
        let _ = writeln!(out, "gold_alignments={}", self.gold_alignments);
        for (name, s) in self.rows() {
            let key = if name == "T+S" { "TS".to_string() } else { name.to_string() };
            let _ = writeln!(out, "{key}_P={:.4}", s.precision);
            let _ = writeln!(out, "{key}_R={:.4}", s.recall);
            let _ = writeln!(out, "{key}_F1={:.4}", s.f1);
        }
        out
    }

    pub fn rows(&self) -> [(&'static str, EvalScores); 4] {
        [
            ("ALI", self.ali),
            ("TYPE", self.typ),
            ("SCORE", self.score),
            ("T+S", self.ts),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfusionAxis {
    Label,
    Score,
}

/// Counts over record pairs whose token sets agree exactly on both sides;
/// rows are gold values, columns system values.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    pub axis: ConfusionAxis,
    pub names: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

pub fn confusion_matrix(
    sys: &[InterpretablePair],
    gold: &[InterpretablePair],
    axis: ConfusionAxis,
) -> Result<ConfusionMatrix, EvalError> {
    let names: Vec<String> = match axis {
        ConfusionAxis::Label => RELATION_LABELS.iter().map(|l| l.to_string()).collect(),
        ConfusionAxis::Score => (0..=5).map(|s| s.to_string()).collect(),
    };
    let n = names.len();
    let mut counts = vec![vec![0usize; n]; n];

    let sys_by_id: BTreeMap<&str, &InterpretablePair> =
        sys.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    for gold_pair in gold {
        let Some(sys_pair) = sys_by_id.get(gold_pair.pair_id.as_str()) else {
            return Err(EvalError::MissingPair(gold_pair.pair_id.clone(), "system"));
        };
        for g in &gold_pair.alignments {
            if !g.is_aligned() {
                continue;
            }
            let matched = sys_pair
                .alignments
                .iter()
                .find(|s| s.is_aligned() && s.left == g.left && s.right == g.right);
            let Some(s) = matched else { continue };
            let (Some(row), Some(col)) = (axis_value(g, axis), axis_value(s, axis)) else {
                continue;
            };
            counts[row][col] += 1;
        }
    }
    Ok(ConfusionMatrix { axis, names, counts })
}

fn axis_value(a: &crate::model::ChunkAlignment, axis: ConfusionAxis) -> Option<usize> {
    match axis {
        ConfusionAxis::Label => RELATION_LABELS.iter().position(|&l| l == a.label.core),
        ConfusionAxis::Score => match a.score {
            AlignmentScore::Value(v) => Some((v.round() as usize).min(5)),
            AlignmentScore::Nil => None,
        },
    }
}

impl ConfusionMatrix {
    /// Table with gold values as rows and system values as columns.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = write!(out, "{:<12}", "gold\\sys");
        for name in &self.names {
            let _ = write!(out, "{name:>7}");
        }
        out.push('\n');
        for (name, row) in self.names.iter().zip(&self.counts) {
            let _ = write!(out, "{name:<12}");
            for v in row {
                let _ = write!(out, "{v:>7}");
            }
            out.push('\n');
        }
        out
    }
}
