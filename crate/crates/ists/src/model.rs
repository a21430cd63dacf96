//! Core data model: tokens, chunks, labeled and scored chunk alignments, and
//! the validity rules that tie them together.
//!
//! The conventions baked into these types:
//!
//! * token indices are 1-based, as in the `.wa` alignment format; the index 0
//!   is reserved for the "not aligned" side of a record and never appears in
//!   a [`Chunk`];
//! * every chunk of both sentences takes part in exactly one alignment
//!   record — unaligned chunks appear as `ALIC`/`NOALI` records with a null
//!   opposite side;
//! * scores live in `[0, 5]`: `EQUI` is always 5, `ALIC`/`NOALI` carry no
//!   score (`NIL`), and every other relation label scores strictly between
//!   0 and 5.

use std::fmt;
use std::str::FromStr;

/// The eight labels an alignment record may carry. The first six express a
/// relation between two aligned chunks; `Alic` marks a chunk left unaligned
/// because its counterpart was consumed by a different record, and `Noali`
/// marks a chunk with no counterpart at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreLabel {
    Equi,
    Oppo,
    Spe1,
    Spe2,
    Simi,
    Rel,
    Alic,
    Noali,
}

/// The six labels that relate two actually aligned chunks, in the order used
/// for deterministic tie-breaking by the classifier.
pub const RELATION_LABELS: [CoreLabel; 6] = [
    CoreLabel::Equi,
    CoreLabel::Spe1,
    CoreLabel::Spe2,
    CoreLabel::Simi,
    CoreLabel::Rel,
    CoreLabel::Oppo,
];

impl CoreLabel {
    /// True for the six labels that join two real chunks (everything except
    /// `ALIC` and `NOALI`).
    pub fn is_relation(self) -> bool {
        !matches!(self, CoreLabel::Alic | CoreLabel::Noali)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CoreLabel::Equi => "EQUI",
            CoreLabel::Oppo => "OPPO",
            CoreLabel::Spe1 => "SPE1",
            CoreLabel::Spe2 => "SPE2",
            CoreLabel::Simi => "SIMI",
            CoreLabel::Rel => "REL",
            CoreLabel::Alic => "ALIC",
            CoreLabel::Noali => "NOALI",
        }
    }
}

impl fmt::Display for CoreLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoreLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "EQUI" => Ok(CoreLabel::Equi),
            "OPPO" => Ok(CoreLabel::Oppo),
            "SPE1" => Ok(CoreLabel::Spe1),
            "SPE2" => Ok(CoreLabel::Spe2),
            "SIMI" => Ok(CoreLabel::Simi),
            "REL" => Ok(CoreLabel::Rel),
            "ALIC" => Ok(CoreLabel::Alic),
            "NOALI" => Ok(CoreLabel::Noali),
            other => Err(format!("unknown alignment label `{other}`")),
        }
    }
}

/// A core label plus the optional factuality / polarity flags, e.g.
/// `EQUI_FACT` in file form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlignmentLabel {
    pub core: CoreLabel,
    pub fact: bool,
    pub pol: bool,
}

impl AlignmentLabel {
    pub fn new(core: CoreLabel) -> Self {
        AlignmentLabel { core, fact: false, pol: false }
    }

    pub fn with_fact(mut self) -> Self {
        self.fact = true;
        self
    }

    pub fn with_pol(mut self) -> Self {
        self.pol = true;
        self
    }
}

impl fmt::Display for AlignmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.core.as_str())?;
        if self.fact {
            f.write_str("_FACT")?;
        }
        if self.pol {
            f.write_str("_POL")?;
        }
        Ok(())
    }
}

impl FromStr for AlignmentLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rest = s;
        let mut fact = false;
        let mut pol = false;
        // Flags may appear in either order; strip them off the tail.
        loop {
            if let Some(head) = rest.strip_suffix("_FACT") {
                if fact {
                    return Err(format!("repeated FACT flag in `{s}`"));
                }
                fact = true;
                rest = head;
            } else if let Some(head) = rest.strip_suffix("_POL") {
                if pol {
                    return Err(format!("repeated POL flag in `{s}`"));
                }
                pol = true;
                rest = head;
            } else {
                break;
            }
        }
        let core = rest.parse::<CoreLabel>()?;
        Ok(AlignmentLabel { core, fact, pol })
    }
}

/// Score of an alignment record: a real number in `[0, 5]`, or `NIL` for the
/// records that must not carry a score (`ALIC`, `NOALI`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlignmentScore {
    Nil,
    Value(f64),
}

impl AlignmentScore {
    pub fn value(self) -> Option<f64> {
        match self {
            AlignmentScore::Nil => None,
            AlignmentScore::Value(v) => Some(v),
        }
    }

    pub fn is_nil(self) -> bool {
        matches!(self, AlignmentScore::Nil)
    }
}

impl fmt::Display for AlignmentScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlignmentScore::Nil => f.write_str("NIL"),
            // Integral scores print without a decimal point, matching the
            // gold files; everything else uses the shortest round-trip form.
            AlignmentScore::Value(v) => {
                if v.fract() == 0.0 && v.abs() < 1e15 {
                    write!(f, "{}", *v as i64)
                } else {
                    write!(f, "{v}")
                }
            }
        }
    }
}

impl FromStr for AlignmentScore {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "NIL" {
            return Ok(AlignmentScore::Nil);
        }
        s.parse::<f64>()
            .map(AlignmentScore::Value)
            .map_err(|_| format!("bad alignment score `{s}`"))
    }
}

/// A single token of a sentence. `index` is 1-based; lemma and part-of-speech
/// are optional because the alignment file format does not carry them (they
/// come from chunked CONLL input when available).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub surface: String,
    pub lemma: Option<String>,
    pub pos: Option<String>,
}

impl Token {
    pub fn new(index: usize, surface: impl Into<String>) -> Self {
        Token { index, surface: surface.into(), lemma: None, pos: None }
    }

    /// Lemma if present, else the lowercased surface form.
    pub fn lemma_or_surface(&self) -> String {
        match &self.lemma {
            Some(l) => l.to_lowercase(),
            None => self.surface.to_lowercase(),
        }
    }
}

/// A contiguous run of tokens treated as one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    /// 1-based token indices, contiguous and strictly increasing.
    pub token_indices: Vec<usize>,
    /// Surface text of the chunk (tokens joined by single spaces).
    pub text: String,
}

impl Chunk {
    pub fn len(&self) -> usize {
        self.token_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.token_indices.is_empty()
    }

    pub fn first_index(&self) -> usize {
        self.token_indices.first().copied().unwrap_or(0)
    }
}

/// A sentence along with its segmentation into chunks. Chunks need not cover
/// every token (punctuation may stay outside), must not overlap, and are
/// ordered by their first token index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkedSentence {
    pub tokens: Vec<Token>,
    pub chunks: Vec<Chunk>,
}

impl ChunkedSentence {
    /// Builds a sentence from surfaces and chunk spans given as inclusive
    /// 1-based index ranges. Convenience for tests and generators.
    pub fn from_spans(surfaces: &[&str], spans: &[(usize, usize)]) -> Self {
        let tokens: Vec<Token> = surfaces
            .iter()
            .enumerate()
            .map(|(i, s)| Token::new(i + 1, *s))
            .collect();
        let chunks = spans
            .iter()
            .map(|&(a, b)| {
                let token_indices: Vec<usize> = (a..=b).collect();
                let text = token_indices
                    .iter()
                    .map(|&i| tokens[i - 1].surface.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                Chunk { token_indices, text }
            })
            .collect();
        ChunkedSentence { tokens, chunks }
    }

    pub fn raw_text(&self) -> String {
        self.tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The chunk whose token set contains `index`, if any.
    pub fn chunk_containing(&self, index: usize) -> Option<&Chunk> {
        self.chunks.iter().find(|c| c.token_indices.contains(&index))
    }

    /// Text of the chunk with exactly this token set, if any.
    pub fn chunk_with_indices(&self, indices: &[usize]) -> Option<&Chunk> {
        self.chunks.iter().find(|c| c.token_indices == indices)
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }
}

/// One alignment record. A side is `None` when the record covers an unaligned
/// chunk (`ALIC`/`NOALI`); in file form that side is written as token index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkAlignment {
    pub left: Option<Vec<usize>>,
    pub right: Option<Vec<usize>>,
    pub label: AlignmentLabel,
    pub score: AlignmentScore,
}

impl ChunkAlignment {
    pub fn aligned(
        left: Vec<usize>,
        right: Vec<usize>,
        label: AlignmentLabel,
        score: AlignmentScore,
    ) -> Self {
        ChunkAlignment { left: Some(left), right: Some(right), label, score }
    }

    /// An `ALIC`/`NOALI` record for a chunk of sentence 1 (`first_side`) or
    /// sentence 2.
    pub fn unaligned(side: Vec<usize>, first_side: bool, core: CoreLabel) -> Self {
        let (left, right) = if first_side { (Some(side), None) } else { (None, Some(side)) };
        ChunkAlignment { left, right, label: AlignmentLabel::new(core), score: AlignmentScore::Nil }
    }

    /// True when both sides reference real chunks.
    pub fn is_aligned(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }
}

/// A fully annotated sentence pair: both chunked sentences plus the alignment
/// records connecting them.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpretablePair {
    pub pair_id: String,
    /// Free-form status attribute carried through from the file format.
    pub status: String,
    pub sent1: ChunkedSentence,
    pub sent2: ChunkedSentence,
    pub alignments: Vec<ChunkAlignment>,
}

/// How serious a reported validity problem is. `Info` items point at odd but
/// accepted annotations (an unaligned chunk carrying a factuality or polarity
/// flag); a pair counts as valid when it has no `Error` items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Info,
}

/// One problem found by [`validate_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub severity: Severity,
    pub message: String,
}

impl Violation {
    fn error(message: String) -> Self {
        Violation { severity: Severity::Error, message }
    }

    fn info(message: String) -> Self {
        Violation { severity: Severity::Info, message }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Error => write!(f, "error: {}", self.message),
            Severity::Info => write!(f, "info: {}", self.message),
        }
    }
}

fn indices_desc(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Checks every structural and score/label constraint of an annotated pair
/// and reports all problems found. An empty result (no `Error` items at all)
/// means the pair is valid.
///
/// The rules, record by record:
/// * a record may have at most one null side, and only under `ALIC`/`NOALI`;
/// * `ALIC`/`NOALI` records must have a null side and a `NIL` score (a
///   literal 0 is accepted as the numeric spelling of "no score");
/// * `EQUI` records score exactly 5, every other relation label scores
///   strictly between 0 and 5;
/// * each side of a record must reference a whole chunk of its sentence, and
///   every chunk of both sentences must be referenced by exactly one record.
pub fn validate_pair(pair: &InterpretablePair) -> Vec<Violation> {
    let mut out = Vec::new();
    let id = &pair.pair_id;

    for (n, a) in pair.alignments.iter().enumerate() {
        let rec = n + 1;
        let core = a.label.core;
        match (&a.left, &a.right) {
            (None, None) => {
                out.push(Violation::error(format!(
                    "pair {id} record {rec}: both sides null"
                )));
                continue;
            }
            (Some(_), Some(_)) if !core.is_relation() => {
                out.push(Violation::error(format!(
                    "pair {id} record {rec}: {core} must have a null side"
                )));
            }
            (Some(_), Some(_)) => {}
            _ if core.is_relation() => {
                out.push(Violation::error(format!(
                    "pair {id} record {rec}: null side not allowed for {core}"
                )));
            }
            _ => {}
        }

        match core {
            CoreLabel::Alic | CoreLabel::Noali => {
                // "No score" is written NIL; a numeric 0 means the same thing.
                let ok = match a.score {
                    AlignmentScore::Nil => true,
                    AlignmentScore::Value(v) => v == 0.0,
                };
                if !ok {
                    out.push(Violation::error(format!(
                        "pair {id} record {rec}: {core} must have NIL score"
                    )));
                }
                if a.label.fact || a.label.pol {
                    if core == CoreLabel::Alic {
                        out.push(Violation::info(format!(
                            "pair {id} record {rec}: ALIC carrying a FACT/POL flag"
                        )));
                    }
                }
            }
            CoreLabel::Equi => match a.score {
                AlignmentScore::Value(v) if v == 5.0 => {}
                _ => out.push(Violation::error(format!(
                    "pair {id} record {rec}: EQUI must have score 5"
                ))),
            },
            _ => match a.score {
                AlignmentScore::Nil => out.push(Violation::error(format!(
                    "pair {id} record {rec}: {core} requires a numeric score"
                ))),
                AlignmentScore::Value(v) if v >= 5.0 => out.push(Violation::error(format!(
                    "pair {id} record {rec}: non-EQUI score must be < 5"
                ))),
                AlignmentScore::Value(v) if v <= 0.0 => out.push(Violation::error(format!(
                    "pair {id} record {rec}: non-EQUI score must be > 0"
                ))),
                AlignmentScore::Value(_) => {}
            },
        }
    }

    // One-to-one chunk participation, per side.
    for side_no in [1usize, 2] {
        let sent = if side_no == 1 { &pair.sent1 } else { &pair.sent2 };
        let mut seen: Vec<usize> = vec![0; sent.chunks.len()];
        for (n, a) in pair.alignments.iter().enumerate() {
            let rec = n + 1;
            let indices = if side_no == 1 { a.left.as_ref() } else { a.right.as_ref() };
            let Some(indices) = indices else { continue };
            match sent.chunks.iter().position(|c| &c.token_indices == indices) {
                Some(k) => seen[k] += 1,
                None => out.push(Violation::error(format!(
                    "pair {id} record {rec}: tokens [{}] are not a chunk of sentence {side_no}",
                    indices_desc(indices)
                ))),
            }
        }
        for (k, &count) in seen.iter().enumerate() {
            let chunk = &sent.chunks[k];
            if count == 0 {
                out.push(Violation::error(format!(
                    "pair {id}: chunk `{}` of sentence {side_no} is in no alignment record",
                    chunk.text
                )));
            } else if count > 1 {
                out.push(Violation::error(format!(
                    "pair {id}: chunk `{}` of sentence {side_no} is in {count} alignment records",
                    chunk.text
                )));
            }
        }
    }

    out
}

/// True when [`validate_pair`] reports no `Error` items.
pub fn is_valid_pair(pair: &InterpretablePair) -> bool {
    validate_pair(pair)
        .iter()
        .all(|v| v.severity != Severity::Error)
}

/// The natural-logic reading of a relation label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntailmentRelation {
    /// ≡ — the chunks entail each other.
    Equivalence,
    /// ¬ — the chunks negate each other.
    Negation,
    /// ⊏ — the left chunk entails (is more specific than) the right.
    ForwardEntailment,
    /// ⊐ — the right chunk entails the left.
    BackwardEntailment,
    /// ~ — related without entailment in either direction.
    Relatedness,
    /// # — no relation. Part of the closed symbol set, but never produced by
    /// [`label_to_entailment`]: unaligned chunks have no relation to map.
    Independence,
}

impl EntailmentRelation {
    pub fn symbol(self) -> &'static str {
        match self {
            EntailmentRelation::Equivalence => "≡",
            EntailmentRelation::Negation => "¬",
            EntailmentRelation::ForwardEntailment => "⊏",
            EntailmentRelation::BackwardEntailment => "⊐",
            EntailmentRelation::Relatedness => "~",
            EntailmentRelation::Independence => "#",
        }
    }
}

impl fmt::Display for EntailmentRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Maps the six relation labels onto natural-logic operators. `ALIC` and
/// `NOALI` have no reading and are rejected.
pub fn label_to_entailment(label: CoreLabel) -> Result<EntailmentRelation, String> {
    match label {
        CoreLabel::Equi => Ok(EntailmentRelation::Equivalence),
        CoreLabel::Oppo => Ok(EntailmentRelation::Negation),
        CoreLabel::Spe1 => Ok(EntailmentRelation::ForwardEntailment),
        CoreLabel::Spe2 => Ok(EntailmentRelation::BackwardEntailment),
        CoreLabel::Simi | CoreLabel::Rel => Ok(EntailmentRelation::Relatedness),
        CoreLabel::Alic | CoreLabel::Noali => {
            Err(format!("{label} does not map to an entailment relation"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chunk_pair(label: CoreLabel, score: AlignmentScore) -> InterpretablePair {
        let sent1 = ChunkedSentence::from_spans(&["the", "bus"], &[(1, 2)]);
        let sent2 = ChunkedSentence::from_spans(&["a", "coach"], &[(1, 2)]);
        InterpretablePair {
            pair_id: "1".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![ChunkAlignment::aligned(
                vec![1, 2],
                vec![1, 2],
                AlignmentLabel::new(label),
                score,
            )],
        }
    }

    #[test]
    fn equi_with_score_five_is_valid() {
        let pair = two_chunk_pair(CoreLabel::Equi, AlignmentScore::Value(5.0));
        assert!(validate_pair(&pair).is_empty());
    }

    #[test]
    fn equi_with_lower_score_is_rejected() {
        let pair = two_chunk_pair(CoreLabel::Equi, AlignmentScore::Value(4.0));
        let violations = validate_pair(&pair);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].message.contains("EQUI must have score 5"));
    }

    #[test]
    fn simi_with_score_five_is_rejected() {
        let pair = two_chunk_pair(CoreLabel::Simi, AlignmentScore::Value(5.0));
        let violations = validate_pair(&pair);
        assert!(violations
            .iter()
            .any(|v| v.message.contains("non-EQUI score must be < 5")));
    }

    #[test]
    fn noali_with_numeric_score_is_rejected() {
        let sent1 = ChunkedSentence::from_spans(&["today"], &[(1, 1)]);
        let sent2 = ChunkedSentence::from_spans(&["now"], &[(1, 1)]);
        let pair = InterpretablePair {
            pair_id: "7".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![
                ChunkAlignment {
                    left: Some(vec![1]),
                    right: None,
                    label: AlignmentLabel::new(CoreLabel::Noali),
                    score: AlignmentScore::Value(3.0),
                },
                ChunkAlignment::unaligned(vec![1], false, CoreLabel::Noali),
            ],
        };
        let violations = validate_pair(&pair);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].message.contains("NOALI must have NIL score"));
    }

    #[test]
    fn noali_with_zero_score_is_accepted() {
        let sent1 = ChunkedSentence::from_spans(&["today"], &[(1, 1)]);
        let sent2 = ChunkedSentence::from_spans(&["now"], &[(1, 1)]);
        let pair = InterpretablePair {
            pair_id: "8".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![
                ChunkAlignment {
                    left: Some(vec![1]),
                    right: None,
                    label: AlignmentLabel::new(CoreLabel::Noali),
                    score: AlignmentScore::Value(0.0),
                },
                ChunkAlignment::unaligned(vec![1], false, CoreLabel::Noali),
            ],
        };
        assert!(validate_pair(&pair).is_empty());
    }

    #[test]
    fn null_side_requires_alic_or_noali() {
        let sent1 = ChunkedSentence::from_spans(&["gone"], &[(1, 1)]);
        let sent2 = ChunkedSentence::from_spans(&["left"], &[(1, 1)]);
        let pair = InterpretablePair {
            pair_id: "9".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![
                ChunkAlignment {
                    left: Some(vec![1]),
                    right: None,
                    label: AlignmentLabel::new(CoreLabel::Simi),
                    score: AlignmentScore::Value(3.0),
                },
                ChunkAlignment::unaligned(vec![1], false, CoreLabel::Noali),
            ],
        };
        let violations = validate_pair(&pair);
        assert!(violations
            .iter()
            .any(|v| v.message.contains("null side not allowed for SIMI")));
    }

    #[test]
    fn chunk_in_two_records_is_rejected() {
        let sent1 = ChunkedSentence::from_spans(&["rain"], &[(1, 1)]);
        let sent2 = ChunkedSentence::from_spans(&["rain", "again"], &[(1, 1), (2, 2)]);
        let pair = InterpretablePair {
            pair_id: "4".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![
                ChunkAlignment::aligned(
                    vec![1],
                    vec![1],
                    AlignmentLabel::new(CoreLabel::Equi),
                    AlignmentScore::Value(5.0),
                ),
                ChunkAlignment {
                    left: Some(vec![1]),
                    right: None,
                    label: AlignmentLabel::new(CoreLabel::Alic),
                    score: AlignmentScore::Nil,
                },
                ChunkAlignment::unaligned(vec![2], false, CoreLabel::Noali),
            ],
        };
        let violations = validate_pair(&pair);
        assert!(violations
            .iter()
            .any(|v| v.message.contains("is in 2 alignment records")));
    }

    #[test]
    fn uncovered_chunk_is_rejected() {
        let sent1 = ChunkedSentence::from_spans(&["rain", "today"], &[(1, 1), (2, 2)]);
        let sent2 = ChunkedSentence::from_spans(&["rain"], &[(1, 1)]);
        let pair = InterpretablePair {
            pair_id: "5".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![ChunkAlignment::aligned(
                vec![1],
                vec![1],
                AlignmentLabel::new(CoreLabel::Equi),
                AlignmentScore::Value(5.0),
            )],
        };
        let violations = validate_pair(&pair);
        assert!(violations
            .iter()
            .any(|v| v.message.contains("chunk `today` of sentence 1 is in no alignment record")));
    }

    #[test]
    fn alic_with_fact_is_informational_only() {
        let sent1 = ChunkedSentence::from_spans(&["reportedly"], &[(1, 1)]);
        let sent2 = ChunkedSentence::from_spans(&["said"], &[(1, 1)]);
        let pair = InterpretablePair {
            pair_id: "6".into(),
            status: String::new(),
            sent1,
            sent2,
            alignments: vec![
                ChunkAlignment {
                    left: Some(vec![1]),
                    right: None,
                    label: AlignmentLabel::new(CoreLabel::Alic).with_fact(),
                    score: AlignmentScore::Nil,
                },
                ChunkAlignment::unaligned(vec![1], false, CoreLabel::Noali),
            ],
        };
        let violations = validate_pair(&pair);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].severity, Severity::Info);
        assert!(is_valid_pair(&pair));
    }

    #[test]
    fn entailment_mapping() {
        assert_eq!(
            label_to_entailment(CoreLabel::Equi).unwrap(),
            EntailmentRelation::Equivalence
        );
        assert_eq!(
            label_to_entailment(CoreLabel::Oppo).unwrap(),
            EntailmentRelation::Negation
        );
        assert_eq!(
            label_to_entailment(CoreLabel::Spe1).unwrap(),
            EntailmentRelation::ForwardEntailment
        );
        assert_eq!(
            label_to_entailment(CoreLabel::Spe2).unwrap(),
            EntailmentRelation::BackwardEntailment
        );
        assert_eq!(
            label_to_entailment(CoreLabel::Simi).unwrap(),
            EntailmentRelation::Relatedness
        );
        assert_eq!(
            label_to_entailment(CoreLabel::Rel).unwrap(),
            EntailmentRelation::Relatedness
        );
        assert!(label_to_entailment(CoreLabel::Alic).is_err());
        assert!(label_to_entailment(CoreLabel::Noali).is_err());
    }

    #[test]
    fn entailment_mapping_covers_five_operators() {
        use std::collections::HashSet;
        let produced: HashSet<_> = RELATION_LABELS
            .iter()
            .map(|&l| label_to_entailment(l).unwrap())
            .collect();
        let expected: HashSet<_> = [
            EntailmentRelation::Equivalence,
            EntailmentRelation::Negation,
            EntailmentRelation::ForwardEntailment,
            EntailmentRelation::BackwardEntailment,
            EntailmentRelation::Relatedness,
        ]
        .into_iter()
        .collect();
        assert_eq!(produced, expected);
    }

    #[test]
    fn label_round_trip() {
        for s in ["EQUI", "SPE1_FACT", "NOALI", "SIMI_POL", "REL_FACT_POL"] {
            let label: AlignmentLabel = s.parse().unwrap();
            assert_eq!(label.to_string(), s);
        }
        assert!("EQUIV".parse::<AlignmentLabel>().is_err());
    }

    #[test]
    fn score_formatting() {
        assert_eq!(AlignmentScore::Value(5.0).to_string(), "5");
        assert_eq!(AlignmentScore::Value(4.3).to_string(), "4.3");
        assert_eq!(AlignmentScore::Nil.to_string(), "NIL");
        assert_eq!("4".parse::<AlignmentScore>().unwrap(), AlignmentScore::Value(4.0));
        assert_eq!("NIL".parse::<AlignmentScore>().unwrap(), AlignmentScore::Nil);
        assert!("five".parse::<AlignmentScore>().is_err());
    }
}
