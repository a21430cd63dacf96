//! English explanations of annotated pairs.
//!
//! Each aligned record is rendered through a per-label template; the score
//! picks a qualifier ("a bit more", "very", …) from a band table. A
//! paragraph opens with a sentence chosen from the overall score — the
//! token-count-weighted mean of all record scores, unaligned chunks counting
//! as zero — followed by one "Note that …" sentence per record.
//!
//! Templates, bands, the label order and the openers can be overridden from
//! a `KEY=value` text file; `{X}`, `{Y}` and `{QUAL}` are the placeholders.

use std::collections::HashMap;
use std::path::Path;

use crate::model::{AlignmentScore, ChunkAlignment, CoreLabel, InterpretablePair};

#[derive(Debug, Clone)]
pub struct VerbalizationConfig {
    /// Whether equivalent pairs get their own sentence (they are usually
    /// the unremarkable majority).
    pub include_equi: bool,
    /// Priority order of labels in the paragraph; position ties are broken
    /// by sentence-1 chunk position.
    pub label_order: Vec<CoreLabel>,
    pub templates: HashMap<CoreLabel, String>,
    /// Qualifier bands per family: (threshold, qualifier) rows, descending;
    /// the first row whose threshold the score reaches wins.
    pub spe_bands: Vec<(f64, String)>,
    pub simi_bands: Vec<(f64, String)>,
    pub rel_bands: Vec<(f64, String)>,
    /// Same shape, over the overall score, yielding the opening sentence.
    pub opener_bands: Vec<(f64, String)>,
}

fn bands(rows: &[(f64, &str)]) -> Vec<(f64, String)> {
    rows.iter().map(|&(t, q)| (t, q.to_string())).collect()
}

impl Default for VerbalizationConfig {
    fn default() -> Self {
        let templates = HashMap::from([
            (CoreLabel::Equi, "{X} and {Y} mean the same".to_string()),
            (CoreLabel::Spe1, "{X} is {QUAL} specific than {Y}".to_string()),
            (CoreLabel::Spe2, "{X} is {QUAL} general than {Y}".to_string()),
            (CoreLabel::Simi, "{X} and {Y} are {QUAL} similar".to_string()),
            (
                CoreLabel::Rel,
                "{X} and {Y} don't mean the same but are {QUAL} related".to_string(),
            ),
            (CoreLabel::Oppo, "{X} and {Y} mean the opposite".to_string()),
        ]);
        VerbalizationConfig {
            include_equi: false,
            label_order: vec![
                CoreLabel::Oppo,
                CoreLabel::Spe1,
                CoreLabel::Simi,
                CoreLabel::Spe2,
                CoreLabel::Rel,
                CoreLabel::Equi,
            ],
            templates,
            spe_bands: bands(&[(4.0, "a bit more"), (3.0, "more"), (0.0, "much more")]),
            simi_bands: bands(&[(4.0, "very"), (3.0, ""), (2.0, "slightly"), (0.0, "scarcely")]),
            rel_bands: bands(&[(4.0, "closely"), (3.0, ""), (2.0, "somehow"), (0.0, "distantly")]),
            opener_bands: bands(&[
                (4.5, "The two sentences mean the same."),
                (3.5, "The two sentences are very similar."),
                (2.5, "The two sentences are somewhat similar."),
                (1.5, "The two sentences share some details."),
                (0.0, "The two sentences are quite different."),
            ]),
        }
    }
}

fn pick(bands: &[(f64, String)], score: f64) -> &str {
    bands
        .iter()
        .find(|(t, _)| score >= *t)
        .or_else(|| bands.last())
        .map(|(_, q)| q.as_str())
        .unwrap_or("")
}

impl VerbalizationConfig {
    /// Default configuration with overrides applied from a `KEY=value` file.
    /// Recognized keys: the six labels (template text), `SPE_BANDS`,
    /// `SIMI_BANDS`, `REL_BANDS`, `OPENER_BANDS` (rows
    /// `threshold:text` joined by `;`), and `LABEL_ORDER` (comma-separated).
    pub fn load_overrides(path: impl AsRef<Path>) -> Result<Self, String> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("reading templates: {e}"))?;
        let mut config = VerbalizationConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("templates line {}: expected KEY=value", n + 1))?;
            config.apply(key.trim(), value)
                .map_err(|e| format!("templates line {}: {e}", n + 1))?;
        }
        Ok(config)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "EQUI" | "SPE1" | "SPE2" | "SIMI" | "REL" | "OPPO" => {
                let label: CoreLabel = key.parse().unwrap();
                self.templates.insert(label, value.to_string());
            }
            "SPE_BANDS" => self.spe_bands = parse_bands(value)?,
            "SIMI_BANDS" => self.simi_bands = parse_bands(value)?,
            "REL_BANDS" => self.rel_bands = parse_bands(value)?,
            "OPENER_BANDS" => self.opener_bands = parse_bands(value)?,
            "LABEL_ORDER" => {
                let order: Result<Vec<CoreLabel>, _> =
                    value.split(',').map(|l| l.trim().parse()).collect();
                let order = order.map_err(|e| format!("bad label order: {e}"))?;
                if order.is_empty() {
                    return Err("label order cannot be empty".to_string());
                }
                self.label_order = order;
            }
            other => return Err(format!("unknown template key `{other}`")),
        }
        Ok(())
    }
}

fn parse_bands(value: &str) -> Result<Vec<(f64, String)>, String> {
    let mut rows = Vec::new();
    for part in value.split(';') {
        let (threshold, text) = part
            .split_once(':')
            .ok_or_else(|| format!("band `{part}` is not threshold:text"))?;
        let threshold: f64 = threshold
            .trim()
            .parse()
            .map_err(|_| format!("bad band threshold `{threshold}`"))?;
        rows.push((threshold, text.to_string()));
    }
    if rows.is_empty() {
        return Err("empty band list".to_string());
    }
    Ok(rows)
}

fn chunk_text(pair: &InterpretablePair, indices: &[usize], first_side: bool) -> String {
    let sent = if first_side { &pair.sent1 } else { &pair.sent2 };
    indices
        .iter()
        .map(|&i| sent.tokens[i - 1].surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn collapse_spaces(mut s: String) -> String {
    while s.contains("  ") {
        s = s.replace("  ", " ");
    }
    s
}

/// One explanation clause for an aligned record, without capitalized prefix
/// or final period — [`verbalize_pair`] adds those.
pub fn verbalize_alignment(
    pair: &InterpretablePair,
    record: &ChunkAlignment,
    config: &VerbalizationConfig,
) -> Result<String, String> {
    let (Some(left), Some(right)) = (&record.left, &record.right) else {
        return Err(format!(
            "cannot verbalize an unaligned ({}) record",
            record.label.core
        ));
    };
    let score = match record.score {
        AlignmentScore::Value(v) => v,
        AlignmentScore::Nil => 0.0,
    };
    let qualifier = match record.label.core {
        CoreLabel::Spe1 | CoreLabel::Spe2 => pick(&config.spe_bands, score),
        CoreLabel::Simi => pick(&config.simi_bands, score),
        CoreLabel::Rel => pick(&config.rel_bands, score),
        CoreLabel::Equi | CoreLabel::Oppo => "",
        CoreLabel::Alic | CoreLabel::Noali => {
            return Err(format!(
                "cannot verbalize an unaligned ({}) record",
                record.label.core
            ));
        }
    };
    let template = config
        .templates
        .get(&record.label.core)
        .ok_or_else(|| format!("no template for label {}", record.label.core))?;
    let mut text = template
        .replace("{X}", &format!("'{}'", chunk_text(pair, left, true)))
        .replace("{Y}", &format!("'{}'", chunk_text(pair, right, false)))
        .replace("{QUAL}", qualifier);
    text.push_str(" in this context");
    text = collapse_spaces(text);
    if record.label.fact {
        text.push_str("; note a difference in factuality");
    }
    if record.label.pol {
        text.push_str("; note a difference in polarity");
    }
    Ok(text)
}

/// Token-count-weighted mean of all record scores; a record covering tokens
/// on both sides weighs the sum of both chunk lengths, and unaligned chunks
/// drag the mean towards zero with their own token count.
pub fn overall_score(pair: &InterpretablePair) -> f64 {
    let mut weighted = 0.0;
    let mut mass = 0.0;
    for a in &pair.alignments {
        let tokens =
            a.left.as_ref().map_or(0, Vec::len) + a.right.as_ref().map_or(0, Vec::len);
        let score = match a.score {
            AlignmentScore::Value(v) => v,
            AlignmentScore::Nil => 0.0,
        };
        weighted += tokens as f64 * score;
        mass += tokens as f64;
    }
    if mass == 0.0 {
        0.0
    } else {
        weighted / mass
    }
}

/// Full explanation paragraph: opener plus one "Note that …" sentence per
/// aligned record, ordered by the configured label priority.
pub fn verbalize_pair(pair: &InterpretablePair, config: &VerbalizationConfig) -> String {
    let mut out = pick(&config.opener_bands, overall_score(pair)).to_string();

    let mut records: Vec<&ChunkAlignment> = pair
        .alignments
        .iter()
        .filter(|a| a.is_aligned())
        .filter(|a| config.include_equi || a.label.core != CoreLabel::Equi)
        .collect();
    let order_of = |label: CoreLabel| -> usize {
        config
            .label_order
            .iter()
            .position(|&l| l == label)
            .unwrap_or(config.label_order.len())
    };
    records.sort_by_key(|a| {
        let position = a.left.as_ref().and_then(|l| l.first().copied()).unwrap_or(0);
        (order_of(a.label.core), position)
    });

    for (k, record) in records.iter().enumerate() {
        let Ok(body) = verbalize_alignment(pair, record, config) else {
            continue;
        };
        let prefix = if k == 0 { "Note that" } else { "Note also that" };
        out.push('\n');
        out.push_str(prefix);
        out.push(' ');
        out.push_str(&body);
        out.push('.');
    }
    out
}
