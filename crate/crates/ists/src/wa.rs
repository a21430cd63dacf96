//! Reading and writing the `.wa` alignment file format.
//!
//! A file is a concatenation of sentence blocks:
//!
//! ```text
//! <sentence id="22" status="">
//! // 12 killed in bus accident in Pakistan
//! // 10 killed in road accident in NW Pakistan
//! <source>
//! 1 12 :
//! 2 killed :
//! ...
//! </source>
//! <translation>
//! ...
//! </translation>
//! <alignment>
//! 3 4 5 <==> 3 4 5 // SPE1 // 4 // in bus accident <==> in road accident
//! 0 <==> 7 // NOALI // NIL // -not aligned- <==> today
//! ...
//! </alignment>
//! </sentence>
//! ```
//!
//! `<source>` lists the tokens of sentence 1, `<translation>` those of
//! sentence 2, one `INDEX SURFACE : ` line each. Alignment lines give the
//! 1-based token indices of one chunk per side; index `0` with the text
//! `-not aligned-` marks the empty side of an `ALIC`/`NOALI` record. The
//! chunk segmentation of both sentences is implied by the alignment records:
//! each side of each record is one whole chunk.
//!
//! The parser is strict about structure (section order, token numbering,
//! index ranges, one record per chunk) and permissive about whitespace:
//! blank lines between blocks, trailing spaces and CRLF line endings are all
//! accepted. The writer emits the canonical form with LF line endings, so
//! `parse(write(pairs)) == pairs` and writing is idempotent byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::model::{
    AlignmentLabel, AlignmentScore, Chunk, ChunkAlignment, ChunkedSentence, CoreLabel,
    InterpretablePair, Token,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("pair {pair_id}, line {line}: {message}")]
    Pair { pair_id: String, line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn pair_err(pair_id: &str, line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Pair { pair_id: pair_id.to_string(), line, message: message.into() }
}

/// Parses a whole `.wa` file from a string. Pairs come back in file order.
pub fn parse_wa_str(text: &str) -> Result<Vec<InterpretablePair>, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut pairs = Vec::new();
    let mut i = 0usize;
    while i < lines.len() {
        let line = lines[i].trim_end();
        if line.is_empty() {
            i += 1;
            continue;
        }
        if !line.starts_with("<sentence") {
            return Err(syntax(i + 1, format!("expected `<sentence ...>` block, found `{line}`")));
        }
        let (pair, next) = parse_block(&lines, i)?;
        pairs.push(pair);
        i = next;
    }
    Ok(pairs)
}

/// Parses a `.wa` file from disk.
pub fn parse_wa_file(path: impl AsRef<Path>) -> Result<Vec<InterpretablePair>, ParseError> {
    let text = std::fs::read_to_string(path)?;
    parse_wa_str(&text)
}

fn attr<'a>(header: &'a str, name: &str) -> Option<&'a str> {
    let marker = format!("{name}=\"");
    let start = header.find(&marker)? + marker.len();
    let rest = &header[start..];
    let end = rest.find('"')?;
    Some(&rest[..end])
}

/// Parses one `<sentence>` block starting at `lines[start]`; returns the pair
/// and the index of the first line after the block.
fn parse_block(
    lines: &[&str],
    start: usize,
) -> Result<(InterpretablePair, usize), ParseError> {
    let header = lines[start].trim_end();
    let pair_id = attr(header, "id")
        .ok_or_else(|| syntax(start + 1, "sentence header without id attribute"))?
        .to_string();
    let status = attr(header, "status").unwrap_or("").to_string();

    let mut i = start + 1;
    let next_content = |i: &mut usize| -> Option<(usize, String)> {
        while *i < lines.len() {
            let l = lines[*i].trim_end();
            *i += 1;
            if !l.is_empty() {
                return Some((*i - 1, l.to_string()));
            }
        }
        None
    };

    // Two comment lines carrying the raw sentence texts. Their content is
    // redundant with the token sections, so it is not kept in the model.
    for which in ["sentence 1", "sentence 2"] {
        match next_content(&mut i) {
            Some((_, l)) if l.starts_with("//") => {}
            Some((n, l)) => {
                return Err(pair_err(
                    &pair_id,
                    n + 1,
                    format!("expected `// ...` text line for {which}, found `{l}`"),
                ))
            }
            None => return Err(pair_err(&pair_id, lines.len(), "unexpected end of file")),
        }
    }

    let expect_tag = |tag: &str, i: &mut usize| -> Result<(), ParseError> {
        match next_content(i) {
            Some((_, l)) if l == tag => Ok(()),
            Some((n, l)) => {
                Err(pair_err(&pair_id, n + 1, format!("expected `{tag}`, found `{l}`")))
            }
            None => Err(pair_err(&pair_id, lines.len(), format!("missing `{tag}`"))),
        }
    };

    expect_tag("<source>", &mut i)?;
    let tokens1 = parse_token_section(lines, &mut i, "</source>", &pair_id)?;
    expect_tag("<translation>", &mut i)?;
    let tokens2 = parse_token_section(lines, &mut i, "</translation>", &pair_id)?;
    expect_tag("<alignment>", &mut i)?;

    let mut alignments = Vec::new();
    let mut record_lines = Vec::new();
    loop {
        let Some((n, l)) = next_content(&mut i) else {
            return Err(pair_err(&pair_id, lines.len(), "missing `</alignment>`"));
        };
        if l == "</alignment>" {
            break;
        }
        alignments.push(parse_alignment_line(&l, n + 1, &pair_id, tokens1.len(), tokens2.len())?);
        record_lines.push(n + 1);
    }
    expect_tag("</sentence>", &mut i)?;

    let sent1 = assemble_sentence(
        tokens1,
        alignments.iter().zip(&record_lines).filter_map(|(a, &n)| Some((a.left.as_deref()?, n))),
        &pair_id,
        1,
    )?;
    let sent2 = assemble_sentence(
        tokens2,
        alignments.iter().zip(&record_lines).filter_map(|(a, &n)| Some((a.right.as_deref()?, n))),
        &pair_id,
        2,
    )?;

    Ok((InterpretablePair { pair_id, status, sent1, sent2, alignments }, i))
}

fn parse_token_section(
    lines: &[&str],
    i: &mut usize,
    end_tag: &str,
    pair_id: &str,
) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    loop {
        if *i >= lines.len() {
            return Err(pair_err(pair_id, lines.len(), format!("missing `{end_tag}`")));
        }
        let n = *i;
        let l = lines[n].trim_end();
        *i += 1;
        if l.is_empty() {
            continue;
        }
        if l == end_tag {
            return Ok(tokens);
        }
        let body = l.strip_suffix(" :").ok_or_else(|| {
            pair_err(pair_id, n + 1, format!("token line must end with ` : `, found `{l}`"))
        })?;
        let (idx, surface) = body.split_once(' ').ok_or_else(|| {
            pair_err(pair_id, n + 1, format!("token line missing surface form: `{l}`"))
        })?;
        let idx: usize = idx
            .parse()
            .map_err(|_| pair_err(pair_id, n + 1, format!("bad token index `{idx}`")))?;
        if idx != tokens.len() + 1 {
            return Err(pair_err(
                pair_id,
                n + 1,
                format!("token index {idx} out of order (expected {})", tokens.len() + 1),
            ));
        }
        if surface.is_empty() {
            return Err(pair_err(pair_id, n + 1, "empty token surface"));
        }
        tokens.push(Token::new(idx, surface));
    }
}

fn parse_side(
    text: &str,
    line: usize,
    pair_id: &str,
    token_count: usize,
    side_name: &str,
) -> Result<Option<Vec<usize>>, ParseError> {
    let mut indices = Vec::new();
    for part in text.split_whitespace() {
        let idx: usize = part.parse().map_err(|_| {
            pair_err(pair_id, line, format!("bad token index `{part}` on {side_name} side"))
        })?;
        indices.push(idx);
    }
    if indices.is_empty() {
        return Err(pair_err(pair_id, line, format!("empty {side_name} side")));
    }
    if indices == [0] {
        return Ok(None);
    }
    indices.sort_unstable();
    if indices[0] == 0 {
        return Err(pair_err(
            pair_id,
            line,
            format!("index 0 mixed with real token indices on {side_name} side"),
        ));
    }
    if indices.last().copied().unwrap() > token_count {
        return Err(pair_err(
            pair_id,
            line,
            format!(
                "token index {} out of range on {side_name} side (sentence has {token_count} tokens)",
                indices.last().unwrap()
            ),
        ));
    }
    for w in indices.windows(2) {
        if w[0] == w[1] {
            return Err(pair_err(
                pair_id,
                line,
                format!("duplicate token index {} on {side_name} side", w[0]),
            ));
        }
        if w[1] != w[0] + 1 {
            return Err(pair_err(
                pair_id,
                line,
                format!("chunk token indices not contiguous on {side_name} side"),
            ));
        }
    }
    Ok(Some(indices))
}

fn parse_alignment_line(
    line_text: &str,
    line: usize,
    pair_id: &str,
    tokens1: usize,
    tokens2: usize,
) -> Result<ChunkAlignment, ParseError> {
    // INDICES <==> INDICES // LABEL // SCORE // TEXT <==> TEXT
    // The trailing text fields duplicate the token sections and are ignored.
    let mut parts = line_text.splitn(4, "//");
    let indices_part = parts
        .next()
        .ok_or_else(|| pair_err(pair_id, line, "empty alignment line"))?;
    let label_part = parts
        .next()
        .ok_or_else(|| pair_err(pair_id, line, "alignment line missing label field"))?;
    let score_part = parts
        .next()
        .ok_or_else(|| pair_err(pair_id, line, "alignment line missing score field"))?;
    let _text_part = parts.next();

    let (left_text, right_text) = indices_part.split_once("<==>").ok_or_else(|| {
        pair_err(pair_id, line, "alignment line missing `<==>` between token index groups")
    })?;
    let left = parse_side(left_text, line, pair_id, tokens1, "left")?;
    let right = parse_side(right_text, line, pair_id, tokens2, "right")?;
    if left.is_none() && right.is_none() {
        return Err(pair_err(pair_id, line, "both sides of alignment are null"));
    }

    let label: AlignmentLabel = label_part
        .trim()
        .parse()
        .map_err(|e| pair_err(pair_id, line, e))?;
    let score: AlignmentScore = score_part
        .trim()
        .parse()
        .map_err(|e: String| pair_err(pair_id, line, e))?;

    Ok(ChunkAlignment { left, right, label, score })
}

/// Builds a [`ChunkedSentence`] from its token list and the chunk token sets
/// referenced by the alignment records. Verifies that no token takes part in
/// two records.
fn assemble_sentence<'a>(
    tokens: Vec<Token>,
    sides: impl Iterator<Item = (&'a [usize], usize)>,
    pair_id: &str,
    side_no: usize,
) -> Result<ChunkedSentence, ParseError> {
    let mut used = vec![false; tokens.len()];
    let mut chunks = Vec::new();
    for (indices, line) in sides {
        for &idx in indices {
            if used[idx - 1] {
                return Err(pair_err(
                    pair_id,
                    line,
                    format!(
                        "token {idx} of sentence {side_no} appears in more than one alignment record"
                    ),
                ));
            }
            used[idx - 1] = true;
        }
        let text = indices
            .iter()
            .map(|&i| tokens[i - 1].surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        chunks.push(Chunk { token_indices: indices.to_vec(), text });
    }
    chunks.sort_by_key(|c| c.first_index());
    Ok(ChunkedSentence { tokens, chunks })
}

fn side_strings(side: Option<&Vec<usize>>, sent: &ChunkedSentence) -> (String, String) {
    match side {
        None => ("0".to_string(), "-not aligned-".to_string()),
        Some(indices) => (
            indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
            chunk_text(sent, indices),
        ),
    }
}

/// Renders pairs into canonical `.wa` text (LF line endings).
pub fn write_wa(pairs: &[InterpretablePair]) -> String {
    let mut out = String::new();
    for pair in pairs {
        write_pair(&mut out, pair);
    }
    out
}

fn write_pair(out: &mut String, pair: &InterpretablePair) {
    let _ = writeln!(out, "<sentence id=\"{}\" status=\"{}\">", pair.pair_id, pair.status);
    let _ = writeln!(out, "// {}", pair.sent1.raw_text());
    let _ = writeln!(out, "// {}", pair.sent2.raw_text());
    out.push_str("<source>\n");
    for t in &pair.sent1.tokens {
        let _ = writeln!(out, "{} {} : ", t.index, t.surface);
    }
    out.push_str("</source>\n<translation>\n");
    for t in &pair.sent2.tokens {
        let _ = writeln!(out, "{} {} : ", t.index, t.surface);
    }
    out.push_str("</translation>\n<alignment>\n");
    for a in &pair.alignments {
        let (left_idx, left_text) = side_strings(a.left.as_ref(), &pair.sent1);
        let (right_idx, right_text) = side_strings(a.right.as_ref(), &pair.sent2);
        let _ = writeln!(
            out,
            "{} <==> {} // {} // {} // {} <==> {}",
            left_idx, right_idx, a.label, a.score, left_text, right_text
        );
    }
    out.push_str("</alignment>\n</sentence>\n");
}

fn chunk_text(sent: &ChunkedSentence, indices: &[usize]) -> String {
    indices
        .iter()
        .map(|&i| sent.tokens[i - 1].surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Writes pairs to a file in canonical form.
pub fn write_wa_file(
    path: impl AsRef<Path>,
    pairs: &[InterpretablePair],
) -> std::io::Result<()> {
    std::fs::write(path, write_wa(pairs))
}

/// Aggregate statistics over a set of annotated pairs: counts per label,
/// score histogram, flag counts and segmentation averages.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetStats {
    pub sentence_pairs: usize,
    pub chunks_per_sentence: f64,
    pub tokens_per_chunk: f64,
    /// Records whose label is one of the six chunk relations.
    pub aligned_pairs: usize,
    pub equi: usize,
    pub spe1: usize,
    pub spe2: usize,
    pub simi: usize,
    pub rel: usize,
    pub oppo: usize,
    pub alic: usize,
    pub noali: usize,
    /// FACT / POL flag counts over all records, aligned or not.
    pub fact: usize,
    pub pol: usize,
    /// Score histogram over aligned records: exactly 5, then [4,5), [3,4),
    /// [2,3), [1,2), [0,1).
    pub score_5: usize,
    pub score_4_5: usize,
    pub score_3_4: usize,
    pub score_2_3: usize,
    pub score_1_2: usize,
    pub score_0_1: usize,
}

/// Computes [`DatasetStats`] over pairs (typically a whole file, or several
/// files' pairs concatenated).
pub fn dataset_stats(pairs: &[InterpretablePair]) -> DatasetStats {
    let mut s = DatasetStats { sentence_pairs: pairs.len(), ..Default::default() };
    let mut sentences = 0usize;
    let mut chunks = 0usize;
    let mut chunk_tokens = 0usize;
    for pair in pairs {
        sentences += 2;
        for sent in [&pair.sent1, &pair.sent2] {
            chunks += sent.chunks.len();
            chunk_tokens += sent.chunks.iter().map(Chunk::len).sum::<usize>();
        }
        for a in &pair.alignments {
            if a.label.fact {
                s.fact += 1;
            }
            if a.label.pol {
                s.pol += 1;
            }
            match a.label.core {
                CoreLabel::Equi => s.equi += 1,
                CoreLabel::Spe1 => s.spe1 += 1,
                CoreLabel::Spe2 => s.spe2 += 1,
                CoreLabel::Simi => s.simi += 1,
                CoreLabel::Rel => s.rel += 1,
                CoreLabel::Oppo => s.oppo += 1,
                CoreLabel::Alic => {
                    s.alic += 1;
                    continue;
                }
                CoreLabel::Noali => {
                    s.noali += 1;
                    continue;
                }
            }
            s.aligned_pairs += 1;
            if let AlignmentScore::Value(v) = a.score {
                if v == 5.0 {
                    s.score_5 += 1;
                } else if v >= 4.0 {
                    s.score_4_5 += 1;
                } else if v >= 3.0 {
                    s.score_3_4 += 1;
                } else if v >= 2.0 {
                    s.score_2_3 += 1;
                } else if v >= 1.0 {
                    s.score_1_2 += 1;
                } else {
                    s.score_0_1 += 1;
                }
            }
        }
    }
    if sentences > 0 {
        s.chunks_per_sentence = chunks as f64 / sentences as f64;
    }
    if chunks > 0 {
        s.tokens_per_chunk = chunk_tokens as f64 / chunks as f64;
    }
    s
}

impl DatasetStats {
    /// Human-readable table followed by machine-readable `key=value` lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut row = |name: &str, value: String| {
            let _ = writeln!(out, "{name:<22}{value:>10}");
        };
        row("Sentence pairs", self.sentence_pairs.to_string());
        row("Chunks per sentence", format!("{:.2}", self.chunks_per_sentence));
        row("Tokens per chunk", format!("{:.2}", self.tokens_per_chunk));
        row("Aligned pairs", self.aligned_pairs.to_string());
        row("  EQUI", self.equi.to_string());
        row("  SPE1", self.spe1.to_string());
        row("  SPE2", self.spe2.to_string());
        row("  SIMI", self.simi.to_string());
        row("  REL", self.rel.to_string());
        row("  OPPO", self.oppo.to_string());
        row("Unaligned ALIC", self.alic.to_string());
        row("Unaligned NOALI", self.noali.to_string());
        row("FACT flags", self.fact.to_string());
        row("POL flags", self.pol.to_string());
        row("Score [5]", self.score_5.to_string());
        row("Score [4,5)", self.score_4_5.to_string());
        row("Score [3,4)", self.score_3_4.to_string());
        row("Score [2,3)", self.score_2_3.to_string());
        row("Score [1,2)", self.score_1_2.to_string());
        row("Score [0,1)", self.score_0_1.to_string());
        let _ = writeln!(out, "sentence_pairs={}", self.sentence_pairs);
        let _ = writeln!(out, "chunks_per_sentence={:.4}", self.chunks_per_sentence);
        let _ = writeln!(out, "tokens_per_chunk={:.4}", self.tokens_per_chunk);
        let _ = writeln!(out, "aligned_pairs={}", self.aligned_pairs);
        let _ = writeln!(out, "label_EQUI={}", self.equi);
        let _ = writeln!(out, "label_SPE1={}", self.spe1);
        let _ = writeln!(out, "label_SPE2={}", self.spe2);
        let _ = writeln!(out, "label_SIMI={}", self.simi);
        let _ = writeln!(out, "label_REL={}", self.rel);
        let _ = writeln!(out, "label_OPPO={}", self.oppo);
        let _ = writeln!(out, "alic={}", self.alic);
        let _ = writeln!(out, "noali={}", self.noali);
        let _ = writeln!(out, "fact={}", self.fact);
        let _ = writeln!(out, "pol={}", self.pol);
        let _ = writeln!(out, "score_5={}", self.score_5);
        let _ = writeln!(out, "score_4_5={}", self.score_4_5);
        let _ = writeln!(out, "score_3_4={}", self.score_3_4);
        let _ = writeln!(out, "score_2_3={}", self.score_2_3);
        let _ = writeln!(out, "score_1_2={}", self.score_1_2);
        let _ = writeln!(out, "score_0_1={}", self.score_0_1);
        out
    }
}
