//! Lexical resources backing word similarity: two word-embedding spaces, a
//! paraphrase probability table, an idf table and a taxonomy of synsets with
//! information content. Every resource is optional; a missing resource simply
//! removes its contribution (callers can check the capability report).
//!
//! File formats, one entry per line, `#`-prefixed comment lines skipped:
//!
//! * embeddings — `word v1 v2 ... vd`, space separated, fixed dimension;
//! * paraphrases — `word1 TAB word2 TAB probability` (directional);
//! * idf — `word TAB idf`, plus a `#default TAB value` header giving the idf
//!   of unknown words;
//! * taxonomy — `synsetId TAB pos TAB lemma,lemma,... TAB hypernymId,...`,
//!   empty hypernym field for roots;
//! * information content — `synsetId TAB ic`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("{file}:{line}: {message}")]
    Format { file: String, line: usize, message: String },
    #[error("{file}: {message}")]
    Invalid { file: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_err(path: &Path, line: usize, message: impl Into<String>) -> ResourceError {
    ResourceError::Format {
        file: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// A word-embedding space. Similarities are distances rescaled by the largest
/// distance seen so far: `1 - d / maxDistance`. The scale is learned from the
/// queries themselves — a pipeline first sweeps every word pair it will ever
/// compare (see [`LexicalResources::calibrate_pair`]) so that the second,
/// scoring pass sees one stable scale.
#[derive(Debug)]
pub struct EmbeddingSpace {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
    /// Largest distance observed so far, stored as f64 bits. Distances are
    /// nonnegative, and IEEE-754 ordering on nonnegative values agrees with
    /// unsigned integer ordering on their bits, so `fetch_max` works.
    max_distance: AtomicU64,
}

impl EmbeddingSpace {
    pub fn from_entries(
        entries: impl IntoIterator<Item = (String, Vec<f64>)>,
    ) -> Result<Self, String> {
        let mut vectors = HashMap::new();
        let mut dim = None;
        for (word, vector) in entries {
            match dim {
                None => dim = Some(vector.len()),
                Some(d) if d != vector.len() => {
                    return Err(format!(
                        "embedding dimension mismatch for `{word}`: expected {d}, got {}",
                        vector.len()
                    ));
                }
                _ => {}
            }
            if vector.iter().any(|v| !v.is_finite()) {
                return Err(format!("non-finite embedding component for `{word}`"));
            }
            vectors.insert(word.to_lowercase(), vector);
        }
        Ok(EmbeddingSpace {
            dim: dim.unwrap_or(0),
            vectors,
            max_distance: AtomicU64::new(0),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ResourceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut dim: Option<usize> = None;
        let mut vectors = HashMap::new();
        for (line, l) in content_lines(&text) {
            let mut fields = l.split_whitespace();
            let word = fields
                .next()
                .ok_or_else(|| format_err(path, line, "empty embedding line"))?;
            let mut vector = Vec::new();
            for f in fields {
                let v: f64 = f
                    .parse()
                    .map_err(|_| format_err(path, line, format!("bad component `{f}`")))?;
                if !v.is_finite() {
                    return Err(format_err(path, line, "non-finite embedding component"));
                }
                vector.push(v);
            }
            if vector.is_empty() {
                return Err(format_err(path, line, "embedding line without components"));
            }
            match dim {
                None => dim = Some(vector.len()),
                Some(d) if d != vector.len() => {
                    return Err(format_err(
                        path,
                        line,
                        format!("dimension mismatch: expected {d}, got {}", vector.len()),
                    ));
                }
                _ => {}
            }
            vectors.insert(word.to_lowercase(), vector);
        }
        Ok(EmbeddingSpace {
            dim: dim.unwrap_or(0),
            vectors,
            max_distance: AtomicU64::new(0),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(&word.to_lowercase())
    }

    pub fn max_distance(&self) -> f64 {
        f64::from_bits(self.max_distance.load(Ordering::Relaxed))
    }

    /// Euclidean distance between the two words' vectors, and an update of
    /// the running maximum. `None` when either word is out of vocabulary.
    pub fn observe(&self, a: &str, b: &str) -> Option<f64> {
        let va = self.vectors.get(&a.to_lowercase())?;
        let vb = self.vectors.get(&b.to_lowercase())?;
        let d = va
            .iter()
            .zip(vb)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        self.max_distance.fetch_max(d.to_bits(), Ordering::Relaxed);
        Some(d)
    }

    /// `1 - d / maxDistance`, after folding this pair's distance into the
    /// running maximum; identical vectors give 1.0, the pair realizing the
    /// maximum gives 0.0. `None` when either word is out of vocabulary.
    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        let d = self.observe(a, b)?;
        if d == 0.0 {
            return Some(1.0);
        }
        Some(1.0 - d / self.max_distance())
    }
}

/// Directional paraphrase probabilities. The similarity of a pair is the
/// average of the two directions when both are present, the single direction
/// otherwise.
#[derive(Debug, Default)]
pub struct ParaphraseTable {
    probs: HashMap<(String, String), f64>,
}

impl ParaphraseTable {
    pub fn from_entries(entries: impl IntoIterator<Item = (String, String, f64)>) -> Self {
        let mut probs = HashMap::new();
        for (a, b, p) in entries {
            probs.insert((a.to_lowercase(), b.to_lowercase()), p);
        }
        ParaphraseTable { probs }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ResourceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut probs = HashMap::new();
        for (line, l) in content_lines(&text) {
            let fields: Vec<&str> = l.split('\t').collect();
            if fields.len() != 3 {
                return Err(format_err(
                    path,
                    line,
                    format!("expected 3 tab-separated fields, got {}", fields.len()),
                ));
            }
            let p: f64 = fields[2]
                .parse()
                .map_err(|_| format_err(path, line, format!("bad probability `{}`", fields[2])))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(format_err(path, line, format!("probability {p} outside [0,1]")));
            }
            probs.insert((fields[0].to_lowercase(), fields[1].to_lowercase()), p);
        }
        Ok(ParaphraseTable { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        let a = a.to_lowercase();
        let b = b.to_lowercase();
        let fwd = self.probs.get(&(a.clone(), b.clone()));
        let bwd = self.probs.get(&(b, a));
        match (fwd, bwd) {
            (Some(f), Some(g)) => Some((f + g) / 2.0),
            (Some(f), None) => Some(*f),
            (None, Some(g)) => Some(*g),
            (None, None) => None,
        }
    }
}

/// Inverse document frequencies with a default for unknown words.
#[derive(Debug)]
pub struct IdfTable {
    values: HashMap<String, f64>,
    default: f64,
}

impl IdfTable {
    pub fn new(default: f64, entries: impl IntoIterator<Item = (String, f64)>) -> Self {
        IdfTable {
            values: entries
                .into_iter()
                .map(|(w, v)| (w.to_lowercase(), v))
                .collect(),
            default,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ResourceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut values = HashMap::new();
        let mut default = 1.0;
        for (line, l) in text.lines().enumerate().map(|(n, l)| (n + 1, l.trim_end())) {
            if l.is_empty() {
                continue;
            }
            // The `#default` header is the one meaningful comment line.
            if let Some(rest) = l.strip_prefix("#default\t") {
                default = rest.trim().parse().map_err(|_| {
                    format_err(path, line, format!("bad default idf `{}`", rest.trim()))
                })?;
                continue;
            }
            if l.starts_with('#') {
                continue;
            }
            let (word, value) = l
                .split_once('\t')
                .ok_or_else(|| format_err(path, line, "expected `word TAB idf`"))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| format_err(path, line, format!("bad idf `{value}`")))?;
            values.insert(word.to_lowercase(), value);
        }
        Ok(IdfTable { values, default })
    }

    pub fn default_idf(&self) -> f64 {
        self.default
    }

    pub fn idf(&self, word: &str) -> f64 {
        self.values
            .get(&word.to_lowercase())
            .copied()
            .unwrap_or(self.default)
    }
}

/// Which taxonomy similarity to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaxonomyMeasure {
    /// `1 / (1 + e)` where `e` is the shortest hypernym path between the two
    /// synsets through a common subsumer.
    Path,
    /// `-ln((e + 1) / (2 D))` with `D` the taxonomy depth.
    Lch,
    /// `1 / (IC(a) + IC(b) - 2 IC(lcs) + ε)` on information content.
    Jcn,
}

/// Whether depths and path lengths are taken in the full taxonomy or in the
/// subtree rooted at the pair's least common subsumer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMode {
    TrueRoot,
    LcsAsRoot,
}

/// Smoothing constant keeping the jcn measure finite for synsets with equal
/// information content.
pub const JCN_EPSILON: f64 = 1e-6;

/// Input record for building a [`Taxonomy`] in memory.
#[derive(Debug, Clone)]
pub struct SynsetEntry {
    pub id: String,
    pub pos: String,
    pub lemmas: Vec<String>,
    pub hypernyms: Vec<String>,
}

/// A hypernym DAG over synsets, with lemma lookup, depths, subtree heights
/// and optional information content. Roots have depth 1; the depth of any
/// other synset is one more than the smallest depth among its hypernyms.
#[derive(Debug)]
pub struct Taxonomy {
    index: HashMap<String, usize>,
    ids: Vec<String>,
    hypernyms: Vec<Vec<usize>>,
    hyponyms: Vec<Vec<usize>>,
    lemma_senses: HashMap<String, Vec<usize>>,
    depth: Vec<u32>,
    height_below: Vec<u32>,
    ic: Vec<Option<f64>>,
    max_depth: u32,
}

impl Taxonomy {
    pub fn build(entries: Vec<SynsetEntry>) -> Result<Self, String> {
        let n = entries.len();
        let mut index = HashMap::with_capacity(n);
        for (slot, e) in entries.iter().enumerate() {
            if index.insert(e.id.clone(), slot).is_some() {
                return Err(format!("duplicate synset id `{}`", e.id));
            }
        }
        let mut hypernyms = vec![Vec::new(); n];
        let mut hyponyms = vec![Vec::new(); n];
        let mut lemma_senses: HashMap<String, Vec<usize>> = HashMap::new();
        for (slot, e) in entries.iter().enumerate() {
            for h in &e.hypernyms {
                let &parent = index
                    .get(h)
                    .ok_or_else(|| format!("synset `{}` has unknown hypernym `{h}`", e.id))?;
                hypernyms[slot].push(parent);
                hyponyms[parent].push(slot);
            }
            for lemma in &e.lemmas {
                let lemma = lemma.to_lowercase();
                if !lemma.is_empty() {
                    lemma_senses.entry(lemma).or_default().push(slot);
                }
            }
        }

        // Topological pass: parents before children. Also the cycle check.
        let mut remaining: Vec<usize> = hypernyms.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&i| remaining[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        let mut depth = vec![0u32; n];
        while let Some(slot) = queue.pop() {
            depth[slot] = if hypernyms[slot].is_empty() {
                1
            } else {
                1 + hypernyms[slot].iter().map(|&h| depth[h]).min().unwrap()
            };
            order.push(slot);
            for &child in &hyponyms[slot] {
                remaining[child] -= 1;
                if remaining[child] == 0 {
                    queue.push(child);
                }
            }
        }
        if order.len() != n {
            return Err("taxonomy contains a hypernym cycle".to_string());
        }

        let mut height_below = vec![0u32; n];
        for &slot in order.iter().rev() {
            height_below[slot] = hyponyms[slot]
                .iter()
                .map(|&c| height_below[c] + 1)
                .max()
                .unwrap_or(0);
        }
        let max_depth = depth.iter().copied().max().unwrap_or(0);

        Ok(Taxonomy {
            index,
            ids: entries.iter().map(|e| e.id.clone()).collect(),
            hypernyms,
            hyponyms,
            lemma_senses,
            depth,
            height_below,
            ic: vec![None; n],
            max_depth,
        })
    }

    /// Attaches information content values; every id must be a known synset
    /// and no value may be negative.
    pub fn set_ic(&mut self, entries: impl IntoIterator<Item = (String, f64)>) -> Result<(), String> {
        for (id, value) in entries {
            let &slot = self
                .index
                .get(&id)
                .ok_or_else(|| format!("information content for unknown synset `{id}`"))?;
            if value < 0.0 || !value.is_finite() {
                return Err(format!("negative information content for `{id}`"));
            }
            self.ic[slot] = Some(value);
        }
        Ok(())
    }

    pub fn load(
        taxonomy_path: impl AsRef<Path>,
        ic_path: Option<&Path>,
    ) -> Result<Self, ResourceError> {
        let path = taxonomy_path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut entries = Vec::new();
        for (line, l) in content_lines(&text) {
            let fields: Vec<&str> = l.split('\t').collect();
            if fields.len() != 4 {
                return Err(format_err(
                    path,
                    line,
                    format!("expected 4 tab-separated fields, got {}", fields.len()),
                ));
            }
            let split_list = |s: &str| -> Vec<String> {
                s.split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(str::to_string)
                    .collect()
            };
            entries.push(SynsetEntry {
                id: fields[0].to_string(),
                pos: fields[1].to_string(),
                lemmas: split_list(fields[2]),
                hypernyms: split_list(fields[3]),
            });
        }
        let mut taxonomy = Taxonomy::build(entries).map_err(|message| ResourceError::Invalid {
            file: path.display().to_string(),
            message,
        })?;
        if let Some(ic_path) = ic_path {
            let text = std::fs::read_to_string(ic_path)?;
            let mut ic_entries = Vec::new();
            for (line, l) in content_lines(&text) {
                let (id, value) = l
                    .split_once('\t')
                    .ok_or_else(|| format_err(ic_path, line, "expected `synsetId TAB ic`"))?;
                let value: f64 = value.trim().parse().map_err(|_| {
                    format_err(ic_path, line, format!("bad information content `{value}`"))
                })?;
                ic_entries.push((id.to_string(), value));
            }
            taxonomy
                .set_ic(ic_entries)
                .map_err(|message| ResourceError::Invalid {
                    file: ic_path.display().to_string(),
                    message,
                })?;
        }
        Ok(taxonomy)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        self.lemma_senses.contains_key(&lemma.to_lowercase())
    }

    /// Depth of a lemma's deepest sense, `None` for unknown lemmas.
    pub fn lemma_depth(&self, lemma: &str) -> Option<u32> {
        let senses = self.lemma_senses.get(&lemma.to_lowercase())?;
        senses.iter().map(|&s| self.depth[s]).max()
    }

    /// Minimum hypernym-edge distances from `slot` to each of its ancestors,
    /// the synset itself included at distance 0.
    fn ancestor_distances(&self, slot: usize) -> HashMap<usize, u32> {
        let mut dist = HashMap::new();
        dist.insert(slot, 0u32);
        let mut frontier = vec![slot];
        while let Some(s) = frontier.pop() {
            let d = dist[&s];
            for &h in &self.hypernyms[s] {
                let better = match dist.get(&h) {
                    Some(&old) => d + 1 < old,
                    None => true,
                };
                if better {
                    dist.insert(h, d + 1);
                    frontier.push(h);
                }
            }
        }
        dist
    }

    /// Measure between two senses, or `None` when it is undefined (no common
    /// subsumer, or missing information content for jcn).
    fn sense_similarity(
        &self,
        a: usize,
        b: usize,
        measure: TaxonomyMeasure,
        root: RootMode,
        scale_lch: bool,
    ) -> Option<f64> {
        let da = self.ancestor_distances(a);
        let db = self.ancestor_distances(b);

        let mut shortest: Option<u32> = None;
        let mut lcs: Option<(u32, usize)> = None; // (depth, slot), deepest wins
        for (&cs, &ea) in &da {
            let Some(&eb) = db.get(&cs) else { continue };
            let through = ea + eb;
            if shortest.map_or(true, |s| through < s) {
                shortest = Some(through);
            }
            let key = (self.depth[cs], usize::MAX - cs); // deepest, then lowest slot
            if lcs.map_or(true, |(d, inv)| key > (d, inv)) {
                lcs = Some(key);
            }
        }
        let shortest = shortest?;
        let (_, lcs_inv) = lcs?;
        let lcs = usize::MAX - lcs_inv;

        match measure {
            TaxonomyMeasure::Path => {
                let e = match root {
                    RootMode::TrueRoot => shortest,
                    RootMode::LcsAsRoot => da[&lcs] + db[&lcs],
                };
                Some(1.0 / (1.0 + e as f64))
            }
            TaxonomyMeasure::Lch => {
                let (e, d) = match root {
                    RootMode::TrueRoot => (shortest, self.max_depth),
                    RootMode::LcsAsRoot => (da[&lcs] + db[&lcs], self.height_below[lcs] + 1),
                };
                let raw = -(((e + 1) as f64) / (2.0 * d as f64)).ln();
                if scale_lch {
                    Some(raw / (2.0 * d as f64).ln())
                } else {
                    Some(raw)
                }
            }
            TaxonomyMeasure::Jcn => {
                let ica = self.ic[a]?;
                let icb = self.ic[b]?;
                let iclcs = self.ic[lcs]?;
                let gap = (ica + icb - 2.0 * iclcs).max(0.0);
                Some(1.0 / (gap + JCN_EPSILON))
            }
        }
    }

    /// Similarity between two lemmas: the maximum of the measure over all
    /// sense pairs. `None` when either lemma is unknown or the measure is
    /// undefined for every sense pair.
    pub fn similarity(
        &self,
        lemma_a: &str,
        lemma_b: &str,
        measure: TaxonomyMeasure,
        root: RootMode,
    ) -> Option<f64> {
        self.similarity_impl(lemma_a, lemma_b, measure, root, false)
    }

    /// Like [`Taxonomy::similarity`], but with the lch measure rescaled into
    /// (0, 1] by its maximum value, making all three measures usable as
    /// bounded features. Path and jcn pass through unchanged.
    pub fn feature_similarity(
        &self,
        lemma_a: &str,
        lemma_b: &str,
        measure: TaxonomyMeasure,
        root: RootMode,
    ) -> Option<f64> {
        self.similarity_impl(lemma_a, lemma_b, measure, root, true)
    }

    fn similarity_impl(
        &self,
        lemma_a: &str,
        lemma_b: &str,
        measure: TaxonomyMeasure,
        root: RootMode,
        scale_lch: bool,
    ) -> Option<f64> {
        let sa = self.lemma_senses.get(&lemma_a.to_lowercase())?;
        let sb = self.lemma_senses.get(&lemma_b.to_lowercase())?;
        let mut best: Option<f64> = None;
        for &a in sa {
            for &b in sb {
                if let Some(v) = self.sense_similarity(a, b, measure, root, scale_lch) {
                    if best.map_or(true, |x| v > x) {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }

    /// True when some sense of `lemma_a` is a strict descendant of some sense
    /// of `lemma_b` — i.e. `lemma_a` can name a more specific thing.
    pub fn is_more_specific(&self, lemma_a: &str, lemma_b: &str) -> bool {
        let Some(sa) = self.lemma_senses.get(&lemma_a.to_lowercase()) else {
            return false;
        };
        let Some(sb) = self.lemma_senses.get(&lemma_b.to_lowercase()) else {
            return false;
        };
        for &a in sa {
            let ancestors = self.ancestor_distances(a);
            for &b in sb {
                if b != a && ancestors.contains_key(&b) {
                    return true;
                }
            }
        }
        false
    }
}

/// The bundle of all loaded resources. Every slot is optional.
#[derive(Debug, Default)]
pub struct LexicalResources {
    pub embedding1: Option<EmbeddingSpace>,
    pub embedding2: Option<EmbeddingSpace>,
    pub paraphrase: Option<ParaphraseTable>,
    pub idf: Option<IdfTable>,
    pub taxonomy: Option<Taxonomy>,
}

impl LexicalResources {
    pub fn empty() -> Self {
        Self::default()
    }

    /// One-line summary of which resources are present, for logs.
    pub fn capability_report(&self) -> String {
        let mut out = String::from("resources:");
        let mut cap = |name: &str, present: bool| {
            let _ = write!(out, " {name}={}", if present { "yes" } else { "no" });
        };
        cap("embeddings1", self.embedding1.is_some());
        cap("embeddings2", self.embedding2.is_some());
        cap("paraphrases", self.paraphrase.is_some());
        cap("idf", self.idf.is_some());
        cap("taxonomy", self.taxonomy.is_some());
        out
    }

    /// Word similarity in [0, 1]: equal lowercased words give 1.0, otherwise
    /// the maximum over the available word-level resources (both embedding
    /// spaces and the paraphrase table); 0.0 when no resource knows the pair.
    pub fn word_similarity(&self, a: &str, b: &str) -> f64 {
        let a = a.to_lowercase();
        let b = b.to_lowercase();
        if a == b {
            return 1.0;
        }
        let mut best: Option<f64> = None;
        for candidate in [
            self.embedding1.as_ref().and_then(|e| e.similarity(&a, &b)),
            self.embedding2.as_ref().and_then(|e| e.similarity(&a, &b)),
            self.paraphrase.as_ref().and_then(|p| p.similarity(&a, &b)),
        ] {
            if let Some(v) = candidate {
                if best.map_or(true, |x| v > x) {
                    best = Some(v);
                }
            }
        }
        best.unwrap_or(0.0)
    }

    /// Idf of a word, or 1.0 when no idf table is loaded (uniform weights).
    pub fn idf(&self, word: &str) -> f64 {
        match &self.idf {
            Some(table) => table.idf(word),
            None => 1.0,
        }
    }

    /// Folds every cross-sentence word pair into the embedding distance
    /// scales. Run once over a whole dataset before any similarity is used,
    /// so results do not depend on query order.
    pub fn calibrate_pair<S1: AsRef<str>, S2: AsRef<str>>(&self, words1: &[S1], words2: &[S2]) {
        for space in [self.embedding1.as_ref(), self.embedding2.as_ref()]
            .into_iter()
            .flatten()
        {
            for w1 in words1 {
                for w2 in words2 {
                    space.observe(w1.as_ref(), w2.as_ref());
                }
            }
        }
    }
}
