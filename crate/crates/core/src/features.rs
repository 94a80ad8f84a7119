//! The feature lexicon: the ordered sentiment vocabulary that fixes the
//! width and column order of every instance vector, together with the
//! training-corpus document frequencies that IDF weighting consumes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::corpus::Corpus;
use crate::tokenize::tokenize;
use crate::vectorize::TextSource;

pub const LEXICON_SCHEMA_VERSION: u32 = 1;

/// Sentiment words shipped as the default seed list, one per line, `#` comments allowed.
pub const DEFAULT_SEED_TERMS: &str = include_str!("../data/seed_terms.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("no term survives the lexicon selection")]
    EmptyLexicon,
    #[error("record {0} has no human label")]
    UnlabeledRecord(u64),
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("invalid term {0:?}: terms must be a single lowercase token")]
    InvalidTerm(String),
    #[error("duplicate term {0:?}")]
    DuplicateTerm(String),
    #[error("term {term:?}: document frequency {doc_freq} exceeds document count {docs}")]
    DocFreqOutOfRange { term: String, doc_freq: u64, docs: u64 },
    #[error("unsupported lexicon format version {found} (expected {expected})")]
    FormatVersionMismatch { found: String, expected: u32 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Ordered vocabulary with frozen training statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureLexicon {
    terms: Vec<String>,
    doc_freq: Vec<u64>,
    train_doc_count: u64,
    schema_version: u32,
    index: HashMap<String, usize>,
}

impl FeatureLexicon {
    /// Assembles a lexicon from `(term, doc_freq)` pairs in column order.
    pub fn from_parts(entries: Vec<(String, u64)>, train_doc_count: u64) -> Result<Self, LexiconError> {
        if entries.is_empty() {
            return Err(LexiconError::EmptyLexicon);
        }
        if train_doc_count == 0 {
            return Err(LexiconError::EmptyCorpus);
        }
        let mut index = HashMap::with_capacity(entries.len());
        let mut terms = Vec::with_capacity(entries.len());
        let mut doc_freq = Vec::with_capacity(entries.len());
        for (term, df) in entries {
            if !is_valid_term(&term) {
                return Err(LexiconError::InvalidTerm(term));
            }
            if df > train_doc_count {
                return Err(LexiconError::DocFreqOutOfRange { term, doc_freq: df, docs: train_doc_count });
            }
            if index.insert(term.clone(), terms.len()).is_some() {
                return Err(LexiconError::DuplicateTerm(term));
            }
            terms.push(term);
            doc_freq.push(df);
        }
        Ok(FeatureLexicon { terms, doc_freq, train_doc_count, schema_version: LEXICON_SCHEMA_VERSION, index })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freqs(&self) -> &[u64] {
        &self.doc_freq
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of training documents, `D` in the IDF formula.
    pub fn train_doc_count(&self) -> u64 {
        self.train_doc_count
    }

    pub fn schema_version(&self) -> u32 {
        self.schema_version
    }

    pub fn position(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn doc_freq(&self, term: &str) -> Option<u64> {
        self.position(term).map(|i| self.doc_freq[i])
    }

    /// Serializes in the lexicon text format.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "version {}", self.schema_version)?;
        writeln!(w, "D {}", self.train_doc_count)?;
        for (t, df) in self.terms.iter().zip(&self.doc_freq) {
            writeln!(w, "{t} {df}")?;
        }
        Ok(())
    }

    /// Parses the lexicon text format. `first_line` offsets line numbers in
    /// errors when the lexicon is embedded in a larger file.
    pub fn read_from<I>(lines: I, first_line: usize) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = String>,
    {
        let mut lines = lines.into_iter().enumerate().map(|(i, l)| (i + first_line, l));
        let (n, version_line) = lines
            .next()
            .ok_or(LexiconError::Parse { line: first_line, reason: "missing version line".into() })?;
        match version_line.trim().strip_prefix("version ") {
            Some(v) if v.trim() == LEXICON_SCHEMA_VERSION.to_string() => {}
            Some(v) => {
                return Err(LexiconError::FormatVersionMismatch {
                    found: v.trim().to_string(),
                    expected: LEXICON_SCHEMA_VERSION,
                })
            }
            None => return Err(LexiconError::Parse { line: n, reason: "expected `version <n>`".into() }),
        }
        let (n, d_line) =
            lines.next().ok_or(LexiconError::Parse { line: n + 1, reason: "missing `D` line".into() })?;
        let docs = d_line
            .trim()
            .strip_prefix("D ")
            .and_then(|v| v.trim().parse::<u64>().ok())
            .ok_or(LexiconError::Parse { line: n, reason: "expected `D <count>`".into() })?;
        let mut entries = Vec::new();
        for (n, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(term), Some(df), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(LexiconError::Parse { line: n, reason: "expected `<term> <doc_freq>`".into() });
            };
            let df = df
                .parse::<u64>()
                .map_err(|_| LexiconError::Parse { line: n, reason: format!("invalid doc_freq {df:?}") })?;
            entries.push((term.to_string(), df));
        }
        Self::from_parts(entries, docs)
    }
}

fn is_valid_term(t: &str) -> bool {
    let toks = tokenize(t);
    toks.len() == 1 && toks[0] == t
}

/// Selection knobs for [`build_lexicon`].
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconParams {
    pub min_doc_freq: u64,
    pub top_k: Option<usize>,
    pub seed_terms: Vec<String>,
    pub text: TextSource,
}

impl Default for LexiconParams {
    fn default() -> Self {
        LexiconParams { min_doc_freq: 2, top_k: None, seed_terms: Vec::new(), text: TextSource::TitleAndBody }
    }
}

/// Parses a seed-term list: one term per line, blank lines and `#` comments skipped.
pub fn parse_seed_terms(text: &str) -> Result<Vec<String>, LexiconError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let t = l.to_lowercase();
            if is_valid_term(&t) {
                Ok(t)
            } else {
                Err(LexiconError::InvalidTerm(l.to_string()))
            }
        })
        .collect()
}

pub fn default_seed_terms() -> Vec<String> {
    parse_seed_terms(DEFAULT_SEED_TERMS).expect("bundled seed list is valid")
}

/// Counts, for every token, the number of documents whose token set contains it.
pub fn document_frequencies(train: &Corpus, text: TextSource) -> BTreeMap<String, u64> {
    let mut df = BTreeMap::new();
    for r in train.records() {
        let tokens: HashSet<String> = tokenize(&text.select(r)).into_iter().collect();
        for t in tokens {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    df
}

/// Builds a lexicon from a labeled training corpus.
///
/// Candidates are tokens whose document frequency is at least
/// `min_doc_freq`; `top_k` keeps only the most frequent of them. Seed terms
/// are always added. Output order is descending document frequency, then
/// lexicographic.
pub fn build_lexicon(train: &Corpus, params: &LexiconParams) -> Result<FeatureLexicon, LexiconError> {
    if train.is_empty() {
        return Err(LexiconError::EmptyCorpus);
    }
    if let Some(r) = train.records().iter().find(|r| r.human_label.is_none()) {
        return Err(LexiconError::UnlabeledRecord(r.id));
    }
    let df = document_frequencies(train, params.text);

    let mut candidates: Vec<(&String, u64)> =
        df.iter().filter(|(_, &n)| n >= params.min_doc_freq).map(|(t, &n)| (t, n)).collect();
    candidates.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    if let Some(k) = params.top_k {
        candidates.truncate(k);
    }

    let mut chosen: BTreeMap<String, u64> = candidates.into_iter().map(|(t, n)| (t.clone(), n)).collect();
    for seed in &params.seed_terms {
        let seed = seed.to_lowercase();
        if !is_valid_term(&seed) {
            return Err(LexiconError::InvalidTerm(seed));
        }
        let n = df.get(&seed).copied().unwrap_or(0);
        chosen.insert(seed, n);
    }
    if chosen.is_empty() {
        return Err(LexiconError::EmptyLexicon);
    }
    let mut entries: Vec<(String, u64)> = chosen.into_iter().collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    FeatureLexicon::from_parts(entries, train.len() as u64)
}

pub fn save_lexicon(lex: &FeatureLexicon, path: &Path) -> Result<(), LexiconError> {
    let io_err = |source| LexiconError::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut w = io::BufWriter::new(file);
    lex.write_to(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn load_lexicon(path: &Path) -> Result<FeatureLexicon, LexiconError> {
    let io_err = |source| LexiconError::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::open(path).map_err(io_err)?;
    let lines = io::BufReader::new(file).lines().collect::<Result<Vec<_>, _>>().map_err(io_err)?;
    FeatureLexicon::read_from(lines, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Polarity, ReviewRecord};
    use proptest::prelude::*;

    fn corpus(bodies: &[&str]) -> Corpus {
        Corpus::new(
            bodies
                .iter()
                .enumerate()
                .map(|(i, b)| ReviewRecord {
                    id: i as u64 + 1,
                    category: "dresses".into(),
                    title: String::new(),
                    body: b.to_string(),
                    human_label: Some(Polarity::Neutral),
                    machine_label: None,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bundled_seeds_cover_sentiment_words() {
        let seeds = default_seed_terms();
        assert_eq!(seeds.len(), 28);
        for w in ["beautiful", "recommend", "tight", "return", "ok", "okay", "alright"] {
            assert!(seeds.iter().any(|s| s == w), "{w}");
        }
    }

    #[test]
    fn seeds_survive_high_threshold() {
        let c = corpus(&["good dress, love it", "good shoes", "good", "the ring is ok"]);
        let params = LexiconParams { min_doc_freq: 3, seed_terms: default_seed_terms(), ..Default::default() };
        let lex = build_lexicon(&c, &params).unwrap();
        for s in default_seed_terms() {
            assert_eq!(lex.terms().iter().filter(|t| **t == s).count(), 1, "{s}");
        }
        assert_eq!(lex.terms()[0], "good");
        assert_eq!(lex.doc_freq("good"), Some(3));
        assert_eq!(lex.doc_freq("love"), Some(1));
        assert_eq!(lex.doc_freq("hate"), Some(0));
        assert_eq!(lex.len(), 28);
    }

    #[test]
    fn single_term_case() {
        let lex = build_lexicon(&corpus(&["good good"]), &LexiconParams { min_doc_freq: 1, ..Default::default() })
            .unwrap();
        assert_eq!(lex.terms(), ["good"]);
        assert_eq!(lex.doc_freqs(), [1]);
        assert_eq!(lex.train_doc_count(), 1);
    }

    #[test]
    fn empty_and_unlabeled() {
        let c = corpus(&["alpha", "beta"]);
        assert!(matches!(
            build_lexicon(&c, &LexiconParams { min_doc_freq: 2, ..Default::default() }),
            Err(LexiconError::EmptyLexicon)
        ));
        let mut recs = c.into_records();
        recs[1].human_label = None;
        let c = Corpus::new(recs).unwrap();
        assert!(matches!(build_lexicon(&c, &LexiconParams::default()), Err(LexiconError::UnlabeledRecord(2))));
    }

    #[test]
    fn top_k_and_ordering() {
        let c = corpus(&["a b c", "a b", "a d", "b d e"]);
        let lex = build_lexicon(&c, &LexiconParams { min_doc_freq: 1, top_k: Some(3), ..Default::default() }).unwrap();
        assert_eq!(lex.terms(), ["a", "b", "d"]);
        assert_eq!(lex.doc_freqs(), [3, 3, 2]);
    }

    #[test]
    fn body_only_ignores_title() {
        let mut recs = corpus(&["nice", "nice"]).into_records();
        recs[0].title = "terrible".into();
        recs[1].title = "terrible".into();
        let c = Corpus::new(recs).unwrap();
        let both = build_lexicon(&c, &LexiconParams::default()).unwrap();
        assert_eq!(both.terms(), ["nice", "terrible"]);
        let body = build_lexicon(&c, &LexiconParams { text: TextSource::BodyOnly, ..Default::default() }).unwrap();
        assert_eq!(body.terms(), ["nice"]);
    }

    #[test]
    fn hand_written_file() {
        let text = "version 1\nD 10\nlove 4\nhate 2\nokay 0\n";
        let lex = FeatureLexicon::read_from(text.lines().map(String::from), 1).unwrap();
        assert_eq!(lex.terms(), ["love", "hate", "okay"]);
        assert_eq!(lex.doc_freqs(), [4, 2, 0]);
        assert_eq!(lex.train_doc_count(), 10);
    }

    #[test]
    fn format_errors() {
        let read = |s: &str| FeatureLexicon::read_from(s.lines().map(String::from), 1);
        assert!(matches!(read("version 2\nD 1\na 1\n"), Err(LexiconError::FormatVersionMismatch { .. })));
        assert!(matches!(read("version 1\nD 1\na 2\n"), Err(LexiconError::DocFreqOutOfRange { .. })));
        assert!(matches!(read("version 1\nD 3\na 1\na 2\n"), Err(LexiconError::DuplicateTerm(_))));
        assert!(matches!(read("version 1\nD 3\nA 1\n"), Err(LexiconError::InvalidTerm(_))));
        assert!(matches!(read("version 1\nD 3\n"), Err(LexiconError::EmptyLexicon)));
        assert!(matches!(read("version 1\nD 3\na\n"), Err(LexiconError::Parse { line: 3, .. })));
        assert!(matches!(read("version 1\n"), Err(LexiconError::Parse { .. })));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lex.txt");
        let lex = build_lexicon(
            &corpus(&["good dress", "poor fit, return", "okay"]),
            &LexiconParams { min_doc_freq: 1, seed_terms: default_seed_terms(), ..Default::default() },
        )
        .unwrap();
        save_lexicon(&lex, &path).unwrap();
        assert_eq!(load_lexicon(&path).unwrap(), lex);
        assert!(matches!(load_lexicon(&dir.path().join("missing")), Err(LexiconError::Io { .. })));
    }

    proptest! {
        #[test]
        fn doc_freq_matches_brute_force(docs in proptest::collection::vec("[abcde ]{1,12}", 1..8)) {
            let docs: Vec<String> = docs.into_iter().map(|d| format!("{d} z")).collect();
            let refs: Vec<&str> = docs.iter().map(String::as_str).collect();
            let c = corpus(&refs);
            let lex = build_lexicon(&c, &LexiconParams { min_doc_freq: 1, ..Default::default() }).unwrap();
            for (t, &df) in lex.terms().iter().zip(lex.doc_freqs()) {
                let brute = docs.iter().filter(|d| d.split(|ch: char| !ch.is_alphanumeric()).any(|w| w == t)).count();
                prop_assert_eq!(df, brute as u64);
            }
            prop_assert!(lex.doc_freqs().windows(2).all(|w| w[0] >= w[1]));
            let again = build_lexicon(&c, &LexiconParams { min_doc_freq: 1, ..Default::default() }).unwrap();
            prop_assert_eq!(again, lex);
        }
    }
}
