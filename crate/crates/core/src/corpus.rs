//! Review corpora: the six-column CSV record format, validation, and seeded
//! train/test splitting.

use std::collections::HashSet;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::SystemTime;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sentiment class of a review.
///
/// The declaration order is the canonical order used for matrix rows and
/// columns, pair enumeration and final tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

impl Polarity {
    pub const ALL: [Polarity; 3] = [Polarity::Positive, Polarity::Negative, Polarity::Neutral];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Polarity> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown polarity {0:?}")]
pub struct ParsePolarityError(pub String);

impl FromStr for Polarity {
    type Err = ParsePolarityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            "neutral" => Ok(Polarity::Neutral),
            _ => Err(ParsePolarityError(s.to_string())),
        }
    }
}

/// One product review.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewRecord {
    pub id: u64,
    pub category: String,
    pub title: String,
    pub body: String,
    pub human_label: Option<Polarity>,
    pub machine_label: Option<Polarity>,
}

impl ReviewRecord {
    /// Title and body joined by a single space.
    pub fn full_text(&self) -> String {
        let mut s = String::with_capacity(self.title.len() + self.body.len() + 1);
        s.push_str(&self.title);
        s.push(' ');
        s.push_str(&self.body);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub source: PathBuf,
    pub loaded_at: SystemTime,
}

/// An ordered, id-unique collection of reviews.
#[derive(Debug, Clone)]
pub struct Corpus {
    records: Vec<ReviewRecord>,
    provenance: Option<Provenance>,
}

/// Equality compares records only; provenance is metadata.
impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("row {0}: missing human label")]
    MissingLabel(usize),
    #[error("row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("duplicate record id {0}")]
    DuplicateId(u64),
    #[error("row {row}: unknown label {text:?}")]
    UnknownLabel { row: usize, text: String },
    #[error("train count {train_count} must be in 1..{total}")]
    BadSplit { train_count: usize, total: usize },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Corpus {
    /// Builds a corpus from in-memory records, checking id uniqueness and
    /// non-empty bodies.
    pub fn new(records: Vec<ReviewRecord>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if r.id == 0 {
                return Err(CorpusError::MalformedRow { row: i + 1, reason: "id must be positive".into() });
            }
            if r.body.trim().is_empty() {
                return Err(CorpusError::MalformedRow { row: i + 1, reason: "empty body".into() });
            }
            if !seen.insert(r.id) {
                return Err(CorpusError::DuplicateId(r.id));
            }
        }
        Ok(Corpus { records, provenance: None })
    }

    pub fn records(&self) -> &[ReviewRecord] {
        &self.records
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn into_records(self) -> Vec<ReviewRecord> {
        self.records
    }

    /// Parses CSV text with the header `id,category,title,body,human_label,machine_label`.
    /// Row numbers in errors count data rows from 1.
    pub fn from_reader<R: io::Read>(reader: R, require_labels: bool) -> Result<Self, CorpusError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["id", "category", "title", "body", "human_label", "machine_label"];
        if headers.len() != expected.len()
            || headers.iter().zip(expected).any(|(h, e)| !h.trim().eq_ignore_ascii_case(e))
        {
            return Err(CorpusError::MalformedRow {
                row: 0,
                reason: format!("header must be {}", expected.join(",")),
            });
        }

        let mut records = Vec::new();
        let mut seen = HashSet::new();
        for (i, result) in rdr.records().enumerate() {
            let row = i + 1;
            let rec = result.map_err(|e| CorpusError::MalformedRow { row, reason: e.to_string() })?;
            if rec.len() != 6 {
                return Err(CorpusError::MalformedRow {
                    row,
                    reason: format!("expected 6 fields, found {}", rec.len()),
                });
            }
            let id: u64 = rec[0].trim().parse().map_err(|_| CorpusError::MalformedRow {
                row,
                reason: format!("invalid id {:?}", &rec[0]),
            })?;
            if id == 0 {
                return Err(CorpusError::MalformedRow { row, reason: "id must be positive".into() });
            }
            if rec[3].trim().is_empty() {
                return Err(CorpusError::MalformedRow { row, reason: "empty body".into() });
            }
            let human_label = parse_label(row, &rec[4])?;
            if require_labels && human_label.is_none() {
                return Err(CorpusError::MissingLabel(row));
            }
            let machine_label = parse_label(row, &rec[5])?;
            if !seen.insert(id) {
                return Err(CorpusError::DuplicateId(id));
            }
            records.push(ReviewRecord {
                id,
                category: rec[1].to_string(),
                title: rec[2].to_string(),
                body: rec[3].to_string(),
                human_label,
                machine_label,
            });
        }
        Ok(Corpus { records, provenance: None })
    }

    /// Writes the corpus in the canonical CSV format.
    pub fn to_writer<W: io::Write>(&self, writer: W) -> Result<(), CorpusError> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        wtr.write_record(["id", "category", "title", "body", "human_label", "machine_label"])?;
        for r in &self.records {
            let id = r.id.to_string();
            wtr.write_record([
                id.as_str(),
                &r.category,
                &r.title,
                &r.body,
                r.human_label.map_or("", Polarity::as_str),
                r.machine_label.map_or("", Polarity::as_str),
            ])?;
        }
        wtr.flush().map_err(|e| CorpusError::Csv(e.into()))?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        let file = std::fs::File::create(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
        self.to_writer(io::BufWriter::new(file))
    }

    /// Returns a copy with each record's machine label replaced.
    pub fn with_machine_labels(&self, labels: &[Polarity]) -> Corpus {
        assert_eq!(labels.len(), self.records.len(), "one label per record");
        let records = self
            .records
            .iter()
            .zip(labels)
            .map(|(r, &l)| ReviewRecord { machine_label: Some(l), ..r.clone() })
            .collect();
        Corpus { records, provenance: self.provenance.clone() }
    }
}

fn parse_label(row: usize, cell: &str) -> Result<Option<Polarity>, CorpusError> {
    if cell.trim().is_empty() {
        return Ok(None);
    }
    cell.parse()
        .map(Some)
        .map_err(|_| CorpusError::UnknownLabel { row, text: cell.to_string() })
}

/// Loads a review CSV from disk.
pub fn load_corpus(path: &Path, require_labels: bool) -> Result<Corpus, CorpusError> {
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    let mut corpus = Corpus::from_reader(io::BufReader::new(file), require_labels)?;
    corpus.provenance = Some(Provenance { source: path.to_path_buf(), loaded_at: SystemTime::now() });
    Ok(corpus)
}

/// Randomly partitions a corpus into `train_count` training records and the
/// rest, keeping the original relative order inside each part.
///
/// The selection comes from a ChaCha8 generator seeded with `seed`, so equal
/// inputs always give equal partitions.
pub fn split_corpus(c: &Corpus, train_count: usize, seed: u64) -> Result<(Corpus, Corpus), CorpusError> {
    let total = c.len();
    if train_count == 0 || train_count >= total {
        return Err(CorpusError::BadSplit { train_count, total });
    }
    let mut order: Vec<usize> = (0..total).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut in_train = vec![false; total];
    for &i in &order[..train_count] {
        in_train[i] = true;
    }
    let (mut train, mut test) = (Vec::with_capacity(train_count), Vec::with_capacity(total - train_count));
    for (r, keep) in c.records.iter().zip(in_train) {
        if keep {
            train.push(r.clone());
        } else {
            test.push(r.clone());
        }
    }
    Ok((
        Corpus { records: train, provenance: c.provenance.clone() },
        Corpus { records: test, provenance: c.provenance.clone() },
    ))
}
