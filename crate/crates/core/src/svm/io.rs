//! Model file format.
//!
//! ```text
//! opinion-svm-model 1
//! lexicon <n_terms>
//! version 1            <- lexicon file format, n_terms term lines
//! D <train_doc_count>
//! <term> <doc_freq>
//! ...
//! scheme tfidf|binary
//! clamp_idf true|false
//! text title+body|body
//! pair <pos> <neg>      <- three times, in canonical pair order
//! b <bias>
//! C <c>
//! tol <tol>
//! max_passes <n>
//! max_iters <n>|auto
//! training_size <n>
//! iterations <n>
//! converged true|false
//! kkt_gap <gap>
//! w <nonzero count>
//! <index> <value>
//! alpha <nonzero count>
//! <index> <value>
//! end
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so a loaded model
//! is bit-identical to the saved one.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use crate::features::FeatureLexicon;
use crate::vectorize::{TextSource, Vectorizer, WeightingScheme};

use super::multiclass::PAIRS;
use super::{BinarySvmModel, MulticlassModel, SvmError, SvmParams, TrainStats};

pub const MODEL_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "opinion-svm-model";

pub fn write_model(m: &MulticlassModel) -> String {
    let mut out = String::new();
    let v = &m.vectorizer;
    let _ = writeln!(out, "{MAGIC} {MODEL_FORMAT_VERSION}");
    let _ = writeln!(out, "lexicon {}", v.lexicon().len());
    let mut lex = Vec::new();
    v.lexicon().write_to(&mut lex).expect("writing to memory");
    out.push_str(std::str::from_utf8(&lex).expect("lexicon is utf-8"));
    let _ = writeln!(out, "scheme {}", v.scheme());
    let _ = writeln!(out, "clamp_idf {}", v.clamp_idf());
    let _ = writeln!(out, "text {}", v.text_source().as_str());
    for p in &m.pairwise {
        let _ = writeln!(out, "pair {} {}", p.pos_label, p.neg_label);
        let _ = writeln!(out, "b {}", p.b);
        let _ = writeln!(out, "C {}", p.params.c);
        let _ = writeln!(out, "tol {}", p.params.tol);
        let _ = writeln!(out, "max_passes {}", p.params.max_passes);
        match p.params.max_iters {
            Some(n) => {
                let _ = writeln!(out, "max_iters {n}");
            }
            None => out.push_str("max_iters auto\n"),
        }
        let _ = writeln!(out, "training_size {}", p.training_size);
        let _ = writeln!(out, "iterations {}", p.stats.iterations);
        let _ = writeln!(out, "converged {}", p.stats.converged);
        let _ = writeln!(out, "kkt_gap {}", p.stats.kkt_gap);
        write_sparse(&mut out, "w", &p.w);
        write_sparse(&mut out, "alpha", &p.alphas);
    }
    out.push_str("end\n");
    out
}

fn write_sparse(out: &mut String, key: &str, values: &[f64]) {
    let nz: Vec<(usize, f64)> = values.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
    let _ = writeln!(out, "{key} {}", nz.len());
    for (i, v) in nz {
        let _ = writeln!(out, "{i} {v}");
    }
}

pub fn save_model(m: &MulticlassModel, path: &Path) -> Result<(), SvmError> {
    let io_err = |source| SvmError::Io { path: path.to_path_buf(), source };
    let mut f = std::fs::File::create(path).map_err(io_err)?;
    f.write_all(write_model(m).as_bytes()).map_err(io_err)?;
    f.flush().map_err(io_err)
}

pub fn load_model(path: &Path) -> Result<MulticlassModel, SvmError> {
    let io_err = |source| SvmError::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::open(path).map_err(io_err)?;
    let lines = std::io::BufReader::new(file).lines().collect::<Result<Vec<_>, _>>().map_err(io_err)?;
    read_model(&lines)
}

struct Lines<'a> {
    lines: &'a [String],
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str), SvmError> {
        let line = self.lines.get(self.pos).ok_or(SvmError::Format {
            line: self.pos + 1,
            reason: "unexpected end of file".into(),
        })?;
        self.pos += 1;
        Ok((self.pos, line.trim()))
    }

    fn keyed<T: FromStr>(&mut self, key: &str) -> Result<T, SvmError> {
        let (n, line) = self.next()?;
        let value = line
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| SvmError::Format { line: n, reason: format!("expected `{key} <value>`") })?;
        value
            .trim()
            .parse()
            .map_err(|_| SvmError::Format { line: n, reason: format!("invalid {key} value {value:?}") })
    }

    fn sparse(&mut self, key: &str, len: usize) -> Result<Vec<f64>, SvmError> {
        let count: usize = self.keyed(key)?;
        let mut values = vec![0.0; len];
        for _ in 0..count {
            let (n, line) = self.next()?;
            let bad = || SvmError::Format { line: n, reason: format!("expected `<index> <value>` in {key}") };
            let (i, v) = line.split_once(' ').ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            if i >= len || !v.is_finite() {
                return Err(bad());
            }
            values[i] = v;
        }
        Ok(values)
    }
}

/// Parses a model from the lines of a model file.
pub fn read_model(lines: &[String]) -> Result<MulticlassModel, SvmError> {
    let mut r = Lines { lines, pos: 0 };
    let (n, header) = r.next()?;
    let version = header
        .strip_prefix(MAGIC)
        .map(str::trim)
        .ok_or_else(|| SvmError::Format { line: n, reason: format!("missing `{MAGIC}` header") })?;
    if version != MODEL_FORMAT_VERSION.to_string() {
        return Err(SvmError::FormatVersionMismatch { found: version.to_string(), expected: MODEL_FORMAT_VERSION });
    }
    let n_terms: usize = r.keyed("lexicon")?;
    let start = r.pos;
    let end = start + 2 + n_terms;
    if end > lines.len() {
        return Err(SvmError::Format { line: lines.len() + 1, reason: "truncated lexicon section".into() });
    }
    let lexicon = FeatureLexicon::read_from(lines[start..end].iter().cloned(), start + 1)?;
    if lexicon.len() != n_terms {
        return Err(SvmError::Format { line: start + 1, reason: "lexicon term count mismatch".into() });
    }
    r.pos = end;

    let scheme: String = r.keyed("scheme")?;
    let scheme = WeightingScheme::from_str(&scheme).map_err(|reason| SvmError::Format { line: r.pos, reason })?;
    let clamp_idf: bool = r.keyed("clamp_idf")?;
    let text: String = r.keyed("text")?;
    let text = TextSource::from_str(&text).map_err(|reason| SvmError::Format { line: r.pos, reason })?;
    let width = lexicon.len();
    let vectorizer = Vectorizer::with_options(lexicon, scheme, clamp_idf, text);

    let mut pairwise = Vec::with_capacity(3);
    for (pos, neg) in PAIRS {
        let (n, line) = r.next()?;
        let expected = format!("pair {pos} {neg}");
        if line != expected {
            return Err(SvmError::Format { line: n, reason: format!("expected `{expected}`") });
        }
        let b: f64 = r.keyed("b")?;
        let c: f64 = r.keyed("C")?;
        let tol: f64 = r.keyed("tol")?;
        let max_passes: usize = r.keyed("max_passes")?;
        let max_iters: String = r.keyed("max_iters")?;
        let max_iters = match max_iters.as_str() {
            "auto" => None,
            s => Some(s.parse().map_err(|_| SvmError::Format { line: r.pos, reason: "invalid max_iters".into() })?),
        };
        let params = SvmParams { c, tol, max_passes, max_iters };
        params.validate()?;
        let training_size: usize = r.keyed("training_size")?;
        let iterations: usize = r.keyed("iterations")?;
        let converged: bool = r.keyed("converged")?;
        let kkt_gap: f64 = r.keyed("kkt_gap")?;
        let w = r.sparse("w", width)?;
        let alphas = r.sparse("alpha", training_size)?;
        if !b.is_finite() {
            return Err(SvmError::Format { line: r.pos, reason: "non-finite bias".into() });
        }
        pairwise.push(BinarySvmModel {
            w,
            b,
            alphas,
            pos_label: pos,
            neg_label: neg,
            params,
            training_size,
            stats: TrainStats { iterations, converged, kkt_gap },
        });
    }
    let (n, line) = r.next()?;
    if line != "end" {
        return Err(SvmError::Format { line: n, reason: "expected `end`".into() });
    }
    let pairwise: [BinarySvmModel; 3] = pairwise.try_into().expect("three pairs");
    Ok(MulticlassModel { pairwise, vectorizer })
}
