//! Review → weight vector conversion.
//!
//! Every instance has one weight per lexicon term, in lexicon order. Two
//! weighting schemes are supported:
//!
//! * binary presence: 1 if the term occurs in the document, else 0;
//! * TF-IDF: `tf(t, d) * idf(t)` where `tf(t, d) = f(t, d) / max_w f(w, d)`
//!   with the max taken over lexicon terms present in `d`, and
//!   `idf(t) = ln(D / (df(t) + 1))` using the training statistics frozen in
//!   the lexicon. IDF is negative when `df(t) + 1 > D`; the `clamp_idf`
//!   option replaces negative values with zero.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{Corpus, Polarity, ReviewRecord};
use crate::features::FeatureLexicon;
use crate::tokenize::tokenize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VectorizeError {
    #[error("term {0:?} is not in the lexicon")]
    UnknownTerm(String),
    #[error("record {0} has no human label")]
    UnlabeledRecord(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WeightingScheme {
    BinaryPresence,
    #[default]
    TfIdf,
}

impl WeightingScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightingScheme::BinaryPresence => "binary",
            WeightingScheme::TfIdf => "tfidf",
        }
    }
}

impl fmt::Display for WeightingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary" => Ok(WeightingScheme::BinaryPresence),
            "tfidf" => Ok(WeightingScheme::TfIdf),
            other => Err(format!("unknown weighting scheme {other:?} (expected tfidf or binary)")),
        }
    }
}

/// Which record fields feed tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TextSource {
    #[default]
    TitleAndBody,
    BodyOnly,
}

impl TextSource {
    pub fn select(self, r: &ReviewRecord) -> Cow<'_, str> {
        match self {
            TextSource::TitleAndBody => Cow::Owned(r.full_text()),
            TextSource::BodyOnly => Cow::Borrowed(&r.body),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TextSource::TitleAndBody => "title+body",
            TextSource::BodyOnly => "body",
        }
    }
}

impl FromStr for TextSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "title+body" => Ok(TextSource::TitleAndBody),
            "body" => Ok(TextSource::BodyOnly),
            other => Err(format!("unknown text source {other:?}")),
        }
    }
}

/// A weight vector aligned to a lexicon, with an optional class label.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub weights: Vec<f64>,
    pub label: Option<Polarity>,
}

impl Instance {
    pub fn unlabeled(weights: Vec<f64>) -> Self {
        Instance { weights, label: None }
    }

    pub fn labeled(weights: Vec<f64>, label: Polarity) -> Self {
        Instance { weights, label: Some(label) }
    }

    pub fn width(&self) -> usize {
        self.weights.len()
    }
}

/// Instances sharing one lexicon alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSet {
    pub lexicon_version: u32,
    pub width: usize,
    pub instances: Vec<Instance>,
}

impl InstanceSet {
    pub fn new(width: usize, instances: Vec<Instance>) -> Self {
        assert!(instances.iter().all(|x| x.width() == width), "instance width mismatch");
        InstanceSet { lexicon_version: crate::features::LEXICON_SCHEMA_VERSION, width, instances }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// Occurrence counts of lexicon terms in a document, indexed by lexicon position.
fn lexicon_counts(tokens: &[String], lex: &FeatureLexicon) -> Vec<u32> {
    let mut counts = vec![0u32; lex.len()];
    for t in tokens {
        if let Some(i) = lex.position(t) {
            counts[i] += 1;
        }
    }
    counts
}

/// `f(term, d) / max f(w, d)` over lexicon terms `w` present in `d`; 0 when
/// no lexicon term occurs.
pub fn term_frequency(term: &str, doc_tokens: &[String], lex: &FeatureLexicon) -> Result<f64, VectorizeError> {
    let i = lex.position(term).ok_or_else(|| VectorizeError::UnknownTerm(term.to_string()))?;
    let counts = lexicon_counts(doc_tokens, lex);
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok(if max == 0 { 0.0 } else { f64::from(counts[i]) / f64::from(max) })
}

/// `ln(D / (df + 1))` from the lexicon's training statistics.
pub fn inverse_doc_frequency(term: &str, lex: &FeatureLexicon) -> Result<f64, VectorizeError> {
    let df = lex.doc_freq(term).ok_or_else(|| VectorizeError::UnknownTerm(term.to_string()))?;
    Ok(idf_value(lex.train_doc_count(), df))
}

fn idf_value(docs: u64, df: u64) -> f64 {
    (docs as f64 / (df as f64 + 1.0)).ln()
}

/// Turns text into instances for one lexicon and weighting configuration.
///
/// IDF values are computed once at construction from the lexicon and never
/// change afterwards.
#[derive(Debug, Clone)]
pub struct Vectorizer {
    lexicon: FeatureLexicon,
    scheme: WeightingScheme,
    clamp_idf: bool,
    text: TextSource,
    idf: Vec<f64>,
}

impl PartialEq for Vectorizer {
    fn eq(&self, other: &Self) -> bool {
        self.lexicon == other.lexicon
            && self.scheme == other.scheme
            && self.clamp_idf == other.clamp_idf
            && self.text == other.text
    }
}

impl Vectorizer {
    pub fn new(lexicon: FeatureLexicon, scheme: WeightingScheme) -> Self {
        Self::with_options(lexicon, scheme, false, TextSource::TitleAndBody)
    }

    pub fn with_options(lexicon: FeatureLexicon, scheme: WeightingScheme, clamp_idf: bool, text: TextSource) -> Self {
        let docs = lexicon.train_doc_count();
        let idf = lexicon
            .doc_freqs()
            .iter()
            .map(|&df| {
                let v = idf_value(docs, df);
                if clamp_idf && v < 0.0 {
                    0.0
                } else {
                    v
                }
            })
            .collect();
        Vectorizer { lexicon, scheme, clamp_idf, text, idf }
    }

    pub fn lexicon(&self) -> &FeatureLexicon {
        &self.lexicon
    }

    pub fn scheme(&self) -> WeightingScheme {
        self.scheme
    }

    pub fn clamp_idf(&self) -> bool {
        self.clamp_idf
    }

    pub fn text_source(&self) -> TextSource {
        self.text
    }

    pub fn width(&self) -> usize {
        self.lexicon.len()
    }

    /// Per-term IDF values in lexicon order (after clamping, if enabled).
    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn vectorize_tokens(&self, tokens: &[String]) -> Instance {
        let counts = lexicon_counts(tokens, &self.lexicon);
        let weights = match self.scheme {
            WeightingScheme::BinaryPresence => counts.iter().map(|&c| if c > 0 { 1.0 } else { 0.0 }).collect(),
            WeightingScheme::TfIdf => {
                let max = counts.iter().copied().max().unwrap_or(0);
                if max == 0 {
                    vec![0.0; counts.len()]
                } else {
                    let max = f64::from(max);
                    counts.iter().zip(&self.idf).map(|(&c, &idf)| f64::from(c) / max * idf).collect()
                }
            }
        };
        Instance::unlabeled(weights)
    }

    /// Vectorizes raw document text. Title and body should already be joined
    /// when both participate.
    pub fn vectorize_document(&self, text: &str) -> Instance {
        self.vectorize_tokens(&tokenize(text))
    }

    /// Vectorizes one free-text comment; equivalent to [`Self::vectorize_document`].
    pub fn vectorize_single(&self, text: &str) -> Instance {
        self.vectorize_document(text)
    }

    pub fn vectorize_record(&self, r: &ReviewRecord) -> Instance {
        self.vectorize_document(&self.text.select(r))
    }

    /// One instance per record, in corpus order. With `attach_labels`, every
    /// record must carry a human label.
    pub fn vectorize_corpus(&self, c: &Corpus, attach_labels: bool) -> Result<InstanceSet, VectorizeError> {
        let mut instances = Vec::with_capacity(c.len());
        for r in c.records() {
            let mut x = self.vectorize_record(r);
            if attach_labels {
                x.label = Some(r.human_label.ok_or(VectorizeError::UnlabeledRecord(r.id))?);
            }
            instances.push(x);
        }
        Ok(InstanceSet::new(self.width(), instances))
    }
}

/// Looks up the weight of `term` in an instance built with `vectorizer`.
pub fn weight_of(vectorizer: &Vectorizer, x: &Instance, term: &str) -> Option<f64> {
    vectorizer.lexicon.position(term).map(|i| x.weights[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{build_lexicon, default_seed_terms, LexiconParams};
    use proptest::prelude::*;

    fn lex(entries: &[(&str, u64)], docs: u64) -> FeatureLexicon {
        FeatureLexicon::from_parts(entries.iter().map(|(t, n)| (t.to_string(), *n)).collect(), docs).unwrap()
    }

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn term_frequency_examples() {
        let l = lex(&[("good", 1), ("bad", 1)], 4);
        let d = toks("good good bad");
        assert_eq!(term_frequency("good", &d, &l).unwrap(), 1.0);
        assert_eq!(term_frequency("bad", &d, &l).unwrap(), 0.5);
        assert_eq!(term_frequency("bad", &toks("good"), &l).unwrap(), 0.0);
        assert_eq!(term_frequency("good", &toks("the cat sat"), &l).unwrap(), 0.0);
        assert_eq!(term_frequency("meh", &d, &l), Err(VectorizeError::UnknownTerm("meh".into())));
    }

    #[test]
    fn idf_examples() {
        let l = lex(&[("a", 1)], 4);
        assert!((inverse_doc_frequency("a", &l).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(inverse_doc_frequency("a", &lex(&[("a", 2)], 3)).unwrap(), 0.0);
        let neg = inverse_doc_frequency("a", &lex(&[("a", 3)], 3)).unwrap();
        assert!((neg - (-0.287_682_072_451_780_9)).abs() < 1e-15);
        assert!(inverse_doc_frequency("b", &l).is_err());
    }

    #[test]
    fn document_examples() {
        let l = lex(&[("good", 1), ("bad", 3)], 4);
        let tfidf = Vectorizer::new(l.clone(), WeightingScheme::TfIdf);
        let x = tfidf.vectorize_document("good good bad");
        assert!((x.weights[0] - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(x.weights[1], 0.0);
        assert_eq!(x.label, None);
        let bin = Vectorizer::new(l, WeightingScheme::BinaryPresence);
        assert_eq!(bin.vectorize_document("good good bad").weights, vec![1.0, 1.0]);
        assert_eq!(tfidf.vectorize_document("").weights, vec![0.0, 0.0]);
        assert_eq!(tfidf.vectorize_single("nothing here").weights, vec![0.0, 0.0]);
    }

    #[test]
    fn clamp_zeroes_negative_idf() {
        let l = lex(&[("a", 3), ("b", 0)], 3);
        let v = Vectorizer::with_options(l, WeightingScheme::TfIdf, true, TextSource::TitleAndBody);
        assert_eq!(v.idf()[0], 0.0);
        assert!((v.idf()[1] - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn single_comment_with_seed_lexicon() {
        let c = Corpus::new(vec![ReviewRecord {
            id: 1,
            category: "dresses".into(),
            title: String::new(),
            body: "great fit".into(),
            human_label: Some(Polarity::Positive),
            machine_label: None,
        }])
        .unwrap();
        let l = build_lexicon(&c, &LexiconParams { min_doc_freq: 5, seed_terms: default_seed_terms(), ..Default::default() })
            .unwrap();
        let v = Vectorizer::new(l, WeightingScheme::TfIdf);
        let x = v.vectorize_single("I love this dress");
        // D = 1, df(love) = 0: tf = 1, idf = ln(1/1) = 0.
        assert_eq!(weight_of(&v, &x, "love"), Some(0.0));
        let bin = Vectorizer::new(v.lexicon().clone(), WeightingScheme::BinaryPresence);
        let xb = bin.vectorize_single("I love this dress");
        for (t, w) in bin.lexicon().terms().iter().zip(&xb.weights) {
            assert_eq!(*w, if t == "love" { 1.0 } else { 0.0 }, "{t}");
        }
    }

    #[test]
    fn corpus_vectorization() {
        let recs: Vec<ReviewRecord> = (1..=5)
            .map(|i| ReviewRecord {
                id: i,
                category: "rings".into(),
                title: "title".into(),
                body: if i % 2 == 0 { "good".into() } else { "bad".into() },
                human_label: if i == 5 { None } else { Some(Polarity::Positive) },
                machine_label: None,
            })
            .collect();
        let c = Corpus::new(recs).unwrap();
        let v = Vectorizer::new(lex(&[("good", 2), ("bad", 2)], 4), WeightingScheme::BinaryPresence);
        let set = v.vectorize_corpus(&c, false).unwrap();
        assert_eq!(set.len(), 5);
        assert_eq!(set.instances[1].weights, vec![1.0, 0.0]);
        assert_eq!(v.vectorize_corpus(&c, true), Err(VectorizeError::UnlabeledRecord(5)));
        assert!(v.vectorize_corpus(&Corpus::new(vec![]).unwrap(), true).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn max_present_term_has_unit_tf(doc in proptest::collection::vec(0usize..6, 0..20)) {
            let names = ["a", "b", "c", "d", "x", "y"];
            let l = lex(&[("a", 1), ("b", 2), ("c", 0), ("d", 3)], 5);
            let tokens: Vec<String> = doc.iter().map(|&i| names[i].to_string()).collect();
            let tfs: Vec<f64> = l.terms().iter().map(|t| term_frequency(t, &tokens, &l).unwrap()).collect();
            let any = tokens.iter().any(|t| l.position(t).is_some());
            let max = tfs.iter().copied().fold(0.0, f64::max);
            prop_assert_eq!(max, if any { 1.0 } else { 0.0 });
            prop_assert!(tfs.iter().all(|&t| (0.0..=1.0).contains(&t)));
        }

        #[test]
        fn permuting_lexicon_permutes_weights(doc in "[abcdxy ]{0,30}", rot in 0usize..4) {
            let base = [("a", 1u64), ("b", 2), ("c", 0), ("d", 4)];
            let mut perm = base.to_vec();
            perm.rotate_left(rot);
            let v1 = Vectorizer::new(lex(&base, 5), WeightingScheme::TfIdf);
            let v2 = Vectorizer::new(lex(&perm, 5), WeightingScheme::TfIdf);
            let (x1, x2) = (v1.vectorize_document(&doc), v2.vectorize_document(&doc));
            for (i, (t, _)) in base.iter().enumerate() {
                prop_assert_eq!(x1.weights[i], weight_of(&v2, &x2, t).unwrap());
            }
        }

        #[test]
        fn vectorizing_never_changes_idf(doc in "[abcd ]{0,30}") {
            let v = Vectorizer::new(lex(&[("a", 1), ("b", 2)], 3), WeightingScheme::TfIdf);
            let before = v.idf().to_vec();
            let _ = v.vectorize_document(&doc);
            prop_assert_eq!(v.idf(), before.as_slice());
        }
    }
}
