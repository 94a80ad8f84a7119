//! Hand-worked TF-IDF micro-corpora. Expected weights are written directly
//! from the definitions: tf = count / max count over lexicon terms in the
//! document, idf = ln(D / (df + 1)), weight = tf * idf.

#![allow(dead_code)]

pub struct TfIdfCase {
    pub name: &'static str,
    pub train: &'static [&'static str],
    pub min_doc_freq: u64,
    pub seeds: &'static [&'static str],
    pub terms: &'static [&'static str],
    /// Documents to vectorize, with expected weights in `terms` order.
    pub expected: Vec<(&'static str, Vec<f64>)>,
}

fn ln(x: f64) -> f64 {
    x.ln()
}

pub fn cases() -> Vec<TfIdfCase> {
    vec![
        TfIdfCase {
            name: "two-terms-tied-df",
            train: &["good good bad", "good", "bad bad", "meh"],
            min_doc_freq: 1,
            seeds: &[],
            // df: bad 2, good 2, meh 1; D = 4.
            terms: &["bad", "good", "meh"],
            expected: vec![
                ("good good bad", vec![0.5 * ln(4.0 / 3.0), ln(4.0 / 3.0), 0.0]),
                ("good", vec![0.0, ln(4.0 / 3.0), 0.0]),
                ("bad bad", vec![ln(4.0 / 3.0), 0.0, 0.0]),
                ("meh", vec![0.0, 0.0, ln(2.0)]),
            ],
        },
        TfIdfCase {
            name: "negative-idf",
            train: &["nice fit", "nice color", "nice"],
            min_doc_freq: 1,
            seeds: &[],
            // df: nice 3 (df + 1 > D), color 1, fit 1; D = 3.
            terms: &["nice", "color", "fit"],
            expected: vec![
                ("nice fit", vec![ln(0.75), 0.0, ln(1.5)]),
                ("nice color", vec![ln(0.75), ln(1.5), 0.0]),
                ("nice", vec![ln(0.75), 0.0, 0.0]),
            ],
        },
        TfIdfCase {
            name: "single-document",
            train: &["love love love hate"],
            min_doc_freq: 1,
            seeds: &[],
            terms: &["hate", "love"],
            expected: vec![("love love love hate", vec![ln(0.5) / 3.0, ln(0.5)])],
        },
        TfIdfCase {
            name: "case-and-apostrophes",
            train: &["Don't RETURN it", "return it now", "it is OK"],
            min_doc_freq: 1,
            seeds: &[],
            // df: it 3, return 2, don't/is/now/ok 1; D = 3.
            terms: &["it", "return", "don't", "is", "now", "ok"],
            expected: vec![
                ("Don't RETURN it", vec![ln(0.75), 0.0, ln(1.5), 0.0, 0.0, 0.0]),
                ("return it now", vec![ln(0.75), 0.0, 0.0, 0.0, ln(1.5), 0.0]),
                ("it is OK", vec![ln(0.75), 0.0, 0.0, ln(1.5), 0.0, ln(1.5)]),
            ],
        },
        TfIdfCase {
            name: "seeded-unseen-test-doc",
            train: &["great great shoes", "poor shoes", "okay"],
            min_doc_freq: 2,
            seeds: &["great", "poor", "okay", "hate"],
            // df: shoes 2, great 1, okay 1, poor 1, hate 0; D = 3.
            terms: &["shoes", "great", "okay", "poor", "hate"],
            expected: vec![
                ("great great shoes", vec![0.0, ln(1.5), 0.0, 0.0, 0.0]),
                (
                    "hate hate poor great shoes shoes shoes",
                    vec![0.0, ln(1.5) / 3.0, 0.0, ln(1.5) / 3.0, 2.0 * ln(3.0) / 3.0],
                ),
                ("nothing relevant", vec![0.0; 5]),
            ],
        },
    ]
}
