//! Word tokenization for frequency counting.

/// Lowercase word tokens in document order.
pub type TokenSequence = Vec<String>;

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Splits text into maximal runs of letters, digits and apostrophes,
/// lowercased, with apostrophes trimmed from both ends of each run.
/// Runs that are only apostrophes are dropped.
pub fn tokenize(text: &str) -> TokenSequence {
    text.split(|c: char| !is_word_char(c))
        .map(|run| run.trim_matches('\''))
        .filter(|run| !run.is_empty())
        .map(str::to_lowercase)
        .collect()
}
