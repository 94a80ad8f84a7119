use std::io;
use std::path::PathBuf;

use opinion_core::features::LexiconError;
use opinion_core::{CorpusError, SvmError, VectorizeError};

/// Command failure, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: an input path does not exist.
    NotFound(PathBuf),
    /// Exit 3: the inputs are present but invalid for the requested operation.
    Domain(String),
    /// Exit 1: anything else.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::NotFound(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::NotFound(p) => write!(f, "input not found: {}", p.display()),
            CliError::Domain(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

fn from_io(path: PathBuf, e: &io::Error, context: &str) -> CliError {
    if e.kind() == io::ErrorKind::NotFound {
        CliError::NotFound(path)
    } else {
        CliError::Internal(format!("{context} {}: {e}", path.display()))
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { path, source } => from_io(path, &source, "cannot read"),
            CorpusError::Csv(e) => CliError::Domain(format!("corpus: {e}")),
            other => CliError::Domain(format!("corpus: {other}")),
        }
    }
}

impl From<LexiconError> for CliError {
    fn from(e: LexiconError) -> Self {
        match e {
            LexiconError::Io { path, source } => from_io(path, &source, "cannot access"),
            LexiconError::EmptyLexicon => CliError::Domain("empty lexicon: no term survives the selection".into()),
            other => CliError::Domain(format!("lexicon: {other}")),
        }
    }
}

impl From<SvmError> for CliError {
    fn from(e: SvmError) -> Self {
        match e {
            SvmError::Io { path, source } => from_io(path, &source, "cannot access"),
            SvmError::Lexicon(e) => e.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<VectorizeError> for CliError {
    fn from(e: VectorizeError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
