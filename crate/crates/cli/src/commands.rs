//! Pipeline stages: build features, train, evaluate, classify.
//!
//! Each command writes its human-readable output to the supplied writer so
//! the binary and the tests drive exactly the same code.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use opinion_core::eval::ConfusionMatrix;
use opinion_core::features::{build_lexicon, default_seed_terms, load_lexicon, parse_seed_terms, save_lexicon};
use opinion_core::{
    build_confusion, load_corpus, load_model, save_model, train_multiclass, CorpusError, EvalReport,
    FeatureLexicon, LexiconParams, MulticlassModel, Prediction, SvmParams, TextSource, Vectorizer,
    WeightingScheme,
};

use crate::error::CliError;

fn require_exists(path: &Path) -> Result<(), CliError> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::NotFound(path.to_path_buf()))
    }
}

fn text_source(body_only: bool) -> TextSource {
    if body_only {
        TextSource::BodyOnly
    } else {
        TextSource::TitleAndBody
    }
}

#[derive(Debug, Clone)]
pub struct FeaturesConfig {
    pub train: PathBuf,
    pub lexicon: PathBuf,
    pub min_doc_freq: u64,
    pub top_k: Option<usize>,
    /// `None` uses the bundled seed list.
    pub seed_terms: Option<PathBuf>,
    pub no_seeds: bool,
    pub body_only: bool,
}

pub fn build_features(cfg: &FeaturesConfig, out: &mut dyn Write) -> Result<FeatureLexicon, CliError> {
    require_exists(&cfg.train)?;
    let seeds = match (&cfg.seed_terms, cfg.no_seeds) {
        (_, true) => Vec::new(),
        (Some(path), false) => {
            require_exists(path)?;
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
            parse_seed_terms(&text)?
        }
        (None, false) => default_seed_terms(),
    };
    let train = load_corpus(&cfg.train, true)?;
    let params = LexiconParams {
        min_doc_freq: cfg.min_doc_freq,
        top_k: cfg.top_k,
        seed_terms: seeds,
        text: text_source(cfg.body_only),
    };
    let lex = build_lexicon(&train, &params)?;
    save_lexicon(&lex, &cfg.lexicon)?;
    writeln!(out, "lexicon: {} terms from {} training reviews -> {}", lex.len(), lex.train_doc_count(), cfg.lexicon.display())?;
    let top: Vec<String> =
        lex.terms().iter().zip(lex.doc_freqs()).take(10).map(|(t, df)| format!("{t}({df})")).collect();
    writeln!(out, "top terms: {}", top.join(" "))?;
    Ok(lex)
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub train: PathBuf,
    pub lexicon: PathBuf,
    pub model: PathBuf,
    pub scheme: WeightingScheme,
    pub clamp_idf: bool,
    pub body_only: bool,
    pub params: SvmParams,
}

pub fn train(cfg: &TrainConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<MulticlassModel, CliError> {
    cfg.params.validate()?;
    require_exists(&cfg.train)?;
    require_exists(&cfg.lexicon)?;
    let lex = load_lexicon(&cfg.lexicon)?;
    let corpus = load_corpus(&cfg.train, true)?;
    let vectorizer = Vectorizer::with_options(lex, cfg.scheme, cfg.clamp_idf, text_source(cfg.body_only));
    let data = vectorizer.vectorize_corpus(&corpus, true)?;
    let model = train_multiclass(&data, vectorizer, &cfg.params)?;
    for m in &model.pairwise {
        writeln!(
            out,
            "{}/{}: n={} support_vectors={} margin={:.6} iterations={} kkt_gap={:.2e}",
            m.pos_label,
            m.neg_label,
            m.training_size,
            m.support_vector_count(),
            m.margin(),
            m.stats.iterations,
            m.stats.kkt_gap
        )?;
        if let Err(e) = m.ensure_converged() {
            writeln!(err, "warning: {e}")?;
        }
    }
    save_model(&model, &cfg.model)?;
    writeln!(out, "model ({} scheme, {} features) -> {}", model.vectorizer.scheme(), model.width(), cfg.model.display())?;
    Ok(model)
}

#[derive(Debug, Clone)]
pub struct EvaluateConfig {
    pub model: PathBuf,
    pub test: PathBuf,
    pub report: Option<PathBuf>,
    /// Annotated copy of the test CSV with machine labels filled in.
    pub output_csv: Option<PathBuf>,
    pub json: bool,
}

pub fn render(report: &EvalReport, json: bool) -> String {
    if json {
        let mut s = report.to_json();
        s.push('\n');
        s
    } else {
        report.render_text()
    }
}

pub fn evaluate(cfg: &EvaluateConfig, out: &mut dyn Write) -> Result<EvalReport, CliError> {
    require_exists(&cfg.model)?;
    require_exists(&cfg.test)?;
    let model = load_model(&cfg.model)?;
    let test = load_corpus(&cfg.test, true).map_err(|e| match e {
        CorpusError::MissingLabel(row) => {
            CliError::Domain(format!("labels required for evaluation (row {row} has no human label)"))
        }
        other => other.into(),
    })?;
    let mut predicted = Vec::with_capacity(test.len());
    for r in test.records() {
        let x = model.vectorizer.vectorize_record(r);
        predicted.push(model.predict(&x)?.label);
    }
    let cm = build_confusion(
        predicted.iter().zip(test.records()).map(|(&m, r)| (m, r.human_label.expect("labels required"))),
    );
    if let Some(path) = &cfg.output_csv {
        test.with_machine_labels(&predicted).save(path)?;
    }
    let report = cm.report();
    emit_report(&report, cfg.json, cfg.report.as_deref(), out)?;
    Ok(report)
}

/// Renders a stored confusion matrix (three rows of machine counts).
pub fn render_matrix(matrix: &Path, json: bool, report_path: Option<&Path>, out: &mut dyn Write) -> Result<EvalReport, CliError> {
    require_exists(matrix)?;
    let text = std::fs::read_to_string(matrix)?;
    let cm = ConfusionMatrix::parse(&text).map_err(CliError::Domain)?;
    let report = cm.report();
    emit_report(&report, json, report_path, out)?;
    Ok(report)
}

fn emit_report(report: &EvalReport, json: bool, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let text = render(report, json);
    out.write_all(text.as_bytes())?;
    if let Some(path) = path {
        std::fs::write(path, &text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// `<label>\t<pair>=<score> ...` with scores in shortest round-trip form.
pub fn format_prediction(p: &Prediction) -> String {
    let scores: Vec<String> = p.named_scores().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{}\t{}", p.label, scores.join(" "))
}

pub fn classify_lines<R: BufRead>(model: &MulticlassModel, input: R, out: &mut dyn Write) -> Result<usize, CliError> {
    let mut n = 0;
    for line in input.lines() {
        let line = line?;
        writeln!(out, "{}", format_prediction(&model.classify_text(&line)))?;
        n += 1;
    }
    Ok(n)
}

pub fn load_model_checked(path: &Path) -> Result<MulticlassModel, CliError> {
    require_exists(path)?;
    Ok(load_model(path)?)
}
