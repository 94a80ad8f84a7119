use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opinion_cli::commands::{self, EvaluateConfig, FeaturesConfig, TrainConfig};
use opinion_cli::{serve, CliError};
use opinion_core::{load_corpus, split_corpus, SvmParams, WeightingScheme};

/// Three-class sentiment classifier for product reviews.
#[derive(Parser)]
#[command(name = "opinion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Feature lexicon operations.
    Features {
        #[command(subcommand)]
        action: FeaturesAction,
    },
    /// Train the pairwise SVM model.
    Train(TrainArgs),
    /// Classify a labeled test set and print the evaluation report.
    Evaluate(EvaluateArgs),
    /// Classify text given as arguments, or one review per stdin line.
    Classify(ClassifyArgs),
    /// Serve classification over HTTP.
    Serve(ServeArgs),
    /// Randomly split a labeled corpus into train and test files.
    Split(SplitArgs),
}

#[derive(Subcommand)]
enum FeaturesAction {
    /// Build the feature lexicon from a training corpus.
    Build(FeaturesArgs),
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, default_value_t = 2)]
    min_doc_freq: u64,
    #[arg(long)]
    top_k: Option<usize>,
    /// Seed term file; defaults to the bundled list.
    #[arg(long, conflicts_with = "no_seeds")]
    seed_terms: Option<PathBuf>,
    #[arg(long)]
    no_seeds: bool,
    /// Ignore review titles.
    #[arg(long)]
    body_only: bool,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = WeightingScheme::TfIdf)]
    scheme: WeightingScheme,
    /// Soft-margin penalty.
    #[arg(short = 'C', default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 10)]
    max_passes: usize,
    /// Cap on SMO pair updates (default scales with the training size).
    #[arg(long)]
    max_iters: Option<usize>,
    /// Zero out negative inverse document frequencies.
    #[arg(long)]
    clamp_idf: bool,
    #[arg(long)]
    body_only: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, required_unless_present = "confusion")]
    model: Option<PathBuf>,
    #[arg(long, required_unless_present = "confusion")]
    test: Option<PathBuf>,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the test CSV with machine labels filled in.
    #[arg(long)]
    output_csv: Option<PathBuf>,
    /// Render a stored 3x3 confusion matrix instead of classifying.
    #[arg(long, conflicts_with_all = ["model", "test", "output_csv"])]
    confusion: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    text: Vec<String>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    train_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Features { action: FeaturesAction::Build(a) } => {
            let cfg = FeaturesConfig {
                train: a.train,
                lexicon: a.lexicon,
                min_doc_freq: a.min_doc_freq,
                top_k: a.top_k,
                seed_terms: a.seed_terms,
                no_seeds: a.no_seeds,
                body_only: a.body_only,
            };
            commands::build_features(&cfg, &mut out)?;
        }
        Command::Train(a) => {
            let cfg = TrainConfig {
                train: a.train,
                lexicon: a.lexicon,
                model: a.model,
                scheme: a.scheme,
                clamp_idf: a.clamp_idf,
                body_only: a.body_only,
                params: SvmParams { c: a.c, tol: a.tol, max_passes: a.max_passes, max_iters: a.max_iters },
            };
            commands::train(&cfg, &mut out, &mut io::stderr())?;
        }
        Command::Evaluate(a) => match a.confusion {
            Some(matrix) => {
                commands::render_matrix(&matrix, a.json, a.report.as_deref(), &mut out)?;
            }
            None => {
                let cfg = EvaluateConfig {
                    model: a.model.expect("required by clap"),
                    test: a.test.expect("required by clap"),
                    report: a.report,
                    output_csv: a.output_csv,
                    json: a.json,
                };
                commands::evaluate(&cfg, &mut out)?;
            }
        },
        Command::Classify(a) => {
            let model = commands::load_model_checked(&a.model)?;
            if a.text.is_empty() {
                commands::classify_lines(&model, io::stdin().lock(), &mut out)?;
            } else {
                // Arguments form a single review.
                let text = a.text.join(" ");
                writeln!(out, "{}", commands::format_prediction(&model.classify_text(&text)))?;
            }
        }
        Command::Serve(a) => {
            let model = commands::load_model_checked(&a.model)?;
            drop(out);
            serve::serve(model, a.port)?;
            return Ok(());
        }
        Command::Split(a) => {
            let corpus = load_corpus(&a.input, false)?;
            let (train, test) = split_corpus(&corpus, a.train_count, a.seed)?;
            train.save(&a.train)?;
            test.save(&a.test)?;
            writeln!(out, "train: {} -> {}", train.len(), a.train.display())?;
            writeln!(out, "test: {} -> {}", test.len(), a.test.display())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    // Usage errors are validation failures (exit 3); exit 2 is reserved for missing inputs.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
