#![allow(dead_code)]

use std::path::{Path, PathBuf};

use opinion_cli::commands::{self, FeaturesConfig, TrainConfig};
use opinion_core::{MulticlassModel, SvmParams, WeightingScheme};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn synthetic(name: &str) -> PathBuf {
    data_dir().join("synthetic").join(name)
}

pub struct Artifacts {
    pub lexicon: PathBuf,
    pub model: PathBuf,
    pub trained: MulticlassModel,
}

/// Builds the lexicon and model from the bundled training set with default settings.
pub fn build_pipeline(dir: &Path) -> Artifacts {
    let lexicon = dir.join("lexicon.txt");
    let model = dir.join("model.txt");
    let features = FeaturesConfig {
        train: synthetic("train.csv"),
        lexicon: lexicon.clone(),
        min_doc_freq: 2,
        top_k: None,
        seed_terms: None,
        no_seeds: false,
        body_only: false,
    };
    commands::build_features(&features, &mut Vec::new()).unwrap();
    let train = TrainConfig {
        train: synthetic("train.csv"),
        lexicon: lexicon.clone(),
        model: model.clone(),
        scheme: WeightingScheme::TfIdf,
        clamp_idf: false,
        body_only: false,
        params: SvmParams::default(),
    };
    let trained = commands::train(&train, &mut Vec::new(), &mut Vec::new()).unwrap();
    Artifacts { lexicon, model, trained }
}
