//! Three-class sentiment classification for product reviews.
//!
//! The pipeline runs in four stages, each in its own module:
//!
//! 1. [`corpus`] loads labeled review CSVs and splits them into train/test sets.
//! 2. [`features`] builds a sentiment lexicon (terms plus frozen training
//!    document frequencies) from the training set.
//! 3. [`vectorize`] turns reviews into fixed-width weight vectors aligned to the
//!    lexicon, under binary presence or TF-IDF weighting.
//! 4. [`svm`] trains one soft-margin linear SVM per class pair with SMO and
//!    combines them by majority vote; [`eval`] scores predictions against human
//!    labels with a confusion matrix.

pub mod corpus;
pub mod eval;
pub mod features;
pub mod svm;
pub mod tokenize;
pub mod vectorize;

pub use corpus::{load_corpus, split_corpus, Corpus, CorpusError, Polarity, ReviewRecord};
pub use eval::{build_confusion, ConfusionMatrix, EvalReport, Ratio};
pub use features::{build_lexicon, load_lexicon, save_lexicon, FeatureLexicon, LexiconError, LexiconParams};
pub use svm::{
    load_model, save_model, train_binary, train_multiclass, BinarySvmModel, MulticlassModel,
    Prediction, SvmError, SvmParams,
};
pub use tokenize::{tokenize, TokenSequence};
pub use vectorize::{
    Instance, InstanceSet, TextSource, VectorizeError, Vectorizer, WeightingScheme,
};
