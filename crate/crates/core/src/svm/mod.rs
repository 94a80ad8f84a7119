//! Linear soft-margin SVMs trained with SMO, and the one-vs-one three-class
//! voter built from them.

mod io;
mod multiclass;
mod smo;

use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::Polarity;
use crate::features::LexiconError;
use crate::vectorize::{Instance, InstanceSet};

pub use io::{load_model, read_model, save_model, write_model, MODEL_FORMAT_VERSION};
pub use multiclass::{pair_subset, train_multiclass, vote, MulticlassModel, Prediction, PAIRS};

#[derive(Debug, Error)]
pub enum SvmError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("training data contains only one class")]
    SingleClassData,
    #[error("instance {index} has label {found:?}, expected {pos} or {neg}")]
    UnexpectedLabel { index: usize, found: Option<Polarity>, pos: Polarity, neg: Polarity },
    #[error("missing class {0}")]
    MissingClass(Polarity),
    #[error("dimension mismatch: model expects {expected}, instance has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{pos}/{neg} solver stopped after {iterations} updates with KKT gap {gap:.3e}")]
    DidNotConverge { pos: Polarity, neg: Polarity, iterations: usize, gap: f64 },
    #[error("unsupported model format version {found:?} (expected {expected})")]
    FormatVersionMismatch { found: String, expected: u32 },
    #[error("model file line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("embedded lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    /// Soft-margin penalty.
    pub c: f64,
    /// KKT tolerance; also the stopping threshold on the maximal violation.
    pub tol: f64,
    /// Consecutive sweeps without any update before the solver gives up.
    pub max_passes: usize,
    /// Cap on pair updates; `None` means `10_000 * n` for `n` training points.
    pub max_iters: Option<usize>,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams { c: 1.0, tol: 1e-3, max_passes: 10, max_iters: None }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<(), SvmError> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(SvmError::InvalidParams(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(SvmError::InvalidParams(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_passes == 0 {
            return Err(SvmError::InvalidParams("max_passes must be at least 1".into()));
        }
        if self.max_iters == Some(0) {
            return Err(SvmError::InvalidParams("max_iters must be at least 1".into()));
        }
        Ok(())
    }

    pub fn max_iters_for(&self, n: usize) -> usize {
        self.max_iters.unwrap_or_else(|| 10 * n.max(1) * 1000)
    }
}

/// Solver outcome recorded alongside a trained model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainStats {
    pub iterations: usize,
    pub converged: bool,
    /// Largest remaining KKT violation (`max_up - min_low`) at exit.
    pub kkt_gap: f64,
}

/// A trained hyperplane `w·x + b = 0`; `pos_label` lies on the positive side.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySvmModel {
    pub w: Vec<f64>,
    pub b: f64,
    /// Dual variable per training point, in training order.
    pub alphas: Vec<f64>,
    pub pos_label: Polarity,
    pub neg_label: Polarity,
    pub params: SvmParams,
    pub training_size: usize,
    pub stats: TrainStats,
}

impl BinarySvmModel {
    pub fn width(&self) -> usize {
        self.w.len()
    }

    /// `w·x + b`.
    pub fn decision_value(&self, x: &Instance) -> Result<f64, SvmError> {
        self.decision_value_raw(&x.weights)
    }

    pub fn decision_value_raw(&self, x: &[f64]) -> Result<f64, SvmError> {
        if x.len() != self.w.len() {
            return Err(SvmError::DimensionMismatch { expected: self.w.len(), found: x.len() });
        }
        Ok(self.w.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.b)
    }

    pub fn predict_label(&self, x: &Instance) -> Result<Polarity, SvmError> {
        Ok(if self.decision_value(x)? >= 0.0 { self.pos_label } else { self.neg_label })
    }

    pub fn norm_w(&self) -> f64 {
        self.w.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Geometric width between the planes `w·x + b = ±1`, i.e. `2/‖w‖`.
    pub fn margin(&self) -> f64 {
        2.0 / self.norm_w()
    }

    pub fn support_vector_count(&self) -> usize {
        self.alphas.iter().filter(|&&a| a > 0.0).count()
    }

    /// Dual objective `Σα − ½‖w‖²` at the returned solution.
    pub fn dual_objective(&self) -> f64 {
        let w2: f64 = self.w.iter().map(|v| v * v).sum();
        self.alphas.iter().sum::<f64>() - 0.5 * w2
    }

    pub fn ensure_converged(&self) -> Result<(), SvmError> {
        if self.stats.converged {
            Ok(())
        } else {
            Err(SvmError::DidNotConverge {
                pos: self.pos_label,
                neg: self.neg_label,
                iterations: self.stats.iterations,
                gap: self.stats.kkt_gap,
            })
        }
    }

    /// Checks the KKT conditions, box and equality constraints, and the
    /// reconstruction `w = Σ αᵢ yᵢ xᵢ` against the training data the model
    /// was fit on.
    pub fn check_kkt(&self, data: &InstanceSet) -> KktReport {
        let c = self.params.c;
        let mut report = KktReport::default();
        let mut recon = vec![0.0; self.w.len()];
        for (x, &a) in data.instances.iter().zip(&self.alphas) {
            let y = if x.label == Some(self.pos_label) { 1.0 } else { -1.0 };
            let yf = y * (self.w.iter().zip(&x.weights).map(|(w, v)| w * v).sum::<f64>() + self.b);
            let violation = if a <= 0.0 {
                (1.0 - yf).max(0.0)
            } else if a >= c {
                (yf - 1.0).max(0.0)
            } else {
                (yf - 1.0).abs()
            };
            report.max_violation = report.max_violation.max(violation);
            if !(0.0..=c).contains(&a) {
                report.box_violations += 1;
            }
            report.equality_residual += a * y;
            for (r, v) in recon.iter_mut().zip(&x.weights) {
                *r += a * y * v;
            }
        }
        report.equality_residual = report.equality_residual.abs();
        report.max_w_error = recon.iter().zip(&self.w).map(|(r, w)| (r - w).abs()).fold(0.0, f64::max);
        report
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KktReport {
    /// Largest deviation from the complementary-slackness conditions.
    pub max_violation: f64,
    pub box_violations: usize,
    /// `|Σ αᵢ yᵢ|`.
    pub equality_residual: f64,
    /// Largest per-component gap between `w` and `Σ αᵢ yᵢ xᵢ`.
    pub max_w_error: f64,
}

impl KktReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_violation <= tol && self.box_violations == 0 && self.equality_residual <= tol && self.max_w_error <= 1e-8
    }
}

/// Trains a binary SVM separating `pos` (+1) from `neg` (−1).
///
/// Instance order matters only through determinism: equal inputs always
/// yield bit-identical models. A model is returned even when the iteration
/// cap is hit; check [`BinarySvmModel::ensure_converged`].
pub fn train_binary(data: &InstanceSet, pos: Polarity, neg: Polarity, params: &SvmParams) -> Result<BinarySvmModel, SvmError> {
    params.validate()?;
    if pos == neg {
        return Err(SvmError::InvalidParams("positive and negative labels must differ".into()));
    }
    let mut y = Vec::with_capacity(data.len());
    let mut x: Vec<&[f64]> = Vec::with_capacity(data.len());
    for (index, inst) in data.instances.iter().enumerate() {
        if inst.width() != data.width {
            return Err(SvmError::DimensionMismatch { expected: data.width, found: inst.width() });
        }
        match inst.label {
            Some(l) if l == pos => y.push(1.0),
            Some(l) if l == neg => y.push(-1.0),
            found => return Err(SvmError::UnexpectedLabel { index, found, pos, neg }),
        }
        x.push(&inst.weights);
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(SvmError::SingleClassData);
    }
    let sol = smo::solve(&x, &y, data.width, params);
    Ok(BinarySvmModel {
        w: sol.w,
        b: sol.b,
        alphas: sol.alphas,
        pos_label: pos,
        neg_label: neg,
        params: *params,
        training_size: data.len(),
        stats: TrainStats { iterations: sol.iterations, converged: sol.converged, kkt_gap: sol.kkt_gap },
    })
}
