use crate::corpus::Polarity;
use crate::vectorize::{Instance, InstanceSet, Vectorizer};

use super::{train_binary, BinarySvmModel, SvmError, SvmParams};

/// Class pairs in model order; the first label of each pair is the +1 side.
pub const PAIRS: [(Polarity, Polarity); 3] = [
    (Polarity::Positive, Polarity::Negative),
    (Polarity::Positive, Polarity::Neutral),
    (Polarity::Negative, Polarity::Neutral),
];

/// Three pairwise SVMs plus the vectorizer they were trained against.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassModel {
    pub pairwise: [BinarySvmModel; 3],
    pub vectorizer: Vectorizer,
}

/// Voting outcome for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: Polarity,
    /// Decision value of each pairwise model, in [`PAIRS`] order.
    pub scores: [f64; 3],
    /// Votes per class in canonical order.
    pub votes: [u8; 3],
}

impl Prediction {
    /// Score keys of the form `positive:negative`, in [`PAIRS`] order.
    pub fn named_scores(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        PAIRS.iter().zip(self.scores).map(|((a, b), s)| (format!("{a}:{b}"), s))
    }
}

/// Majority vote over pairwise decision values.
///
/// A pair votes for its first label when the decision value is `>= 0`.
/// Ties go to the label with the larger summed `|decision value|` over the
/// pairs that voted for it, then to canonical order.
pub fn vote(scores: [f64; 3]) -> Prediction {
    let mut votes = [0u8; 3];
    let mut strength = [0.0f64; 3];
    for ((pos, neg), s) in PAIRS.iter().zip(scores) {
        let winner = if s >= 0.0 { *pos } else { *neg };
        votes[winner.index()] += 1;
        strength[winner.index()] += s.abs();
    }
    let mut best = 0;
    for i in 1..3 {
        let better = votes[i] > votes[best] || (votes[i] == votes[best] && strength[i] > strength[best]);
        if better {
            best = i;
        }
    }
    Prediction { label: Polarity::ALL[best], scores, votes }
}

impl MulticlassModel {
    pub fn width(&self) -> usize {
        self.vectorizer.width()
    }

    pub fn pair(&self, pos: Polarity, neg: Polarity) -> Option<&BinarySvmModel> {
        self.pairwise.iter().find(|m| m.pos_label == pos && m.neg_label == neg)
    }

    pub fn predict(&self, x: &Instance) -> Result<Prediction, SvmError> {
        let mut scores = [0.0; 3];
        for (s, m) in scores.iter_mut().zip(&self.pairwise) {
            *s = m.decision_value(x)?;
        }
        Ok(vote(scores))
    }

    /// Vectorizes free text with the embedded lexicon and scheme, then votes.
    pub fn classify_text(&self, text: &str) -> Prediction {
        let x = self.vectorizer.vectorize_single(text);
        self.predict(&x).expect("vectorizer and pairwise models share one width")
    }
}

/// Trains the three pairwise models on label-restricted subsets of `data`,
/// keeping instance order inside each subset. The pairs train on separate
/// threads.
pub fn train_multiclass(data: &InstanceSet, vectorizer: Vectorizer, params: &SvmParams) -> Result<MulticlassModel, SvmError> {
    params.validate()?;
    if data.width != vectorizer.width() {
        return Err(SvmError::DimensionMismatch { expected: vectorizer.width(), found: data.width });
    }
    for p in Polarity::ALL {
        if !data.instances.iter().any(|x| x.label == Some(p)) {
            return Err(SvmError::MissingClass(p));
        }
    }
    if let Some(index) = data.instances.iter().position(|x| x.label.is_none()) {
        return Err(SvmError::UnexpectedLabel { index, found: None, pos: PAIRS[0].0, neg: PAIRS[0].1 });
    }

    let subsets: Vec<InstanceSet> = PAIRS.iter().map(|&(a, b)| pair_subset(data, a, b)).collect();

    let results: Vec<Result<BinarySvmModel, SvmError>> = std::thread::scope(|s| {
        let handles: Vec<_> = PAIRS
            .iter()
            .zip(&subsets)
            .map(|(&(a, b), subset)| s.spawn(move || train_binary(subset, a, b, params)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("pairwise training panicked")).collect()
    });
    let mut models = results.into_iter();
    let mut next = || models.next().expect("three results");
    let pairwise = [next()?, next()?, next()?];
    Ok(MulticlassModel { pairwise, vectorizer })
}

/// Instances labeled `pos` or `neg`, in their original order.
pub fn pair_subset(data: &InstanceSet, pos: Polarity, neg: Polarity) -> InstanceSet {
    InstanceSet::new(
        data.width,
        data.instances.iter().filter(|x| x.label == Some(pos) || x.label == Some(neg)).cloned().collect(),
    )
}
