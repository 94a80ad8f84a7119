//! Confusion-matrix evaluation.
//!
//! Rows are machine predictions and columns are human labels, both in
//! canonical [`Polarity`] order. Per class, precision is the diagonal cell
//! over its row sum, recall is the diagonal cell over its column sum, and
//! F-measure is their harmonic mean.
//!
//! Reports quote precision and recall at three decimals and compute the
//! tabulated F-measure from those quoted values, the convention behind the
//! reference table this layout mirrors (its positive row reads 0.893 / 0.95 /
//! 0.921, where the unrounded harmonic mean would be 0.920). The unrounded
//! value is kept alongside as `f_measure_exact`.

use std::fmt::{self, Write as _};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::corpus::Polarity;

/// A ratio that may have an empty denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Defined(f64),
    Undefined,
}

impl Ratio {
    pub fn of(num: u64, den: u64) -> Ratio {
        if den == 0 {
            Ratio::Undefined
        } else {
            Ratio::Defined(num as f64 / den as f64)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Defined(v) => Some(v),
            Ratio::Undefined => None,
        }
    }

    pub fn is_undefined(self) -> bool {
        matches!(self, Ratio::Undefined)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Defined(v) => f.write_str(&format_3dp(*v)),
            Ratio::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ratio::Defined(v) => s.serialize_f64(*v),
            Ratio::Undefined => s.serialize_str("undefined"),
        }
    }
}

/// Half-up rounding to three decimals.
pub fn round_3dp(v: f64) -> f64 {
    // The nudge keeps exact halves such as 0.8675 from rounding down through
    // binary representation error.
    (v * 1000.0 + 1e-9).round() / 1000.0
}

/// Rounds half-up to three decimals and drops trailing zeros, keeping at
/// least one decimal digit (`0.950` prints as `0.95`, `1.000` as `1.0`).
pub fn format_3dp(v: f64) -> String {
    let mut s = format!("{:.3}", round_3dp(v));
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    s
}

fn harmonic(p: f64, r: f64) -> Ratio {
    if p + r > 0.0 {
        Ratio::Defined(2.0 * p * r / (p + r))
    } else {
        Ratio::Undefined
    }
}

/// 3×3 counts, `counts[machine][human]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 3]; 3],
}

/// Counts each `(machine, human)` pair.
pub fn build_confusion<I>(pairs: I) -> ConfusionMatrix
where
    I: IntoIterator<Item = (Polarity, Polarity)>,
{
    let mut cm = ConfusionMatrix::default();
    for (machine, human) in pairs {
        cm.counts[machine.index()][human.index()] += 1;
    }
    cm
}

impl ConfusionMatrix {
    pub fn from_counts(counts: [[u64; 3]; 3]) -> Self {
        ConfusionMatrix { counts }
    }

    pub fn get(&self, machine: Polarity, human: Polarity) -> u64 {
        self.counts[machine.index()][human.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    /// Number of items the machine assigned to `class`.
    pub fn machine_total(&self, class: Polarity) -> u64 {
        self.counts[class.index()].iter().sum()
    }

    /// Number of items humans assigned to `class`.
    pub fn human_total(&self, class: Polarity) -> u64 {
        self.counts.iter().map(|row| row[class.index()]).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0; 3]; 3];
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                t[j][i] = v;
            }
        }
        ConfusionMatrix { counts: t }
    }

    pub fn precision(&self, class: Polarity) -> Ratio {
        let i = class.index();
        Ratio::of(self.counts[i][i], self.machine_total(class))
    }

    pub fn recall(&self, class: Polarity) -> Ratio {
        let i = class.index();
        Ratio::of(self.counts[i][i], self.human_total(class))
    }

    /// Harmonic mean of precision and recall; undefined when either is
    /// undefined or both are zero.
    pub fn f_measure(&self, class: Polarity) -> Ratio {
        match (self.precision(class), self.recall(class)) {
            (Ratio::Defined(p), Ratio::Defined(r)) => harmonic(p, r),
            _ => Ratio::Undefined,
        }
    }

    pub fn accuracy(&self) -> Ratio {
        Ratio::of(self.trace(), self.total())
    }

    /// Parses three whitespace-separated rows of three counts (machine rows,
    /// human columns). Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, String> {
        let rows: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if rows.len() != 3 {
            return Err(format!("expected 3 rows, found {}", rows.len()));
        }
        let mut counts = [[0u64; 3]; 3];
        for (i, row) in rows.iter().enumerate() {
            let cells: Vec<&str> = row.split_whitespace().collect();
            if cells.len() != 3 {
                return Err(format!("row {}: expected 3 counts, found {}", i + 1, cells.len()));
            }
            for (j, cell) in cells.iter().enumerate() {
                counts[i][j] = cell.parse().map_err(|_| format!("row {}: invalid count {cell:?}", i + 1))?;
            }
        }
        Ok(ConfusionMatrix { counts })
    }

    /// Harmonic mean of precision and recall after each is rounded to three
    /// decimals.
    pub fn f_measure_quoted(&self, class: Polarity) -> Ratio {
        match (self.precision(class), self.recall(class)) {
            (Ratio::Defined(p), Ratio::Defined(r)) => harmonic(round_3dp(p), round_3dp(r)),
            _ => Ratio::Undefined,
        }
    }

    pub fn report(&self) -> EvalReport {
        let per = |f: fn(&Self, Polarity) -> Ratio| Polarity::ALL.map(|c| f(self, c));
        EvalReport {
            matrix: *self,
            precision: per(Self::precision),
            recall: per(Self::recall),
            f_measure: per(Self::f_measure_quoted),
            f_measure_exact: per(Self::f_measure),
            human_totals: Polarity::ALL.map(|c| self.human_total(c)),
            machine_totals: Polarity::ALL.map(|c| self.machine_total(c)),
            accuracy: self.accuracy(),
        }
    }
}

/// All per-class figures for one confusion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub matrix: ConfusionMatrix,
    pub precision: [Ratio; 3],
    pub recall: [Ratio; 3],
    /// From three-decimal precision and recall; this is what gets rendered.
    pub f_measure: [Ratio; 3],
    pub f_measure_exact: [Ratio; 3],
    pub human_totals: [u64; 3],
    pub machine_totals: [u64; 3],
    pub accuracy: Ratio,
}

struct PerClass<'a, T>(&'a [T; 3]);

impl<T: Serialize> Serialize for PerClass<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        for (c, v) in Polarity::ALL.iter().zip(self.0) {
            map.serialize_entry(c.as_str(), v)?;
        }
        map.end()
    }
}

impl Serialize for EvalReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(10))?;
        map.serialize_entry("orientation", "rows=machine,columns=human")?;
        map.serialize_entry("classes", &Polarity::ALL)?;
        map.serialize_entry("matrix", &self.matrix.counts)?;
        map.serialize_entry("precision", &PerClass(&self.precision))?;
        map.serialize_entry("recall", &PerClass(&self.recall))?;
        map.serialize_entry("f_measure", &PerClass(&self.f_measure))?;
        map.serialize_entry("f_measure_exact", &PerClass(&self.f_measure_exact))?;
        map.serialize_entry("human_totals", &PerClass(&self.human_totals))?;
        map.serialize_entry("machine_totals", &PerClass(&self.machine_totals))?;
        map.serialize_entry("accuracy", &self.accuracy)?;
        map.end()
    }
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Arithmetic mean of the unrounded per-class F-measures; undefined if
    /// any is.
    pub fn macro_f_measure(&self) -> Ratio {
        let mut sum = 0.0;
        for f in self.f_measure_exact {
            match f {
                Ratio::Defined(v) => sum += v,
                Ratio::Undefined => return Ratio::Undefined,
            }
        }
        Ratio::Defined(sum / 3.0)
    }

    /// Plain-text table: the matrix with one precision/recall/F row per
    /// machine class, then the human and machine totals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<18}{:>10}{:>10}{:>10}{:>11}{:>8}{:>11}", "machine \\ human", "positive", "negative", "neutral", "precision", "recall", "f-measure");
        for c in Polarity::ALL {
            let i = c.index();
            let row = &self.matrix.counts[i];
            let _ = writeln!(
                out,
                "{:<18}{:>10}{:>10}{:>10}{:>11}{:>8}{:>11}",
                c.as_str(),
                row[0],
                row[1],
                row[2],
                self.precision[i].to_string(),
                self.recall[i].to_string(),
                self.f_measure[i].to_string()
            );
        }
        let totals = |t: &[u64; 3]| {
            Polarity::ALL.iter().zip(t).map(|(c, n)| format!("{c}: {n}")).collect::<Vec<_>>().join("  ")
        };
        let _ = writeln!(out);
        let _ = writeln!(out, "human:    {}", totals(&self.human_totals));
        let _ = writeln!(out, "machine:  {}", totals(&self.machine_totals));
        let _ = writeln!(out, "accuracy: {}", self.accuracy);
        out
    }
}
