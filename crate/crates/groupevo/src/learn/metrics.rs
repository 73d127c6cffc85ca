//! Confusion matrix and F-measure reporting.

use crate::{Error, Result};

use super::{class_name, NUM_CLASSES};

/// Row = actual class, column = predicted class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Confusion {
    pub counts: [[usize; NUM_CLASSES]; NUM_CLASSES],
}

impl Confusion {
    pub fn record(&mut self, actual: usize, predicted: usize) {
        self.counts[actual][predicted] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn support(&self, class: usize) -> usize {
        self.counts[class].iter().sum()
    }

    pub fn predicted(&self, class: usize) -> usize {
        self.counts.iter().map(|row| row[class]).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &c)| i == j || c == 0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub support: usize,
}

/// Evaluation summary: confusion matrix, per-class metrics and the
/// support-weighted F-measure.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub confusion: Confusion,
    pub per_class: [ClassMetrics; NUM_CLASSES],
    pub weighted_f: f64,
    pub folds: usize,
    pub seed: u64,
}

/// Per-class precision/recall/F with the zero conventions: precision 0
/// when the class is never predicted, recall 0 when support is 0, F 0
/// when precision + recall is 0.
pub fn class_metrics(confusion: &Confusion, class: usize) -> ClassMetrics {
    let tp = confusion.counts[class][class];
    let predicted = confusion.predicted(class);
    let support = confusion.support(class);
    let precision = if predicted > 0 { tp as f64 / predicted as f64 } else { 0.0 };
    let recall = if support > 0 { tp as f64 / support as f64 } else { 0.0 };
    let f = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    ClassMetrics { precision, recall, f, support }
}

/// Support-weighted average of per-class F-measures.
pub fn weighted_f(confusion: &Confusion) -> Result<f64> {
    let total = confusion.total();
    if total == 0 {
        return Err(Error::EmptyInput("all-zero confusion matrix".into()));
    }
    let mut acc = 0.0;
    for c in 0..NUM_CLASSES {
        let m = class_metrics(confusion, c);
        acc += (m.support as f64 / total as f64) * m.f;
    }
    Ok(acc)
}

pub fn report_from_confusion(confusion: Confusion, folds: usize, seed: u64) -> Result<EvalReport> {
    let wf = weighted_f(&confusion)?;
    let per_class = std::array::from_fn(|c| class_metrics(&confusion, c));
    Ok(EvalReport { confusion, per_class, weighted_f: wf, folds, seed })
}

impl EvalReport {
    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for (c, m) in self.per_class.iter().enumerate() {
            lines.push(format!(
                "{}: precision={:.3} recall={:.3} f={:.3} support={}",
                class_name(c),
                m.precision,
                m.recall,
                m.f,
                m.support
            ));
        }
        lines.push(format!("weighted f={:.3}", self.weighted_f));
        lines
    }
}
