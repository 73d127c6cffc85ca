//! Naive Bayes with Gaussian likelihoods for the size features and
//! Laplace-smoothed frequencies for the event features.

use super::{Dataset, Row, CAT_CARDINALITY, NUM_CATEGORICAL, NUM_CLASSES, NUM_NUMERIC};

const VAR_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct NaiveBayesModel {
    pub class_counts: [usize; NUM_CLASSES],
    pub total: usize,
    /// Per class, per numeric feature: (mean, variance).
    pub gaussians: [[(f64, f64); NUM_NUMERIC]; NUM_CLASSES],
    /// Per class, per categorical feature, per symbol: raw counts.
    pub cat_counts: [[[usize; CAT_CARDINALITY]; NUM_CATEGORICAL]; NUM_CLASSES],
}

pub fn fit(dataset: &Dataset) -> NaiveBayesModel {
    let mut class_counts = [0usize; NUM_CLASSES];
    let mut sums = [[0.0f64; NUM_NUMERIC]; NUM_CLASSES];
    let mut cat_counts = [[[0usize; CAT_CARDINALITY]; NUM_CATEGORICAL]; NUM_CLASSES];
    for r in &dataset.rows {
        class_counts[r.label] += 1;
        for f in 0..NUM_NUMERIC {
            sums[r.label][f] += r.numeric[f];
        }
        for f in 0..NUM_CATEGORICAL {
            cat_counts[r.label][f][r.categorical[f]] += 1;
        }
    }
    let mut gaussians = [[(0.0, VAR_FLOOR); NUM_NUMERIC]; NUM_CLASSES];
    for c in 0..NUM_CLASSES {
        if class_counts[c] == 0 {
            continue;
        }
        let n = class_counts[c] as f64;
        for f in 0..NUM_NUMERIC {
            gaussians[c][f].0 = sums[c][f] / n;
        }
    }
    let mut sq = [[0.0f64; NUM_NUMERIC]; NUM_CLASSES];
    for r in &dataset.rows {
        for f in 0..NUM_NUMERIC {
            let d = r.numeric[f] - gaussians[r.label][f].0;
            sq[r.label][f] += d * d;
        }
    }
    for c in 0..NUM_CLASSES {
        if class_counts[c] == 0 {
            continue;
        }
        let n = class_counts[c] as f64;
        for f in 0..NUM_NUMERIC {
            gaussians[c][f].1 = (sq[c][f] / n).max(VAR_FLOOR);
        }
    }
    NaiveBayesModel {
        class_counts,
        total: dataset.len(),
        gaussians,
        cat_counts,
    }
}

fn log_gauss(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var)
}

pub fn predict_proba(model: &NaiveBayesModel, row: &Row) -> [f64; NUM_CLASSES] {
    let mut log_scores = [f64::NEG_INFINITY; NUM_CLASSES];
    for c in 0..NUM_CLASSES {
        if model.class_counts[c] == 0 {
            continue;
        }
        // Laplace on the prior too, so empty classes never dominate
        let mut s = ((model.class_counts[c] as f64 + 1.0)
            / (model.total as f64 + NUM_CLASSES as f64))
            .ln();
        for f in 0..NUM_NUMERIC {
            let (mean, var) = model.gaussians[c][f];
            s += log_gauss(row.numeric[f], mean, var);
        }
        for f in 0..super::NUM_CATEGORICAL {
            let count = model.cat_counts[c][f][row.categorical[f]] as f64;
            s += ((count + 1.0)
                / (model.class_counts[c] as f64 + CAT_CARDINALITY as f64))
                .ln();
        }
        log_scores[c] = s;
    }
    // normalize in log space
    let max = log_scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut probs = [0.0f64; NUM_CLASSES];
    let mut total = 0.0;
    for c in 0..NUM_CLASSES {
        if log_scores[c].is_finite() {
            probs[c] = (log_scores[c] - max).exp();
            total += probs[c];
        }
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    probs
}
