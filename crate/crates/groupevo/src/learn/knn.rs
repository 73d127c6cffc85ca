//! k-nearest-neighbor classifier with a mixed-type distance: normalized
//! absolute difference on sizes, 0/1 mismatch on events. Normalization
//! statistics come from the training fold only.

use super::{Dataset, Row, NUM_CATEGORICAL, NUM_CLASSES, NUM_NUMERIC};

#[derive(Debug, Clone)]
pub struct KnnModel {
    pub rows: Vec<Row>,
    pub k: usize,
    /// Per numeric feature: (min, max) over the training rows.
    pub ranges: [(f64, f64); NUM_NUMERIC],
}

pub fn fit(dataset: &Dataset, k: usize) -> KnnModel {
    let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); NUM_NUMERIC];
    for r in &dataset.rows {
        for f in 0..NUM_NUMERIC {
            ranges[f].0 = ranges[f].0.min(r.numeric[f]);
            ranges[f].1 = ranges[f].1.max(r.numeric[f]);
        }
    }
    KnnModel { rows: dataset.rows.clone(), k, ranges }
}

fn distance(model: &KnnModel, a: &Row, b: &Row) -> f64 {
    let mut d = 0.0;
    for f in 0..NUM_NUMERIC {
        let (lo, hi) = model.ranges[f];
        let range = hi - lo;
        if range > 0.0 {
            d += (a.numeric[f] - b.numeric[f]).abs() / range;
        }
    }
    for f in 0..NUM_CATEGORICAL {
        if a.categorical[f] != b.categorical[f] {
            d += 1.0;
        }
    }
    d
}

pub fn predict_proba(model: &KnnModel, row: &Row) -> [f64; NUM_CLASSES] {
    let mut scored: Vec<(f64, usize, usize)> = model
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (distance(model, row, r), i, r.label))
        .collect();
    // distance ties resolve toward the earlier training row
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let k = model.k.min(scored.len());
    let mut votes = [0usize; NUM_CLASSES];
    for (_, _, label) in scored.iter().take(k) {
        votes[*label] += 1;
    }
    std::array::from_fn(|c| votes[c] as f64 / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::argmax;

    fn row(sizes: [f64; 4], events: [usize; 3], label: usize) -> Row {
        Row { numeric: sizes, categorical: events, label }
    }

    #[test]
    fn one_nn_recalls_training_points() {
        let rows = vec![
            row([1.0, 1.0, 1.0, 1.0], [0, 0, 0], 0),
            row([9.0, 9.0, 9.0, 9.0], [4, 4, 4], 4),
        ];
        let model = fit(&Dataset { rows: rows.clone() }, 1);
        for r in &rows {
            assert_eq!(argmax(&predict_proba(&model, r)), r.label);
        }
        assert_eq!(argmax(&predict_proba(&model, &row([2.0, 1.0, 1.0, 1.0], [0, 0, 0], 0))), 0);
    }

    #[test]
    fn categorical_mismatch_dominates_small_numeric_gap() {
        let rows = vec![
            row([5.0, 5.0, 5.0, 5.0], [1, 1, 1], 1),
            row([5.5, 5.0, 5.0, 5.0], [2, 2, 2], 3),
            row([0.0, 0.0, 0.0, 0.0], [0, 0, 0], 0),
            row([10.0, 10.0, 10.0, 10.0], [0, 0, 0], 0),
        ];
        let model = fit(&Dataset { rows }, 1);
        let probe = row([5.4, 5.0, 5.0, 5.0], [1, 1, 1], 0);
        assert_eq!(argmax(&predict_proba(&model, &probe)), 1);
    }

    #[test]
    fn constant_numeric_feature_contributes_nothing() {
        let rows = vec![
            row([5.0, 1.0, 1.0, 1.0], [0, 0, 0], 0),
            row([5.0, 2.0, 2.0, 2.0], [0, 0, 1], 2),
        ];
        let model = fit(&Dataset { rows }, 1);
        let probe = row([5.0, 1.2, 1.2, 1.2], [0, 0, 1], 0);
        // feature 0 has zero range; the categorical match on event_10 ties
        // with the numeric gap toward the second row
        let probs = predict_proba(&model, &probe);
        assert!(probs.iter().sum::<f64>() > 0.99);
    }

    #[test]
    fn k_majority_vote() {
        let rows = vec![
            row([1.0, 1.0, 1.0, 1.0], [0, 0, 0], 0),
            row([1.1, 1.0, 1.0, 1.0], [0, 0, 0], 0),
            row([1.2, 1.0, 1.0, 1.0], [0, 0, 0], 2),
            row([9.0, 9.0, 9.0, 9.0], [4, 4, 4], 4),
        ];
        let model = fit(&Dataset { rows }, 3);
        let probe = row([1.0, 1.0, 1.0, 1.0], [0, 0, 0], 0);
        let probs = predict_proba(&model, &probe);
        assert_eq!(argmax(&probs), 0);
        assert!((probs[0] - 2.0 / 3.0).abs() < 1e-12);
    }
}
