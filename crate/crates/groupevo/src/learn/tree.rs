//! Gain-ratio decision tree: multiway splits on categorical features,
//! binary threshold splits on numeric ones.

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use super::{
    categorical_value, feature_is_numeric, numeric_value, Dataset, Row, CAT_CARDINALITY,
    NUM_CLASSES, NUM_FEATURES,
};

#[derive(Debug, Clone)]
pub struct TreeConfig {
    /// Minimum instances per emitted leaf.
    pub min_leaf: usize,
    /// When set, each split considers a random subset of this many features.
    pub feature_subset: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig { min_leaf: 2, feature_subset: None }
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Leaf {
        counts: [usize; NUM_CLASSES],
    },
    NumericSplit {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
    CategoricalSplit {
        feature: usize,
        /// Child per symbol; untrained symbols route to `majority_child`.
        children: Vec<Option<Node>>,
        majority_child: usize,
    },
}

#[derive(Debug, Clone)]
pub struct TreeModel {
    pub root: Node,
}

fn entropy(counts: &[usize; NUM_CLASSES], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn class_counts(rows: &[&Row]) -> [usize; NUM_CLASSES] {
    let mut counts = [0usize; NUM_CLASSES];
    for r in rows {
        counts[r.label] += 1;
    }
    counts
}

#[derive(Debug, Clone)]
enum SplitPlan {
    Numeric { feature: usize, threshold: f64 },
    Categorical { feature: usize },
}

struct Candidate {
    plan: SplitPlan,
    gain: f64,
    gain_ratio: f64,
}

fn evaluate_numeric(rows: &[&Row], feature: usize, min_leaf: usize) -> Option<Candidate> {
    let mut values: Vec<f64> = rows.iter().map(|r| numeric_value(r, feature)).collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    if values.len() < 2 {
        return None;
    }
    let n = rows.len();
    let parent = entropy(&class_counts(rows), n);
    let mut best: Option<Candidate> = None;
    for pair in values.windows(2) {
        let threshold = (pair[0] + pair[1]) / 2.0;
        let mut left = [0usize; NUM_CLASSES];
        let mut right = [0usize; NUM_CLASSES];
        let mut nl = 0usize;
        for r in rows {
            if numeric_value(r, feature) <= threshold {
                left[r.label] += 1;
                nl += 1;
            } else {
                right[r.label] += 1;
            }
        }
        let nr = n - nl;
        if nl < min_leaf || nr < min_leaf {
            continue;
        }
        let info = (nl as f64 / n as f64) * entropy(&left, nl)
            + (nr as f64 / n as f64) * entropy(&right, nr);
        let gain = parent - info;
        let pl = nl as f64 / n as f64;
        let pr = nr as f64 / n as f64;
        let split_info = -(pl * pl.log2() + pr * pr.log2());
        if split_info <= 0.0 {
            continue;
        }
        let gain_ratio = gain / split_info;
        let better = match &best {
            None => true,
            Some(b) => gain_ratio > b.gain_ratio,
        };
        if better {
            best = Some(Candidate {
                plan: SplitPlan::Numeric { feature, threshold },
                gain,
                gain_ratio,
            });
        }
    }
    best
}

fn evaluate_categorical(rows: &[&Row], feature: usize, min_leaf: usize) -> Option<Candidate> {
    let n = rows.len();
    let mut part_counts = vec![[0usize; NUM_CLASSES]; CAT_CARDINALITY];
    let mut part_sizes = vec![0usize; CAT_CARDINALITY];
    for r in rows {
        let v = categorical_value(r, feature);
        part_counts[v][r.label] += 1;
        part_sizes[v] += 1;
    }
    let populated_enough = part_sizes.iter().filter(|&&s| s >= min_leaf).count();
    if populated_enough < 2 {
        return None;
    }
    let parent = entropy(&class_counts(rows), n);
    let mut info = 0.0;
    let mut split_info = 0.0;
    for v in 0..CAT_CARDINALITY {
        if part_sizes[v] == 0 {
            continue;
        }
        let p = part_sizes[v] as f64 / n as f64;
        info += p * entropy(&part_counts[v], part_sizes[v]);
        split_info -= p * p.log2();
    }
    if split_info <= 0.0 {
        return None;
    }
    let gain = parent - info;
    Some(Candidate {
        plan: SplitPlan::Categorical { feature },
        gain,
        gain_ratio: gain / split_info,
    })
}

fn choose_split(
    rows: &[&Row],
    config: &TreeConfig,
    rng: Option<&mut ChaCha8Rng>,
) -> Option<SplitPlan> {
    let features: Vec<usize> = match (config.feature_subset, rng) {
        (Some(m), Some(rng)) if m < NUM_FEATURES => {
            let mut picked: Vec<usize> = sample(rng, NUM_FEATURES, m).into_iter().collect();
            picked.sort_unstable();
            picked
        }
        _ => (0..NUM_FEATURES).collect(),
    };
    let mut best: Option<Candidate> = None;
    for f in features {
        let candidate = if feature_is_numeric(f) {
            evaluate_numeric(rows, f, config.min_leaf)
        } else {
            evaluate_categorical(rows, f, config.min_leaf)
        };
        if let Some(c) = candidate {
            if c.gain <= 1e-12 {
                continue;
            }
            // strict improvement keeps the lowest feature index / lowest
            // threshold on exact ties, as features and thresholds are
            // scanned in ascending order
            let better = match &best {
                None => true,
                Some(b) => c.gain_ratio > b.gain_ratio,
            };
            if better {
                best = Some(c);
            }
        }
    }
    best.map(|c| c.plan)
}

fn grow(rows: Vec<&Row>, config: &TreeConfig, rng: &mut Option<ChaCha8Rng>) -> Node {
    let counts = class_counts(&rows);
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if pure || rows.len() < 2 * config.min_leaf {
        return Node::Leaf { counts };
    }
    let plan = choose_split(&rows, config, rng.as_mut());
    match plan {
        None => Node::Leaf { counts },
        Some(SplitPlan::Numeric { feature, threshold }) => {
            let (left, right): (Vec<&Row>, Vec<&Row>) = rows
                .into_iter()
                .partition(|r| numeric_value(r, feature) <= threshold);
            Node::NumericSplit {
                feature,
                threshold,
                left: Box::new(grow(left, config, rng)),
                right: Box::new(grow(right, config, rng)),
            }
        }
        Some(SplitPlan::Categorical { feature }) => {
            let mut parts: Vec<Vec<&Row>> = vec![Vec::new(); CAT_CARDINALITY];
            for r in rows {
                parts[categorical_value(r, feature)].push(r);
            }
            let majority_child = parts
                .iter()
                .enumerate()
                .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
                .map(|(i, _)| i)
                .unwrap();
            let children = parts
                .into_iter()
                .map(|part| {
                    if part.is_empty() {
                        None
                    } else {
                        Some(grow(part, config, rng))
                    }
                })
                .collect();
            Node::CategoricalSplit { feature, children, majority_child }
        }
    }
}

pub fn fit(dataset: &Dataset, config: &TreeConfig) -> TreeModel {
    fit_with_rng(dataset, config, None)
}

pub fn fit_with_rng(dataset: &Dataset, config: &TreeConfig, rng: Option<ChaCha8Rng>) -> TreeModel {
    let rows: Vec<&Row> = dataset.rows.iter().collect();
    let mut rng = rng;
    TreeModel { root: grow(rows, config, &mut rng) }
}

pub fn predict_proba(model: &TreeModel, row: &Row) -> [f64; NUM_CLASSES] {
    let mut node = &model.root;
    loop {
        match node {
            Node::Leaf { counts } => {
                let total: usize = counts.iter().sum();
                if total == 0 {
                    return [1.0 / NUM_CLASSES as f64; NUM_CLASSES];
                }
                return std::array::from_fn(|i| counts[i] as f64 / total as f64);
            }
            Node::NumericSplit { feature, threshold, left, right } => {
                node = if numeric_value(row, *feature) <= *threshold { left } else { right };
            }
            Node::CategoricalSplit { feature, children, majority_child } => {
                let v = categorical_value(row, *feature);
                node = match children.get(v).and_then(|c| c.as_ref()) {
                    Some(child) => child,
                    None => children[*majority_child]
                        .as_ref()
                        .expect("majority child is always trained"),
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(sizes: [f64; 4], events: [usize; 3], label: usize) -> Row {
        Row { numeric: sizes, categorical: events, label }
    }

    #[test]
    fn zero_training_error_on_functional_labels() {
        // label is a function of the categorical feature event_10
        let mut rows = Vec::new();
        for i in 0..100 {
            let sym = i % 5;
            rows.push(row([1.0, 2.0, 3.0, (i % 4) as f64], [0, 1, sym], sym));
        }
        let d = Dataset { rows };
        let model = fit(&d, &TreeConfig::default());
        for r in &d.rows {
            let probs = predict_proba(&model, r);
            assert_eq!(super::super::argmax(&probs), r.label);
        }
    }

    #[test]
    fn numeric_threshold_split() {
        let mut rows = Vec::new();
        for i in 0..40 {
            let size = if i < 20 { 3.0 } else { 9.0 };
            let label = if i < 20 { 0 } else { 2 };
            rows.push(row([size, size, size, size], [0, 0, 0], label));
        }
        let d = Dataset { rows };
        let model = fit(&d, &TreeConfig::default());
        let probe = row([3.0, 3.0, 3.0, 3.0], [0, 0, 0], 0);
        assert_eq!(super::super::argmax(&predict_proba(&model, &probe)), 0);
        let probe = row([9.0, 9.0, 9.0, 9.0], [0, 0, 0], 0);
        assert_eq!(super::super::argmax(&predict_proba(&model, &probe)), 2);
    }

    #[test]
    fn unseen_symbol_routes_to_majority_child() {
        let mut rows = Vec::new();
        for i in 0..30 {
            let sym = if i < 20 { 0 } else { 1 };
            let label = if i < 20 { 3 } else { 4 };
            rows.push(row([1.0, 1.0, 1.0, 1.0], [0, 0, sym], label));
        }
        let d = Dataset { rows };
        let model = fit(&d, &TreeConfig::default());
        let probe = row([1.0, 1.0, 1.0, 1.0], [0, 0, super::super::UNSEEN_SYMBOL], 0);
        // symbol 0 dominates training, so unseen routes to its child
        assert_eq!(super::super::argmax(&predict_proba(&model, &probe)), 3);
    }

    #[test]
    fn small_node_becomes_leaf() {
        let rows = vec![
            row([1.0, 1.0, 1.0, 1.0], [0, 0, 0], 0),
            row([9.0, 9.0, 9.0, 9.0], [1, 1, 1], 1),
            row([5.0, 5.0, 5.0, 5.0], [2, 2, 2], 2),
        ];
        let d = Dataset { rows };
        // min_leaf 2 with 3 rows: a numeric split 1/2 is rejected, but a
        // categorical one needs two parts of >= 2, so the root stays a leaf
        let model = fit(&d, &TreeConfig::default());
        assert!(matches!(model.root, Node::Leaf { .. }));
    }
}
