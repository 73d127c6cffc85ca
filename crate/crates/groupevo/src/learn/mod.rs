//! Next-event classifiers with stratified cross-validation.
//!
//! Features are the 4 group sizes (numeric) and 3 intermediate events
//! (categorical) of a [`SequenceInstance`]; the target is one of the six
//! event classes (Forming never appears as a label).

pub mod bayes;
pub mod forest;
pub mod knn;
pub mod metrics;
pub mod tree;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::evochain::SequenceInstance;
use crate::ged::EventType;
use crate::{Error, Result};

pub use metrics::{class_metrics, weighted_f, Confusion, EvalReport};

pub const NUM_NUMERIC: usize = 4;
pub const NUM_CATEGORICAL: usize = 3;
pub const NUM_FEATURES: usize = NUM_NUMERIC + NUM_CATEGORICAL;
pub const NUM_CLASSES: usize = 6;
/// Five pair events plus one reserved "unseen" symbol.
pub const CAT_CARDINALITY: usize = 6;
pub const UNSEEN_SYMBOL: usize = 5;

/// Target class order; argmax ties break toward lower indices.
pub const CLASS_ORDER: [EventType; NUM_CLASSES] = [
    EventType::Continuing,
    EventType::Shrinking,
    EventType::Growing,
    EventType::Splitting,
    EventType::Merging,
    EventType::Dissolving,
];

pub fn class_index(event: EventType) -> Result<usize> {
    CLASS_ORDER
        .iter()
        .position(|&e| e == event)
        .ok_or_else(|| Error::InvalidArgument(format!("{event} is not a target class")))
}

pub fn class_name(index: usize) -> &'static str {
    CLASS_ORDER[index].name()
}

fn pair_event_symbol(event: EventType) -> Result<usize> {
    EventType::PAIR_EVENTS
        .iter()
        .position(|&e| e == event)
        .ok_or_else(|| Error::InvalidArgument(format!("{event} is not a pair event")))
}

/// One encoded training/test row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub numeric: [f64; NUM_NUMERIC],
    pub categorical: [usize; NUM_CATEGORICAL],
    pub label: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn from_instances(instances: &[SequenceInstance]) -> Result<Dataset> {
        if instances.is_empty() {
            return Err(Error::EmptyInput("no instances".into()));
        }
        let rows = instances
            .iter()
            .map(|i| {
                Ok(Row {
                    numeric: [
                        i.size_t3 as f64,
                        i.size_t2 as f64,
                        i.size_t1 as f64,
                        i.size_t0 as f64,
                    ],
                    categorical: [
                        pair_event_symbol(i.event_32)?,
                        pair_event_symbol(i.event_21)?,
                        pair_event_symbol(i.event_10)?,
                    ],
                    label: class_index(i.label)?,
                })
            })
            .collect::<Result<Vec<Row>>>()?;
        Ok(Dataset { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn class_counts(&self) -> [usize; NUM_CLASSES] {
        let mut counts = [0usize; NUM_CLASSES];
        for r in &self.rows {
            counts[r.label] += 1;
        }
        counts
    }

    pub fn distinct_classes(&self) -> usize {
        self.class_counts().iter().filter(|&&c| c > 0).count()
    }
}

/// Is feature `f` (0..7) numeric?
pub fn feature_is_numeric(f: usize) -> bool {
    f < NUM_NUMERIC
}

pub fn numeric_value(row: &Row, f: usize) -> f64 {
    row.numeric[f]
}

pub fn categorical_value(row: &Row, f: usize) -> usize {
    row.categorical[f - NUM_NUMERIC]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    MajorityBaseline,
    NaiveBayes,
    KNearest,
    GainRatioTree,
    RandomForest,
}

impl ClassifierKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::MajorityBaseline => "baseline",
            ClassifierKind::NaiveBayes => "bayes",
            ClassifierKind::KNearest => "knn",
            ClassifierKind::GainRatioTree => "tree",
            ClassifierKind::RandomForest => "forest",
        }
    }

    pub fn parse(s: &str) -> Result<ClassifierKind> {
        match s {
            "baseline" => Ok(ClassifierKind::MajorityBaseline),
            "bayes" => Ok(ClassifierKind::NaiveBayes),
            "knn" => Ok(ClassifierKind::KNearest),
            "tree" => Ok(ClassifierKind::GainRatioTree),
            "forest" => Ok(ClassifierKind::RandomForest),
            other => Err(Error::InvalidArgument(format!("unknown classifier {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    /// Forest size.
    pub trees: usize,
    /// Neighbor count for KNearest.
    pub k: usize,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(kind: ClassifierKind, seed: u64) -> ClassifierSpec {
        ClassifierSpec { kind, trees: 10, k: 1, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.trees == 0 {
            return Err(Error::InvalidArgument("trees must be >= 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum Model {
    Majority {
        class: usize,
        distribution: [f64; NUM_CLASSES],
    },
    NaiveBayes(bayes::NaiveBayesModel),
    KNearest(knn::KnnModel),
    Tree(tree::TreeModel),
    Forest(forest::ForestModel),
}

/// Fit a model; deterministic given dataset order, spec and seed.
pub fn train(dataset: &Dataset, spec: &ClassifierSpec) -> Result<Model> {
    if dataset.is_empty() {
        return Err(Error::EmptyInput("cannot train on an empty dataset".into()));
    }
    spec.validate()?;
    Ok(match spec.kind {
        ClassifierKind::MajorityBaseline => {
            let counts = dataset.class_counts();
            let n = dataset.len() as f64;
            let class = counts
                .iter()
                .enumerate()
                .max_by(|(ia, a), (ib, b)| a.cmp(b).then(ib.cmp(ia)))
                .map(|(i, _)| i)
                .unwrap();
            let distribution = std::array::from_fn(|i| counts[i] as f64 / n);
            Model::Majority { class, distribution }
        }
        ClassifierKind::NaiveBayes => Model::NaiveBayes(bayes::fit(dataset)),
        ClassifierKind::KNearest => Model::KNearest(knn::fit(dataset, spec.k)),
        ClassifierKind::GainRatioTree => {
            Model::Tree(tree::fit(dataset, &tree::TreeConfig::default()))
        }
        ClassifierKind::RandomForest => {
            Model::Forest(forest::fit(dataset, spec.trees, spec.seed))
        }
    })
}

/// Predicted class plus the class-probability vector. Argmax ties break
/// by the fixed class order.
pub fn predict(model: &Model, row: &Row) -> (usize, [f64; NUM_CLASSES]) {
    let probs = match model {
        Model::Majority { distribution, .. } => *distribution,
        Model::NaiveBayes(m) => bayes::predict_proba(m, row),
        Model::KNearest(m) => knn::predict_proba(m, row),
        Model::Tree(m) => tree::predict_proba(m, row),
        Model::Forest(m) => forest::predict_proba(m, row),
    };
    (argmax(&probs), probs)
}

pub fn argmax(probs: &[f64; NUM_CLASSES]) -> usize {
    let mut best = 0;
    for i in 1..NUM_CLASSES {
        if probs[i] > probs[best] {
            best = i;
        }
    }
    best
}

/// Stratified fold assignment: per class, a seeded shuffle dealt
/// round-robin, so per-fold class proportions deviate from the global
/// ones by at most one instance per class.
pub fn stratified_folds(dataset: &Dataset, folds: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; dataset.len()];
    for class in 0..NUM_CLASSES {
        let mut indices: Vec<usize> = dataset
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.label == class)
            .map(|(i, _)| i)
            .collect();
        indices.shuffle(&mut rng);
        for (pos, idx) in indices.into_iter().enumerate() {
            assignment[idx] = pos % folds;
        }
    }
    assignment
}

/// Stratified k-fold cross-validation; every instance is tested exactly
/// once and the confusion matrix accumulates over folds.
pub fn cross_validate(dataset: &Dataset, spec: &ClassifierSpec, folds: usize) -> Result<EvalReport> {
    if folds < 2 {
        return Err(Error::InvalidArgument("folds must be >= 2".into()));
    }
    if dataset.len() < folds {
        return Err(Error::InvalidArgument(format!(
            "dataset has {} instances, need at least {folds}",
            dataset.len()
        )));
    }
    let assignment = stratified_folds(dataset, folds, spec.seed);
    let mut confusion = Confusion::default();
    for fold in 0..folds {
        let train_rows: Vec<Row> = dataset
            .rows
            .iter()
            .zip(&assignment)
            .filter(|(_, &a)| a != fold)
            .map(|(r, _)| r.clone())
            .collect();
        if train_rows.is_empty() {
            continue;
        }
        let train_set = Dataset { rows: train_rows };
        let fold_spec = ClassifierSpec {
            seed: derive_seed(spec.seed, fold as u64),
            ..*spec
        };
        let model = train(&train_set, &fold_spec)?;
        for (row, &a) in dataset.rows.iter().zip(&assignment) {
            if a == fold {
                let (pred, _) = predict(&model, row);
                confusion.record(row.label, pred);
            }
        }
    }
    metrics::report_from_confusion(confusion, folds, spec.seed)
}

/// Stable seed derivation for sub-tasks (folds, forest trees, sweep cells).
pub fn derive_seed(master: u64, task: u64) -> u64 {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(task.to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(sizes: [f64; 4], events: [usize; 3], label: usize) -> Row {
        Row { numeric: sizes, categorical: events, label }
    }

    /// Label fully determined by event_10: class = event symbol.
    fn separable_dataset(n: usize) -> Dataset {
        let mut rows = Vec::new();
        for i in 0..n {
            let sym = i % 5;
            rows.push(row(
                [4.0 + (i % 3) as f64, 5.0, 6.0, 4.0 + (i % 7) as f64],
                [i % 5, (i + 1) % 5, sym],
                sym,
            ));
        }
        Dataset { rows }
    }

    #[test]
    fn baseline_predicts_training_majority() {
        let mut rows = vec![row([1.0, 1.0, 1.0, 1.0], [0, 0, 0], 0); 6];
        rows.extend(vec![row([1.0, 1.0, 1.0, 1.0], [0, 0, 0], 2); 4]);
        let d = Dataset { rows };
        let spec = ClassifierSpec::new(ClassifierKind::MajorityBaseline, 7);
        let m = train(&d, &spec).unwrap();
        let (pred, probs) = predict(&m, &d.rows[9]);
        assert_eq!(pred, 0);
        assert!((probs[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn single_class_dataset_trains_trivially() {
        let d = Dataset { rows: vec![row([1.0, 2.0, 3.0, 4.0], [0, 1, 2], 3); 5] };
        for kind in [
            ClassifierKind::MajorityBaseline,
            ClassifierKind::NaiveBayes,
            ClassifierKind::KNearest,
            ClassifierKind::GainRatioTree,
            ClassifierKind::RandomForest,
        ] {
            let m = train(&d, &ClassifierSpec::new(kind, 1)).unwrap();
            assert_eq!(predict(&m, &d.rows[0]).0, 3);
        }
    }

    #[test]
    fn stratified_folds_balance_classes() {
        let d = separable_dataset(100);
        let folds = 10;
        let assignment = stratified_folds(&d, folds, 42);
        let global = d.class_counts();
        for fold in 0..folds {
            let mut counts = [0usize; NUM_CLASSES];
            for (r, &a) in d.rows.iter().zip(&assignment) {
                if a == fold {
                    counts[r.label] += 1;
                }
            }
            for c in 0..NUM_CLASSES {
                let expected = global[c] as f64 / folds as f64;
                assert!((counts[c] as f64 - expected).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn cross_validation_tests_every_instance_once() {
        let d = separable_dataset(60);
        let spec = ClassifierSpec::new(ClassifierKind::GainRatioTree, 3);
        let report = cross_validate(&d, &spec, 10).unwrap();
        assert_eq!(report.confusion.total(), 60);
    }

    #[test]
    fn separable_dataset_is_learned_perfectly_by_tree() {
        let d = separable_dataset(200);
        let spec = ClassifierSpec::new(ClassifierKind::GainRatioTree, 11);
        let report = cross_validate(&d, &spec, 10).unwrap();
        assert_eq!(report.weighted_f, 1.0);
    }

    #[test]
    fn reproducibility_bitwise() {
        let d = separable_dataset(80);
        for kind in [
            ClassifierKind::RandomForest,
            ClassifierKind::NaiveBayes,
            ClassifierKind::KNearest,
        ] {
            let spec = ClassifierSpec::new(kind, 99);
            let a = cross_validate(&d, &spec, 10).unwrap();
            let b = cross_validate(&d, &spec, 10).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn too_few_instances_for_folds() {
        let d = separable_dataset(5);
        let spec = ClassifierSpec::new(ClassifierKind::MajorityBaseline, 0);
        assert!(cross_validate(&d, &spec, 10).is_err());
    }
}
