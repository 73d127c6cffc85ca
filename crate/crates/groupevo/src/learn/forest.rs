//! Random forest: bagged gain-ratio trees with per-split random feature
//! subsets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::tree::{self, TreeConfig, TreeModel};
use super::{derive_seed, Dataset, Row, NUM_CLASSES};

/// ceil(log2(7)) + 1 = 3, the WEKA-era default subset size for 7 features.
pub const DEFAULT_FEATURE_SUBSET: usize = 3;

#[derive(Debug, Clone)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
}

pub fn fit(dataset: &Dataset, n_trees: usize, seed: u64) -> ForestModel {
    let config = TreeConfig {
        min_leaf: 2,
        feature_subset: Some(DEFAULT_FEATURE_SUBSET),
    };
    let trees = (0..n_trees)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
            let n = dataset.len();
            let sample: Vec<Row> = (0..n)
                .map(|_| dataset.rows[rng.random_range(0..n)].clone())
                .collect();
            let boot = Dataset { rows: sample };
            tree::fit_with_rng(&boot, &config, Some(rng))
        })
        .collect();
    ForestModel { trees }
}

/// Average of per-tree class distributions.
pub fn predict_proba(model: &ForestModel, row: &Row) -> [f64; NUM_CLASSES] {
    let mut acc = [0.0f64; NUM_CLASSES];
    for t in &model.trees {
        let p = tree::predict_proba(t, row);
        for c in 0..NUM_CLASSES {
            acc[c] += p[c];
        }
    }
    let n = model.trees.len() as f64;
    for c in acc.iter_mut() {
        *c /= n;
    }
    acc
}
