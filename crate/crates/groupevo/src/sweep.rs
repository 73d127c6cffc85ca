//! The full experimental grid: every (alpha, beta) combination times every
//! classifier, reported as Table-shaped weighted-F matrices.

use std::collections::BTreeMap;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::communities::Group;
use crate::evochain::{self, ExtractOptions};
use crate::ged::{self, EventType, GedParams, NiTable};
use crate::learn::{self, ClassifierKind, ClassifierSpec, Dataset, EvalReport, NUM_CLASSES};
use crate::{Error, Result};

pub const DEFAULT_THRESHOLDS: [f64; 6] = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
/// Cells with fewer instances than this are reported unevaluable.
pub const DEFAULT_MIN_INSTANCES: usize = 10;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub classifiers: Vec<ClassifierKind>,
    pub seed: u64,
    pub min_instances: usize,
    pub folds: usize,
}

impl SweepConfig {
    pub fn new(classifiers: Vec<ClassifierKind>, seed: u64) -> SweepConfig {
        SweepConfig {
            alphas: DEFAULT_THRESHOLDS.to_vec(),
            betas: DEFAULT_THRESHOLDS.to_vec(),
            classifiers,
            seed,
            min_instances: DEFAULT_MIN_INSTANCES,
            folds: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepCell {
    pub alpha: f64,
    pub beta: f64,
    pub classifier: ClassifierKind,
    /// None when the cell was unevaluable (too few instances).
    pub report: Option<EvalReport>,
    pub instance_count: usize,
    /// Evolution-edge histogram at this (alpha, beta).
    pub event_histogram: BTreeMap<EventType, usize>,
    pub edge_count: usize,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

/// Per-cell seed: a stable hash of the master seed, thresholds and
/// classifier, so any cell reproduces in isolation regardless of
/// execution order.
pub fn cell_seed(master: u64, alpha: f64, beta: f64, classifier: ClassifierKind) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(alpha.to_le_bytes());
    hasher.update(beta.to_le_bytes());
    hasher.update(classifier.name().as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Run one (alpha, beta, classifier) cell from scratch.
pub fn run_cell(
    groups_by_frame: &[Vec<Group>],
    ni: &NiTable,
    alpha: f64,
    beta: f64,
    classifier: ClassifierKind,
    config: &SweepConfig,
) -> Result<SweepCell> {
    let mut params = GedParams::new(alpha, beta)?;
    params.dissolve_threshold = 0.10;
    let evolution = ged::build_evolution_graph(groups_by_frame, ni, &params)?;
    let mut event_histogram = BTreeMap::new();
    for e in &evolution.edges {
        *event_histogram.entry(e.event).or_insert(0usize) += 1;
    }
    let sizes = evochain::size_table(&ged::group_table(groups_by_frame));
    let extracted =
        evochain::extract_instances(&evolution.edges, &sizes, &ExtractOptions::default())?;
    let instance_count = extracted.instances.len();
    let report = if instance_count >= config.min_instances.max(config.folds) {
        let dataset = Dataset::from_instances(&extracted.instances)?;
        let spec = ClassifierSpec {
            seed: cell_seed(config.seed, alpha, beta, classifier),
            ..ClassifierSpec::new(classifier, 0)
        };
        match learn::cross_validate(&dataset, &spec, config.folds) {
            Ok(r) => Some(r),
            Err(_) => None,
        }
    } else {
        None
    };
    Ok(SweepCell {
        alpha,
        beta,
        classifier,
        report,
        instance_count,
        edge_count: evolution.edges.len(),
        event_histogram,
    })
}

/// Run the whole grid. Cells execute in parallel; the result order is
/// deterministic because cells are keyed by (alpha, beta, classifier).
pub fn run_sweep(
    groups_by_frame: &[Vec<Group>],
    ni: &NiTable,
    config: &SweepConfig,
) -> Result<SweepResult> {
    if config.alphas.is_empty() || config.betas.is_empty() || config.classifiers.is_empty() {
        return Err(Error::InvalidArgument("empty sweep parameter set".into()));
    }
    let mut keys = Vec::new();
    for &alpha in &config.alphas {
        for &beta in &config.betas {
            for &classifier in &config.classifiers {
                keys.push((alpha, beta, classifier));
            }
        }
    }
    let cells: Vec<Result<SweepCell>> = keys
        .par_iter()
        .map(|&(alpha, beta, classifier)| {
            run_cell(groups_by_frame, ni, alpha, beta, classifier, config)
        })
        .collect();
    let cells = cells.into_iter().collect::<Result<Vec<SweepCell>>>()?;
    if cells.iter().all(|c| c.report.is_none()) {
        return Err(Error::EmptyInput(
            "no sweep cell yielded enough instances to evaluate".into(),
        ));
    }
    Ok(SweepResult { cells })
}

fn percent_label(v: f64) -> String {
    format!("{}", (v * 100.0).round() as i64)
}

/// CSV matrix for one classifier: rows = beta ascending, columns = alpha
/// ascending, weighted F to 3 decimals, `NA` for unevaluable cells.
pub fn render_matrix(result: &SweepResult, classifier: ClassifierKind) -> Result<String> {
    let cells: Vec<&SweepCell> = result
        .cells
        .iter()
        .filter(|c| c.classifier == classifier)
        .collect();
    if cells.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "classifier {} absent from sweep result",
            classifier.name()
        )));
    }
    let mut alphas: Vec<f64> = cells.iter().map(|c| c.alpha).collect();
    let mut betas: Vec<f64> = cells.iter().map(|c| c.beta).collect();
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    alphas.dedup();
    betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    betas.dedup();
    let mut out = String::from("beta\\alpha");
    for &a in &alphas {
        out.push(',');
        out.push_str(&percent_label(a));
    }
    out.push('\n');
    for &b in &betas {
        out.push_str(&percent_label(b));
        for &a in &alphas {
            let cell = cells
                .iter()
                .find(|c| c.alpha == a && c.beta == b)
                .ok_or_else(|| Error::InvalidArgument("ragged sweep grid".into()))?;
            match &cell.report {
                Some(r) => out.push_str(&format!(",{:.3}", r.weighted_f)),
                None => out.push_str(",NA"),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Long-form CSV with one row per cell.
pub fn render_long_form(result: &SweepResult) -> String {
    let mut out = String::from("alpha,beta,classifier,weighted_f,instances,edges");
    for c in 0..NUM_CLASSES {
        out.push_str(&format!(",f_{}", learn::class_name(c)));
    }
    out.push('\n');
    for cell in &result.cells {
        let wf = cell
            .report
            .as_ref()
            .map(|r| format!("{:.6}", r.weighted_f))
            .unwrap_or_else(|| "NA".into());
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            percent_label(cell.alpha),
            percent_label(cell.beta),
            cell.classifier.name(),
            wf,
            cell.instance_count,
            cell.edge_count
        ));
        for c in 0..NUM_CLASSES {
            match &cell.report {
                Some(r) => out.push_str(&format!(",{:.6}", r.per_class[c].f)),
                None => out.push_str(",NA"),
            }
        }
        out.push('\n');
    }
    out
}

/// The argmax cell per classifier, for the run summary.
pub fn best_cells(result: &SweepResult) -> Vec<&SweepCell> {
    let mut best: BTreeMap<&str, &SweepCell> = BTreeMap::new();
    for cell in &result.cells {
        if let Some(r) = &cell.report {
            let entry = best.entry(cell.classifier.name()).or_insert(cell);
            if let Some(er) = &entry.report {
                if r.weighted_f > er.weighted_f {
                    *entry = cell;
                }
            }
        }
    }
    best.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::uniform_ni;
    use crate::synth::{plant_memberships, Directive, EvolutionScript};

    fn scripted_network() -> Vec<Vec<Group>> {
        let mut script = EvolutionScript::new(12);
        for g in 0..6 {
            script.push(0, Directive::Form { name: format!("g{g}"), size: 8 });
        }
        for f in 1..12usize {
            for g in 0..6usize {
                let dir = match (f + g) % 3 {
                    0 => Directive::Grow { name: format!("g{g}"), count: 4 },
                    1 => Directive::Shrink { name: format!("g{g}"), count: 4 },
                    _ => Directive::Continue { name: format!("g{g}") },
                };
                // keep sizes in range: only shrink what has grown
                script.push(f, dir);
            }
        }
        plant_memberships(&script, 5).unwrap().frames
    }

    #[test]
    fn single_point_sweep_has_one_cell_per_classifier() {
        let frames = scripted_network();
        let ni = uniform_ni(&frames);
        let mut config = SweepConfig::new(vec![ClassifierKind::MajorityBaseline], 3);
        config.alphas = vec![0.8];
        config.betas = vec![0.8];
        let result = run_sweep(&frames, &ni, &config).unwrap();
        assert_eq!(result.cells.len(), 1);
    }

    #[test]
    fn default_grid_is_six_by_six() {
        let frames = scripted_network();
        let ni = uniform_ni(&frames);
        let config = SweepConfig::new(vec![ClassifierKind::MajorityBaseline], 3);
        let result = run_sweep(&frames, &ni, &config).unwrap();
        assert_eq!(result.cells.len(), 36);
        let matrix = render_matrix(&result, ClassifierKind::MajorityBaseline).unwrap();
        let lines: Vec<&str> = matrix.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "beta\\alpha,50,60,70,80,90,100");
        assert!(lines[1].starts_with("50,"));
        assert!(lines[6].starts_with("100,"));
    }

    #[test]
    fn cell_isolation_reproduces_sweep_values() {
        let frames = scripted_network();
        let ni = uniform_ni(&frames);
        let mut config = SweepConfig::new(vec![ClassifierKind::GainRatioTree], 17);
        config.alphas = vec![0.5, 0.8];
        config.betas = vec![0.5];
        let result = run_sweep(&frames, &ni, &config).unwrap();
        for cell in &result.cells {
            let lone = run_cell(
                &frames,
                &ni,
                cell.alpha,
                cell.beta,
                cell.classifier,
                &config,
            )
            .unwrap();
            assert_eq!(
                lone.report.as_ref().map(|r| r.weighted_f).map(f64::to_bits),
                cell.report.as_ref().map(|r| r.weighted_f).map(f64::to_bits)
            );
        }
    }

    #[test]
    fn histogram_sums_to_edge_count() {
        let frames = scripted_network();
        let ni = uniform_ni(&frames);
        let config = SweepConfig::new(vec![ClassifierKind::MajorityBaseline], 3);
        let result = run_sweep(&frames, &ni, &config).unwrap();
        for cell in &result.cells {
            let total: usize = cell.event_histogram.values().sum();
            assert_eq!(total, cell.edge_count);
        }
    }

    #[test]
    fn missing_classifier_in_matrix_is_an_error() {
        let frames = scripted_network();
        let ni = uniform_ni(&frames);
        let mut config = SweepConfig::new(vec![ClassifierKind::MajorityBaseline], 3);
        config.alphas = vec![0.8];
        config.betas = vec![0.8];
        let result = run_sweep(&frames, &ni, &config).unwrap();
        assert!(render_matrix(&result, ClassifierKind::RandomForest).is_err());
    }
}
