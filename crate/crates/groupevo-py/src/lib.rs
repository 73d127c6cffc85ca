//! Python bindings for the group evolution pipeline. Plain lists, tuples
//! and dicts in, the same out; the heavy lifting stays in the core crate.

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use groupevo::communities::{self, Group};
use groupevo::evochain::{self, ExtractOptions};
use groupevo::formats::uniform_ni;
use groupevo::ged::{self, EventType, GedParams};
use groupevo::importance::{self, ImportanceMap};
use groupevo::learn::{self, ClassifierKind, ClassifierSpec, Dataset, NUM_CLASSES};
use groupevo::synth::{self, EvolutionScript};
use groupevo::tsn::{self, Interaction, Timeframe};

fn err(e: groupevo::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn frame_from_edges(edges: &[(String, String, f64)]) -> Timeframe {
    let mut nodes = BTreeSet::new();
    let mut edge_map: BTreeMap<(String, String), f64> = BTreeMap::new();
    for (s, t, w) in edges {
        nodes.insert(s.clone());
        nodes.insert(t.clone());
        *edge_map.entry((s.clone(), t.clone())).or_insert(0.0) += w;
    }
    Timeframe { index: 0, start: 0, end: 1, nodes, edges: edge_map }
}

fn groups_from_python(frames: Vec<Vec<Vec<String>>>) -> Vec<Vec<Group>> {
    frames
        .into_iter()
        .enumerate()
        .map(|(f, member_lists)| {
            let sets = member_lists
                .into_iter()
                .map(|m| m.into_iter().collect::<BTreeSet<String>>())
                .collect();
            communities::groups_from_member_sets(f, sets).0
        })
        .collect()
}

type PyEdge = (Option<(usize, String)>, Option<(usize, String)>, String, Option<(f64, f64)>);

fn edges_to_python(edges: &[ged::EvolutionEdge]) -> Vec<PyEdge> {
    edges
        .iter()
        .map(|e| {
            (
                e.from.clone(),
                e.to.clone(),
                e.event.name().to_string(),
                e.inclusions.as_ref().map(|i| (i.i_fwd, i.i_bwd)),
            )
        })
        .collect()
}

/// Slice interactions (source, target, timestamp, weight) into frames of
/// `window_len` seconds overlapping by `overlap` seconds. Returns
/// (index, start, end, edges) per frame with aggregated edge weights.
#[pyfunction]
#[pyo3(signature = (interactions, window_len, overlap=0, origin=None))]
fn window(
    interactions: Vec<(String, String, i64, f64)>,
    window_len: i64,
    overlap: i64,
    origin: Option<i64>,
) -> PyResult<Vec<(usize, i64, i64, Vec<(String, String, f64)>)>> {
    let interactions: Vec<Interaction> = interactions
        .into_iter()
        .map(|(source, target, timestamp, weight)| Interaction { source, target, timestamp, weight })
        .collect();
    let network = tsn::window(&interactions, window_len, overlap, origin).map_err(err)?;
    Ok(network
        .frames
        .into_iter()
        .map(|f| {
            let edges = f.edges.into_iter().map(|((s, t), w)| (s, t, w)).collect();
            (f.index, f.start, f.end, edges)
        })
        .collect())
}

/// Overlapping communities of an undirected-ized edge list via k-clique
/// percolation. Returns sorted member lists.
#[pyfunction]
#[pyo3(signature = (edges, k=3, min_weight=None))]
fn cpm_communities(
    edges: Vec<(String, String, f64)>,
    k: usize,
    min_weight: Option<f64>,
) -> PyResult<Vec<Vec<String>>> {
    let frame = frame_from_edges(&edges);
    let groups = communities::cpm_communities_filtered(&frame, k, min_weight).map_err(err)?;
    Ok(groups
        .into_iter()
        .map(|g| g.members.into_iter().collect())
        .collect())
}

/// Social position scores for every node of the edge list.
#[pyfunction]
#[pyo3(signature = (edges, epsilon=0.85, tol=1e-9, max_iter=200))]
fn social_position(
    edges: Vec<(String, String, f64)>,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
) -> PyResult<BTreeMap<String, f64>> {
    let frame = frame_from_edges(&edges);
    let group = Group {
        frame_index: 0,
        group_id: "0:000".into(),
        members: frame.nodes.clone(),
    };
    let sp = importance::social_position(&group, &frame, epsilon, tol, max_iter).map_err(err)?;
    Ok(sp.scores)
}

/// Inclusion of g1 in g2; `ni` maps g1 members to importance scores and
/// defaults to uniform.
#[pyfunction]
#[pyo3(signature = (g1, g2, ni=None))]
fn inclusion(
    g1: Vec<String>,
    g2: Vec<String>,
    ni: Option<BTreeMap<String, f64>>,
) -> PyResult<f64> {
    let a = Group { frame_index: 0, group_id: "a".into(), members: g1.into_iter().collect() };
    let b = Group { frame_index: 1, group_id: "b".into(), members: g2.into_iter().collect() };
    let map = match ni {
        Some(scores) => ImportanceMap {
            frame_index: 0,
            group_id: "a".into(),
            scores: a
                .members
                .iter()
                .map(|m| (m.clone(), scores.get(m).copied().unwrap_or(0.0)))
                .collect(),
            converged: true,
        },
        None => ImportanceMap::uniform(&a),
    };
    ged::inclusion(&a, &b, &map).map_err(err)
}

/// Classify every consecutive-frame transition of the given memberships
/// (one list of member lists per frame) with uniform importance. Returns
/// (from, to, event, inclusions) tuples; endpoints are (frame, group_id).
#[pyfunction]
#[pyo3(signature = (frames, alpha=0.5, beta=0.5))]
fn classify_events(
    frames: Vec<Vec<Vec<String>>>,
    alpha: f64,
    beta: f64,
) -> PyResult<Vec<PyEdge>> {
    let groups = groups_from_python(frames);
    let ni = uniform_ni(&groups);
    let params = GedParams::new(alpha, beta).map_err(err)?;
    let outcome = ged::build_evolution_graph(&groups, &ni, &params).map_err(err)?;
    Ok(edges_to_python(&outcome.edges))
}

/// Full evaluation from memberships: events, 4-step sequences, stratified
/// cross-validation. Returns a dict with weighted_f, per_class and the
/// confusion matrix.
#[pyfunction]
#[pyo3(signature = (frames, classifier="tree", alpha=0.5, beta=0.5, seed=0, folds=10))]
fn evaluate(
    py: Python<'_>,
    frames: Vec<Vec<Vec<String>>>,
    classifier: &str,
    alpha: f64,
    beta: f64,
    seed: u64,
    folds: usize,
) -> PyResult<Py<PyAny>> {
    let groups = groups_from_python(frames);
    let ni = uniform_ni(&groups);
    let params = GedParams::new(alpha, beta).map_err(err)?;
    let outcome = ged::build_evolution_graph(&groups, &ni, &params).map_err(err)?;
    let sizes = evochain::size_table(&ged::group_table(&groups));
    let extracted = evochain::extract_instances(&outcome.edges, &sizes, &ExtractOptions::default())
        .map_err(err)?;
    let dataset = Dataset::from_instances(&extracted.instances).map_err(err)?;
    let spec = ClassifierSpec::new(ClassifierKind::parse(classifier).map_err(err)?, seed);
    let report = learn::cross_validate(&dataset, &spec, folds).map_err(err)?;

    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("weighted_f", report.weighted_f)?;
    dict.set_item("instances", dataset.len())?;
    let per_class = pyo3::types::PyDict::new(py);
    for (c, m) in report.per_class.iter().enumerate() {
        let entry = pyo3::types::PyDict::new(py);
        entry.set_item("precision", m.precision)?;
        entry.set_item("recall", m.recall)?;
        entry.set_item("f", m.f)?;
        entry.set_item("support", m.support)?;
        per_class.set_item(learn::class_name(c), entry)?;
    }
    dict.set_item("per_class", per_class)?;
    let confusion: Vec<Vec<usize>> = (0..NUM_CLASSES)
        .map(|i| report.confusion.counts[i].to_vec())
        .collect();
    dict.set_item("confusion", confusion)?;
    Ok(dict.into())
}

/// Realize an evolution script. Returns (frames, intended_events) where
/// frames is a list per frame of (group_id, members).
#[pyfunction]
#[pyo3(signature = (script, seed=0))]
fn plant_script(
    script: &str,
    seed: u64,
) -> PyResult<(Vec<Vec<(String, Vec<String>)>>, Vec<PyEdge>)> {
    let parsed = EvolutionScript::parse(script).map_err(err)?;
    let planted = synth::plant_memberships(&parsed, seed).map_err(err)?;
    let frames = planted
        .frames
        .into_iter()
        .map(|groups| {
            groups
                .into_iter()
                .map(|g| (g.group_id, g.members.into_iter().collect()))
                .collect()
        })
        .collect();
    Ok((frames, edges_to_python(&planted.intended)))
}

/// The seven event names in canonical order.
#[pyfunction]
fn event_names() -> Vec<&'static str> {
    EventType::ALL.iter().map(|e| e.name()).collect()
}

#[pymodule]
fn groupevo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(window, m)?)?;
    m.add_function(wrap_pyfunction!(cpm_communities, m)?)?;
    m.add_function(wrap_pyfunction!(social_position, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion, m)?)?;
    m.add_function(wrap_pyfunction!(classify_events, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(plant_script, m)?)?;
    m.add_function(wrap_pyfunction!(event_names, m)?)?;
    Ok(())
}
