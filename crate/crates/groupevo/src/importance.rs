//! Per-group node importance feeding the inclusion quality factor.

use std::collections::BTreeMap;

use crate::communities::Group;
use crate::tsn::{NodeId, Timeframe};
use crate::{Error, Result};

/// Importance scores for the members of one group.
#[derive(Debug, Clone)]
pub struct ImportanceMap {
    pub frame_index: usize,
    pub group_id: String,
    pub scores: BTreeMap<NodeId, f64>,
    /// False when the fixed-point iteration hit max_iter before tol.
    pub converged: bool,
}

impl ImportanceMap {
    pub fn uniform(group: &Group) -> ImportanceMap {
        ImportanceMap {
            frame_index: group.frame_index,
            group_id: group.group_id.clone(),
            scores: group.members.iter().map(|m| (m.clone(), 1.0)).collect(),
            converged: true,
        }
    }

    pub fn total(&self) -> f64 {
        self.scores.values().sum()
    }
}

/// Which subgraph importance is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// The group's induced subgraph (default).
    Group,
    /// The whole frame, restricted to member scores afterwards.
    Frame,
}

/// Social position: the fixed point of
/// `SP(x) = (1 - eps) + eps * sum over y->x of SP(y) * C(y, x)`
/// where the commitment `C(y, x)` is y's out-weight share toward x.
/// Members without out-edges contribute nothing; the `(1 - eps)` base term
/// keeps every score positive and bounded.
pub fn social_position(
    group: &Group,
    frame: &Timeframe,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ImportanceMap> {
    social_position_scoped(group, frame, epsilon, tol, max_iter, Scope::Group)
}

pub fn social_position_scoped(
    group: &Group,
    frame: &Timeframe,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
    scope: Scope,
) -> Result<ImportanceMap> {
    if group.members.is_empty() {
        return Err(Error::EmptyInput("group has no members".into()));
    }
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::InvalidArgument("epsilon must be in (0,1)".into()));
    }
    if tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidArgument("tol and max_iter must be positive".into()));
    }
    let sub = match scope {
        Scope::Group => frame.induced(&group.members),
        Scope::Frame => frame.clone(),
    };
    let nodes: Vec<NodeId> = sub.nodes.iter().cloned().collect();
    let index: BTreeMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let n = nodes.len();

    // commitment edges y -> x with weight share of y's total out-weight;
    // all-zero out rows are dangling
    let mut out_total = vec![0.0f64; n];
    for ((s, _), w) in &sub.edges {
        out_total[index[s.as_str()]] += w;
    }
    let mut commit: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n]; // indexed by target
    for ((s, t), w) in &sub.edges {
        let si = index[s.as_str()];
        if out_total[si] > 0.0 && *w > 0.0 {
            commit[index[t.as_str()]].push((si, w / out_total[si]));
        }
    }

    let mut sp = vec![1.0f64; n];
    let mut converged = false;
    for _ in 0..max_iter {
        let mut next = vec![0.0f64; n];
        for x in 0..n {
            let inflow: f64 = commit[x].iter().map(|&(y, c)| sp[y] * c).sum();
            next[x] = (1.0 - epsilon) + epsilon * inflow;
        }
        let max_change = sp
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        sp = next;
        if max_change < tol {
            converged = true;
            break;
        }
    }

    let scores = group
        .members
        .iter()
        .map(|m| {
            let v = index.get(m.as_str()).map(|&i| sp[i]).unwrap_or(1.0 - epsilon);
            (m.clone(), v)
        })
        .collect();
    Ok(ImportanceMap {
        frame_index: group.frame_index,
        group_id: group.group_id.clone(),
        scores,
        converged,
    })
}

/// Unweighted in-degree + out-degree within the induced subgraph.
pub fn degree_importance(group: &Group, frame: &Timeframe) -> Result<ImportanceMap> {
    if group.members.is_empty() {
        return Err(Error::EmptyInput("group has no members".into()));
    }
    let sub = frame.induced(&group.members);
    let mut scores: BTreeMap<NodeId, f64> =
        group.members.iter().map(|m| (m.clone(), 0.0)).collect();
    for (s, t) in sub.edges.keys() {
        *scores.get_mut(s).unwrap() += 1.0;
        *scores.get_mut(t).unwrap() += 1.0;
    }
    Ok(ImportanceMap {
        frame_index: group.frame_index,
        group_id: group.group_id.clone(),
        scores,
        converged: true,
    })
}
