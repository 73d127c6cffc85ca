//! Overlapping community extraction via k-clique percolation.

use std::collections::{BTreeMap, BTreeSet};

use crate::tsn::{NodeId, Timeframe};
use crate::{Error, Result};

/// A community detected in (or loaded for) one timeframe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub frame_index: usize,
    pub group_id: String,
    pub members: BTreeSet<NodeId>,
}

impl Group {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub fn make_group_id(frame_index: usize, rank: usize) -> String {
    format!("{frame_index}:{rank:03}")
}

/// Undirected adjacency over node indices, built from a symmetrized frame.
struct Adjacency {
    nodes: Vec<NodeId>,
    neighbors: Vec<BTreeSet<usize>>,
}

fn build_adjacency(frame: &Timeframe, min_weight: Option<f64>) -> Adjacency {
    let nodes: Vec<NodeId> = frame.nodes.iter().cloned().collect();
    let index: BTreeMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut neighbors = vec![BTreeSet::new(); nodes.len()];
    for ((s, t), w) in &frame.edges {
        if let Some(min) = min_weight {
            if *w < min {
                continue;
            }
        }
        let (a, b) = (index[s.as_str()], index[t.as_str()]);
        if a != b {
            neighbors[a].insert(b);
            neighbors[b].insert(a);
        }
    }
    Adjacency { nodes, neighbors }
}

fn bron_kerbosch(
    adj: &Adjacency,
    r: &mut Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        if r.len() >= 2 {
            out.push(r.clone());
        }
        return;
    }
    // pivot: vertex of P union X with the most neighbors in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&&u| adj.neighbors[u].intersection(&p).count())
        .copied();
    let candidates: Vec<usize> = match pivot {
        Some(u) => p.iter().filter(|v| !adj.neighbors[u].contains(v)).copied().collect(),
        None => p.iter().copied().collect(),
    };
    for v in candidates {
        r.push(v);
        let np: BTreeSet<usize> = p.intersection(&adj.neighbors[v]).copied().collect();
        let nx: BTreeSet<usize> = x.intersection(&adj.neighbors[v]).copied().collect();
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}

/// All maximal cliques of size >= 2 in the symmetrized frame, ordered
/// lexicographically by sorted member lists.
pub fn maximal_cliques(frame: &Timeframe) -> Vec<BTreeSet<NodeId>> {
    maximal_cliques_filtered(frame, None)
}

pub fn maximal_cliques_filtered(
    frame: &Timeframe,
    min_weight: Option<f64>,
) -> Vec<BTreeSet<NodeId>> {
    let adj = build_adjacency(frame, min_weight);
    let p: BTreeSet<usize> = (0..adj.nodes.len()).collect();
    let mut raw = Vec::new();
    bron_kerbosch(&adj, &mut Vec::new(), p, BTreeSet::new(), &mut raw);
    let mut cliques: Vec<BTreeSet<NodeId>> = raw
        .into_iter()
        .map(|c| c.into_iter().map(|i| adj.nodes[i].clone()).collect())
        .collect();
    cliques.sort();
    cliques
}

/// k-clique percolation communities of one frame.
///
/// Maximal cliques of size >= k are percolation units; two units belong to
/// the same community when they share at least k-1 nodes. This yields the
/// same communities as percolating individual k-cliques through (k-1)-node
/// overlaps.
pub fn cpm_communities(frame: &Timeframe, k: usize) -> Result<Vec<Group>> {
    cpm_communities_filtered(frame, k, None)
}

pub fn cpm_communities_filtered(
    frame: &Timeframe,
    k: usize,
    min_weight: Option<f64>,
) -> Result<Vec<Group>> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k must be >= 3, got {k}")));
    }
    let cliques: Vec<BTreeSet<NodeId>> = maximal_cliques_filtered(frame, min_weight)
        .into_iter()
        .filter(|c| c.len() >= k)
        .collect();
    let n = cliques.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if cliques[i].intersection(&cliques[j]).count() >= k - 1 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        by_root.entry(root).or_default().extend(cliques[i].iter().cloned());
    }
    let mut member_sets: Vec<BTreeSet<NodeId>> = by_root.into_values().collect();
    member_sets.sort_by(|a, b| {
        let av: Vec<&NodeId> = a.iter().collect();
        let bv: Vec<&NodeId> = b.iter().collect();
        av.cmp(&bv)
    });
    Ok(member_sets
        .into_iter()
        .enumerate()
        .map(|(rank, members)| Group {
            frame_index: frame.index,
            group_id: make_group_id(frame.index, rank),
            members,
        })
        .collect())
}

/// Assign stable ids to externally supplied member sets for one frame,
/// dropping duplicate sets.
///
/// Returns the groups plus the number of duplicates removed.
pub fn groups_from_member_sets(
    frame_index: usize,
    mut member_sets: Vec<BTreeSet<NodeId>>,
) -> (Vec<Group>, usize) {
    member_sets.sort();
    let before = member_sets.len();
    member_sets.dedup();
    let dropped = before - member_sets.len();
    let groups = member_sets
        .into_iter()
        .enumerate()
        .map(|(rank, members)| Group {
            frame_index,
            group_id: make_group_id(frame_index, rank),
            members,
        })
        .collect();
    (groups, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame_from_edges(pairs: &[(&str, &str)]) -> Timeframe {
        let mut edges = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        for (s, t) in pairs {
            edges.insert((s.to_string(), t.to_string()), 1.0);
            nodes.insert(s.to_string());
            nodes.insert(t.to_string());
        }
        Timeframe { index: 0, start: 0, end: 1, nodes, edges }
    }

    fn set(names: &[&str]) -> BTreeSet<NodeId> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn triangle_is_single_maximal_clique() {
        let f = frame_from_edges(&[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(maximal_cliques(&f), vec![set(&["a", "b", "c"])]);
    }

    #[test]
    fn path_has_two_edge_cliques() {
        let f = frame_from_edges(&[("a", "b"), ("b", "c")]);
        assert_eq!(maximal_cliques(&f), vec![set(&["a", "b"]), set(&["b", "c"])]);
    }

    #[test]
    fn complete_graph_on_five() {
        let names = ["a", "b", "c", "d", "e"];
        let mut pairs = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                pairs.push((names[i], names[j]));
            }
        }
        let f = frame_from_edges(&pairs);
        assert_eq!(maximal_cliques(&f), vec![set(&names)]);
    }

    #[test]
    fn empty_frame_yields_no_cliques() {
        let f = frame_from_edges(&[]);
        assert!(maximal_cliques(&f).is_empty());
        assert!(cpm_communities(&f, 3).unwrap().is_empty());
    }

    #[test]
    fn adjacent_triangles_merge_at_k3() {
        // two triangles sharing edge b-c
        let f = frame_from_edges(&[("a", "b"), ("b", "c"), ("a", "c"), ("b", "d"), ("c", "d")]);
        let groups = cpm_communities(&f, 3).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].members, set(&["a", "b", "c", "d"]));
        assert_eq!(groups[0].group_id, "0:000");
    }

    #[test]
    fn disjoint_triangles_stay_separate() {
        let f = frame_from_edges(&[
            ("a", "b"), ("b", "c"), ("a", "c"),
            ("x", "y"), ("y", "z"), ("x", "z"),
        ]);
        let groups = cpm_communities(&f, 3).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].members, set(&["a", "b", "c"]));
        assert_eq!(groups[1].members, set(&["x", "y", "z"]));
    }

    #[test]
    fn no_k_clique_means_no_groups() {
        let f = frame_from_edges(&[("a", "b"), ("b", "c"), ("a", "c")]);
        assert!(cpm_communities(&f, 4).unwrap().is_empty());
    }

    #[test]
    fn k_below_three_rejected() {
        let f = frame_from_edges(&[("a", "b")]);
        assert!(cpm_communities(&f, 2).is_err());
    }

    #[test]
    fn direction_is_ignored() {
        let fwd = frame_from_edges(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let rev = frame_from_edges(&[("b", "a"), ("c", "b"), ("a", "c")]);
        assert_eq!(cpm_communities(&fwd, 3).unwrap(), cpm_communities(&rev, 3).unwrap());
    }

    #[test]
    fn external_sets_deduplicated() {
        let (groups, dropped) =
            groups_from_member_sets(2, vec![set(&["a", "b", "c"]), set(&["a", "b", "c"])]);
        assert_eq!(groups.len(), 1);
        assert_eq!(dropped, 1);
        assert_eq!(groups[0].group_id, "2:000");
    }
}
