//! Synthetic temporal networks with scripted ground-truth evolution
//! events, plus an independent transcription of the event rules used to
//! re-derive ground truth when churn perturbs memberships.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::communities::Group;
use crate::ged::{EventType, EvolutionEdge};
use crate::learn::derive_seed;
use crate::tsn::Interaction;
use crate::{Error, Result};

/// Seconds per script frame in emitted interaction logs.
pub const FRAME_SECONDS: i64 = 86_400;

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Form { name: String, size: usize },
    Continue { name: String },
    Grow { name: String, count: usize },
    Shrink { name: String, count: usize },
    Split { name: String, parts: Vec<(String, usize)> },
    Merge { parents: Vec<String>, child: String },
    Dissolve { name: String },
}

/// A scripted evolution scenario.
#[derive(Debug, Clone)]
pub struct EvolutionScript {
    pub frames: usize,
    /// Per-member probability of being swapped for a fresh node each frame.
    pub churn: f64,
    /// (frame, directive); the directive describes the transition into
    /// that frame. Groups alive in the previous frame and not consumed by
    /// a directive carry over unchanged.
    pub directives: Vec<(usize, Directive)>,
    pub min_size: usize,
}

impl EvolutionScript {
    pub fn new(frames: usize) -> EvolutionScript {
        EvolutionScript { frames, churn: 0.0, directives: Vec::new(), min_size: 3 }
    }

    pub fn push(&mut self, frame: usize, directive: Directive) -> &mut Self {
        self.directives.push((frame, directive));
        self
    }

    /// Parse the line-oriented script format:
    ///
    /// ```text
    /// frames 6
    /// churn 0.1
    /// frame 0: form g1 8
    /// frame 2: grow g1 3
    /// frame 3: split g1 a:5 b:6
    /// frame 4: merge a b c
    /// frame 5: dissolve c
    /// ```
    pub fn parse(text: &str) -> Result<EvolutionScript> {
        let mut script = EvolutionScript::new(0);
        let mut frames_seen = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: lineno, message };
            if let Some(rest) = line.strip_prefix("frames ") {
                script.frames = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad frame count {rest:?}")))?;
                frames_seen = true;
                continue;
            }
            if let Some(rest) = line.strip_prefix("churn ") {
                let churn: f64 = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad churn {rest:?}")))?;
                if !(0.0..1.0).contains(&churn) {
                    return Err(err("churn must be in [0,1)".into()));
                }
                script.churn = churn;
                continue;
            }
            let Some(rest) = line.strip_prefix("frame ") else {
                return Err(err(format!("unrecognized line {line:?}")));
            };
            let Some((frame_str, body)) = rest.split_once(':') else {
                return Err(err("expected `frame <n>: <directive>`".into()));
            };
            let frame: usize = frame_str
                .trim()
                .parse()
                .map_err(|_| err(format!("bad frame number {frame_str:?}")))?;
            let tokens: Vec<&str> = body.split_whitespace().collect();
            let directive = parse_directive(&tokens).map_err(err)?;
            script.directives.push((frame, directive));
        }
        if !frames_seen {
            return Err(Error::Parse { line: 0, message: "missing `frames <n>` header".into() });
        }
        Ok(script)
    }
}

fn parse_directive(tokens: &[&str]) -> std::result::Result<Directive, String> {
    match tokens {
        ["form", name, size] => Ok(Directive::Form {
            name: name.to_string(),
            size: size.parse().map_err(|_| format!("bad size {size:?}"))?,
        }),
        ["continue", name] => Ok(Directive::Continue { name: name.to_string() }),
        ["grow", name, count] => Ok(Directive::Grow {
            name: name.to_string(),
            count: count.parse().map_err(|_| format!("bad count {count:?}"))?,
        }),
        ["shrink", name, count] => Ok(Directive::Shrink {
            name: name.to_string(),
            count: count.parse().map_err(|_| format!("bad count {count:?}"))?,
        }),
        ["split", name, parts @ ..] if !parts.is_empty() => {
            let parts = parts
                .iter()
                .map(|p| {
                    let (child, size) = p
                        .split_once(':')
                        .ok_or_else(|| format!("expected child:size, got {p:?}"))?;
                    Ok((
                        child.to_string(),
                        size.parse().map_err(|_| format!("bad size {size:?}"))?,
                    ))
                })
                .collect::<std::result::Result<Vec<(String, usize)>, String>>()?;
            if parts.len() < 2 {
                return Err("split needs at least two children".into());
            }
            Ok(Directive::Split { name: name.to_string(), parts })
        }
        ["merge", rest @ ..] if rest.len() >= 3 => {
            let parents = rest[..rest.len() - 1].iter().map(|s| s.to_string()).collect();
            Ok(Directive::Merge { parents, child: rest[rest.len() - 1].to_string() })
        }
        ["dissolve", name] => Ok(Directive::Dissolve { name: name.to_string() }),
        _ => Err(format!("unrecognized directive {tokens:?}")),
    }
}

/// Planted membership tables plus the intended event list.
#[derive(Debug, Clone)]
pub struct PlantedNetwork {
    /// One vector of groups per frame, group_id = script group name.
    pub frames: Vec<Vec<Group>>,
    /// The events the directives intended (before churn).
    pub intended: Vec<EvolutionEdge>,
}

fn edge(
    from: Option<(usize, &str)>,
    to: Option<(usize, &str)>,
    event: EventType,
) -> EvolutionEdge {
    EvolutionEdge {
        from: from.map(|(f, id)| (f, id.to_string())),
        to: to.map(|(f, id)| (f, id.to_string())),
        event,
        inclusions: None,
    }
}

/// Realize the script deterministically. Fresh nodes come from a
/// script-scoped counter; churn (when non-zero) swaps members for fresh
/// nodes after each frame's directives, driven by the seed.
pub fn plant_memberships(script: &EvolutionScript, seed: u64) -> Result<PlantedNetwork> {
    if script.frames == 0 {
        return Err(Error::InvalidArgument("script has zero frames".into()));
    }
    let mut counter = 0usize;
    let fresh = |counter: &mut usize| {
        let id = format!("n{:06}", *counter);
        *counter += 1;
        id
    };

    let mut by_frame: Vec<BTreeMap<String, BTreeSet<String>>> =
        vec![BTreeMap::new(); script.frames];
    let mut intended = Vec::new();

    for f in 0..script.frames {
        // carry-over set: groups of the previous frame, minus ones a
        // directive consumes at this frame
        let mut carried: BTreeMap<String, BTreeSet<String>> = if f > 0 {
            by_frame[f - 1].clone()
        } else {
            BTreeMap::new()
        };
        let mut placed: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut consumed: BTreeSet<String> = BTreeSet::new();

        let directives: Vec<&Directive> = script
            .directives
            .iter()
            .filter(|(df, _)| *df == f)
            .map(|(_, d)| d)
            .collect();
        for d in directives {
            let take_parent = |carried: &BTreeMap<String, BTreeSet<String>>,
                               consumed: &BTreeSet<String>,
                               name: &str|
             -> Result<BTreeSet<String>> {
                if consumed.contains(name) {
                    return Err(Error::InvalidArgument(format!(
                        "frame {f}: group {name} already consumed by another directive"
                    )));
                }
                carried.get(name).cloned().ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "frame {f}: directive references dead group {name}"
                    ))
                })
            };
            match d {
                Directive::Form { name, size } => {
                    if *size < script.min_size {
                        return Err(Error::InvalidArgument(format!(
                            "frame {f}: group {name} formed below minimum size {}",
                            script.min_size
                        )));
                    }
                    if f > 0 && carried.contains_key(name) {
                        return Err(Error::InvalidArgument(format!(
                            "frame {f}: group {name} already exists"
                        )));
                    }
                    let members: BTreeSet<String> =
                        (0..*size).map(|_| fresh(&mut counter)).collect();
                    placed.insert(name.clone(), members);
                    if f > 0 {
                        intended.push(edge(None, Some((f, name)), EventType::Forming));
                    }
                }
                Directive::Continue { name } => {
                    let members = take_parent(&carried, &consumed, name)?;
                    consumed.insert(name.clone());
                    placed.insert(name.clone(), members);
                    intended.push(edge(
                        Some((f - 1, name)),
                        Some((f, name)),
                        EventType::Continuing,
                    ));
                }
                Directive::Grow { name, count } => {
                    let mut members = take_parent(&carried, &consumed, name)?;
                    consumed.insert(name.clone());
                    for _ in 0..*count {
                        members.insert(fresh(&mut counter));
                    }
                    placed.insert(name.clone(), members);
                    intended.push(edge(
                        Some((f - 1, name)),
                        Some((f, name)),
                        EventType::Growing,
                    ));
                }
                Directive::Shrink { name, count } => {
                    let members = take_parent(&carried, &consumed, name)?;
                    consumed.insert(name.clone());
                    if members.len() < count + script.min_size {
                        return Err(Error::InvalidArgument(format!(
                            "frame {f}: shrinking {name} below minimum size"
                        )));
                    }
                    let keep = members.len() - count;
                    let members: BTreeSet<String> = members.into_iter().take(keep).collect();
                    placed.insert(name.clone(), members);
                    intended.push(edge(
                        Some((f - 1, name)),
                        Some((f, name)),
                        EventType::Shrinking,
                    ));
                }
                Directive::Split { name, parts } => {
                    let members = take_parent(&carried, &consumed, name)?;
                    consumed.insert(name.clone());
                    let total: usize = parts.iter().map(|(_, s)| s).sum();
                    if total != members.len() {
                        return Err(Error::InvalidArgument(format!(
                            "frame {f}: split sizes sum to {total}, group {name} has {}",
                            members.len()
                        )));
                    }
                    let mut pool = members.into_iter();
                    for (child, size) in parts {
                        if *size < script.min_size {
                            return Err(Error::InvalidArgument(format!(
                                "frame {f}: split child {child} below minimum size"
                            )));
                        }
                        let part: BTreeSet<String> = pool.by_ref().take(*size).collect();
                        placed.insert(child.clone(), part);
                        intended.push(edge(
                            Some((f - 1, name)),
                            Some((f, child)),
                            EventType::Splitting,
                        ));
                    }
                }
                Directive::Merge { parents, child } => {
                    let mut union = BTreeSet::new();
                    for p in parents {
                        let members = take_parent(&carried, &consumed, p)?;
                        consumed.insert(p.clone());
                        union.extend(members);
                        intended.push(edge(
                            Some((f - 1, p)),
                            Some((f, child)),
                            EventType::Merging,
                        ));
                    }
                    placed.insert(child.clone(), union);
                }
                Directive::Dissolve { name } => {
                    take_parent(&carried, &consumed, name)?;
                    consumed.insert(name.clone());
                    intended.push(edge(Some((f - 1, name)), None, EventType::Dissolving));
                }
            }
        }
        for name in &consumed {
            carried.remove(name);
        }
        // implicit continuation of untouched groups
        for (name, members) in carried {
            if placed.contains_key(&name) {
                return Err(Error::InvalidArgument(format!(
                    "frame {f}: group {name} both carried over and produced by a directive"
                )));
            }
            intended.push(edge(
                Some((f - 1, &name)),
                Some((f, &name)),
                EventType::Continuing,
            ));
            placed.insert(name, members);
        }
        by_frame[f] = placed;
    }

    // churn after the fact, per frame, never below minimum size semantics:
    // a swap keeps the size, only identities change
    if script.churn > 0.0 {
        for f in 1..script.frames {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, f as u64));
            let frame = &mut by_frame[f];
            for members in frame.values_mut() {
                let originals: Vec<String> = members.iter().cloned().collect();
                for node in originals {
                    if rng.random_range(0.0..1.0) < script.churn {
                        members.remove(&node);
                        members.insert(fresh(&mut counter));
                    }
                }
            }
        }
    }

    let frames = by_frame
        .into_iter()
        .enumerate()
        .map(|(f, groups)| {
            groups
                .into_iter()
                .map(|(name, members)| Group { frame_index: f, group_id: name, members })
                .collect()
        })
        .collect();
    Ok(PlantedNetwork { frames, intended })
}

/// Direct transcription of the event rules, kept independent of the
/// production classifier so the two can cross-check each other.
///
/// `i12`/`i21` are the two inclusions, `m1` the number of next-frame
/// matches of the earlier group, `m2` the number of previous-frame matches
/// of the later group. The one-match / many-match qualifier distributes
/// over both threshold-mixed clauses of the shrink/split and grow/merge
/// rules, and the equal-size mixed case belongs to the earlier group's
/// rules.
#[allow(clippy::too_many_arguments)]
pub fn oracle_classify_pair(
    i12: f64,
    i21: f64,
    s1: usize,
    s2: usize,
    m1: usize,
    m2: usize,
    alpha: f64,
    beta: f64,
) -> Option<EventType> {
    // rule a
    if i12 >= alpha && i21 >= beta && s1 == s2 {
        return Some(EventType::Continuing);
    }
    // rule b
    if (i12 >= alpha && i21 >= beta && s1 > s2)
        || (i12 < alpha && i21 >= beta && s1 >= s2 && m1 == 1)
        || (i12 >= alpha && i21 < beta && s1 >= s2 && m1 == 1)
    {
        return Some(EventType::Shrinking);
    }
    // rule c
    if (i12 >= alpha && i21 >= beta && s1 < s2)
        || (i12 >= alpha && i21 < beta && s1 < s2 && m2 == 1)
        || (i12 < alpha && i21 >= beta && s1 < s2 && m2 == 1)
    {
        return Some(EventType::Growing);
    }
    // rule d
    if (i12 < alpha && i21 >= beta && s1 >= s2 && m1 > 1)
        || (i12 >= alpha && i21 < beta && s1 >= s2 && m1 > 1)
    {
        return Some(EventType::Splitting);
    }
    // rule e
    if (i12 >= alpha && i21 < beta && s1 < s2 && m2 > 1)
        || (i12 < alpha && i21 >= beta && s1 < s2 && m2 > 1)
    {
        return Some(EventType::Merging);
    }
    None
}

fn oracle_inclusion(g1: &BTreeSet<String>, g2: &BTreeSet<String>) -> f64 {
    // uniform importance collapses the quality factor onto the quantity
    // factor, so I(G1, G2) = (|overlap| / |G1|)^2
    let overlap = g1.intersection(g2).count() as f64;
    let q = overlap / g1.len() as f64;
    q * q
}

/// Re-derive ground-truth events from realized memberships with uniform
/// importance, via the oracle transcription.
pub fn derive_realized_events(
    frames: &[Vec<Group>],
    alpha: f64,
    beta: f64,
) -> Vec<EvolutionEdge> {
    let mut out = Vec::new();
    for pair in frames.windows(2) {
        let (earlier, later) = (&pair[0], &pair[1]);
        let inc: Vec<Vec<(f64, f64)>> = earlier
            .iter()
            .map(|g1| {
                later
                    .iter()
                    .map(|g2| {
                        (
                            oracle_inclusion(&g1.members, &g2.members),
                            oracle_inclusion(&g2.members, &g1.members),
                        )
                    })
                    .collect()
            })
            .collect();
        let m1: Vec<usize> = (0..earlier.len())
            .map(|i| {
                (0..later.len())
                    .filter(|&j| inc[i][j].0 >= alpha || inc[i][j].1 >= beta)
                    .count()
            })
            .collect();
        let m2: Vec<usize> = (0..later.len())
            .map(|j| {
                (0..earlier.len())
                    .filter(|&i| inc[i][j].0 >= alpha || inc[i][j].1 >= beta)
                    .count()
            })
            .collect();
        for (i, g1) in earlier.iter().enumerate() {
            for (j, g2) in later.iter().enumerate() {
                if let Some(event) = oracle_classify_pair(
                    inc[i][j].0,
                    inc[i][j].1,
                    g1.size(),
                    g2.size(),
                    m1[i],
                    m2[j],
                    alpha,
                    beta,
                ) {
                    out.push(edge(
                        Some((g1.frame_index, g1.group_id.as_str())),
                        Some((g2.frame_index, g2.group_id.as_str())),
                        event,
                    ));
                }
            }
        }
        for (i, g1) in earlier.iter().enumerate() {
            if (0..later.len()).all(|j| inc[i][j].0 < 0.10 && inc[i][j].1 < 0.10) {
                out.push(edge(
                    Some((g1.frame_index, g1.group_id.as_str())),
                    None,
                    EventType::Dissolving,
                ));
            }
        }
        for (j, g2) in later.iter().enumerate() {
            if (0..earlier.len()).all(|i| inc[i][j].0 < 0.10 && inc[i][j].1 < 0.10) {
                out.push(edge(
                    None,
                    Some((g2.frame_index, g2.group_id.as_str())),
                    EventType::Forming,
                ));
            }
        }
    }
    out
}

/// Emit a stochastic interaction log realizing the planted memberships:
/// intra-group pairs appear with `p_intra`, cross-group pairs with
/// `p_inter`, both directions at unit weight, timestamps uniform in the
/// frame interval.
pub fn emit_edges(
    frames: &[Vec<Group>],
    p_intra: f64,
    p_inter: f64,
    seed: u64,
) -> Result<Vec<Interaction>> {
    if !(0.0..=1.0).contains(&p_intra) || !(0.0..=p_intra).contains(&p_inter) {
        return Err(Error::InvalidArgument(
            "probabilities must satisfy 0 <= p_inter <= p_intra <= 1".into(),
        ));
    }
    let mut out = Vec::new();
    for (f, groups) in frames.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x1000_0000 + f as u64));
        let nodes: BTreeSet<&String> = groups.iter().flat_map(|g| g.members.iter()).collect();
        let nodes: Vec<&String> = nodes.into_iter().collect();
        let start = f as i64 * FRAME_SECONDS;
        let mut membership: BTreeMap<&String, BTreeSet<usize>> = BTreeMap::new();
        for (gi, g) in groups.iter().enumerate() {
            for m in &g.members {
                membership.entry(m).or_default().insert(gi);
            }
        }
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                let (u, v) = (nodes[i], nodes[j]);
                let shared = !membership[u].is_disjoint(&membership[v]);
                let p = if shared { p_intra } else { p_inter };
                if p > 0.0 && rng.random_range(0.0..1.0) < p {
                    let ts1 = start + rng.random_range(0..FRAME_SECONDS);
                    let ts2 = start + rng.random_range(0..FRAME_SECONDS);
                    out.push(Interaction {
                        source: u.clone(),
                        target: v.clone(),
                        timestamp: ts1,
                        weight: 1.0,
                    });
                    out.push(Interaction {
                        source: v.clone(),
                        target: u.clone(),
                        timestamp: ts2,
                        weight: 1.0,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuing_script_yields_continuing_edges() {
        let mut script = EvolutionScript::new(5);
        script.push(0, Directive::Form { name: "g".into(), size: 8 });
        let planted = plant_memberships(&script, 1).unwrap();
        let continuing: Vec<_> = planted
            .intended
            .iter()
            .filter(|e| e.event == EventType::Continuing)
            .collect();
        assert_eq!(continuing.len(), 4);
        assert_eq!(planted.frames[4][0].size(), 8);
    }

    #[test]
    fn split_script_yields_two_splitting_edges() {
        let mut script = EvolutionScript::new(3);
        script.push(0, Directive::Form { name: "g".into(), size: 10 });
        script.push(2, Directive::Split {
            name: "g".into(),
            parts: vec![("a".into(), 5), ("b".into(), 5)],
        });
        let planted = plant_memberships(&script, 1).unwrap();
        let splits: Vec<_> = planted
            .intended
            .iter()
            .filter(|e| e.event == EventType::Splitting)
            .collect();
        assert_eq!(splits.len(), 2);
        assert_eq!(planted.frames[2].len(), 2);
    }

    #[test]
    fn dead_group_reference_is_an_error() {
        let mut script = EvolutionScript::new(3);
        script.push(0, Directive::Form { name: "g".into(), size: 6 });
        script.push(1, Directive::Dissolve { name: "g".into() });
        script.push(2, Directive::Grow { name: "g".into(), count: 2 });
        assert!(plant_memberships(&script, 1).is_err());
    }

    #[test]
    fn minimum_size_enforced() {
        let mut script = EvolutionScript::new(2);
        script.push(0, Directive::Form { name: "g".into(), size: 2 });
        assert!(plant_memberships(&script, 1).is_err());
        let mut script = EvolutionScript::new(2);
        script.push(0, Directive::Form { name: "g".into(), size: 6 });
        script.push(1, Directive::Shrink { name: "g".into(), count: 5 });
        assert!(plant_memberships(&script, 1).is_err());
    }

    #[test]
    fn determinism_under_seed() {
        let mut script = EvolutionScript::new(6);
        script.churn = 0.2;
        script.push(0, Directive::Form { name: "g".into(), size: 10 });
        let a = plant_memberships(&script, 9).unwrap();
        let b = plant_memberships(&script, 9).unwrap();
        for (fa, fb) in a.frames.iter().zip(&b.frames) {
            assert_eq!(fa, fb);
        }
        let ea = emit_edges(&a.frames, 0.9, 0.01, 9).unwrap();
        let eb = emit_edges(&b.frames, 0.9, 0.01, 9).unwrap();
        assert_eq!(ea, eb);
    }

    #[test]
    fn full_probability_makes_cliques() {
        let mut script = EvolutionScript::new(1);
        script.push(0, Directive::Form { name: "g".into(), size: 5 });
        let planted = plant_memberships(&script, 3).unwrap();
        let edges = emit_edges(&planted.frames, 1.0, 0.0, 3).unwrap();
        // 5 choose 2 pairs, both directions
        assert_eq!(edges.len(), 20);
    }

    #[test]
    fn zero_probability_is_silence() {
        let mut script = EvolutionScript::new(1);
        script.push(0, Directive::Form { name: "g".into(), size: 5 });
        let planted = plant_memberships(&script, 3).unwrap();
        let edges = emit_edges(&planted.frames, 0.0, 0.0, 3).unwrap();
        assert!(edges.is_empty());
    }

    #[test]
    fn script_round_trip_through_parser() {
        let text = "\
frames 4
churn 0.0
frame 0: form g1 8
frame 0: form g2 6
frame 1: grow g1 3
frame 2: split g1 a:6 b:5
frame 3: merge a b m
";
        let script = EvolutionScript::parse(text).unwrap();
        assert_eq!(script.frames, 4);
        assert_eq!(script.directives.len(), 5);
        let planted = plant_memberships(&script, 1).unwrap();
        assert_eq!(planted.frames[3].len(), 2); // m and g2
    }

    #[test]
    fn parser_rejects_bad_lines() {
        assert!(EvolutionScript::parse("frame 0: form g 8\n").is_err()); // no frames header
        assert!(EvolutionScript::parse("frames 2\nfrme 0: form g 8\n").is_err());
        assert!(EvolutionScript::parse("frames 2\nframe 0: split g a\n").is_err());
    }

    #[test]
    fn zero_churn_realized_events_match_intended() {
        let mut script = EvolutionScript::new(5);
        script.push(0, Directive::Form { name: "g1".into(), size: 8 });
        script.push(0, Directive::Form { name: "g2".into(), size: 6 });
        script.push(2, Directive::Grow { name: "g1".into(), count: 4 });
        script.push(3, Directive::Shrink { name: "g2".into(), count: 3 });
        script.push(4, Directive::Dissolve { name: "g1".into() });
        let planted = plant_memberships(&script, 1).unwrap();
        let realized = derive_realized_events(&planted.frames, 0.5, 0.5);
        let as_set = |edges: &[EvolutionEdge]| -> BTreeSet<(Option<(usize, String)>, Option<(usize, String)>, EventType)> {
            edges
                .iter()
                .map(|e| (e.from.clone(), e.to.clone(), e.event))
                .collect()
        };
        assert_eq!(as_set(&planted.intended), as_set(&realized));
    }
}
