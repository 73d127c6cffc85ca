//! Reconstruction of per-group evolution chains and extraction of the
//! 4-step classification instances: four group sizes and three pair
//! events predicting the group's next event.

use std::collections::{BTreeMap, BTreeSet};

use crate::ged::{EventType, EvolutionEdge};
use crate::{Error, Result};

/// One classification case: the sizes of a group at four consecutive
/// frames, the three events between them, and the next event as target.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceInstance {
    pub size_t3: usize,
    pub event_32: EventType,
    pub size_t2: usize,
    pub event_21: EventType,
    pub size_t1: usize,
    pub event_10: EventType,
    pub size_t0: usize,
    /// Any of the six target classes (Forming excluded: it can only start
    /// a sequence).
    pub label: EventType,
    /// (frame, group_id) from the oldest chain step to the newest.
    pub provenance: Vec<(usize, String)>,
}

/// How a group with several outgoing pair events at the label step is
/// turned into instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPolicy {
    /// One instance per group, label picked by fixed priority
    /// (Continuing > Shrinking > Growing > Splitting > Merging).
    Priority,
    /// One instance per distinct outgoing event type.
    All,
}

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub steps: usize,
    pub label_policy: LabelPolicy,
    /// Max distinct backward chains per terminal group.
    pub chain_cap: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { steps: 4, label_policy: LabelPolicy::Priority, chain_cap: 64 }
    }
}

/// Extraction result plus bookkeeping for the run manifest.
#[derive(Debug, Clone, Default)]
pub struct ExtractOutcome {
    pub instances: Vec<SequenceInstance>,
    /// Terminal groups whose backward chain enumeration hit the cap.
    pub cap_hits: Vec<(usize, String)>,
}

/// A variable-length sequence case, for step counts other than 4.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRecord {
    /// Group sizes oldest-first, `steps` of them.
    pub sizes: Vec<usize>,
    /// Events between consecutive steps, `steps - 1` of them.
    pub events: Vec<EventType>,
    pub label: EventType,
    pub provenance: Vec<(usize, String)>,
}

#[derive(Debug, Clone, Default)]
pub struct ExtractRecordsOutcome {
    pub records: Vec<ChainRecord>,
    pub cap_hits: Vec<(usize, String)>,
}

pub type SizeTable = BTreeMap<(usize, String), usize>;

pub fn size_table(groups: &BTreeMap<(usize, String), BTreeSet<String>>) -> SizeTable {
    groups.iter().map(|(k, v)| (k.clone(), v.len())).collect()
}

const LABEL_PRIORITY: [EventType; 5] = [
    EventType::Continuing,
    EventType::Shrinking,
    EventType::Growing,
    EventType::Splitting,
    EventType::Merging,
];

/// Extract all 4-step instances from an evolution graph.
///
/// A group G at frame n yields instances when it has an outgoing event to
/// frame n+1 (the label) and at least one complete backward chain of pair
/// events reaching frame n-(steps-1). Backward branching (merges) yields
/// one instance per distinct chain, capped deterministically.
pub fn extract_instances(
    evolution: &[EvolutionEdge],
    sizes: &SizeTable,
    options: &ExtractOptions,
) -> Result<ExtractOutcome> {
    if options.steps != 4 {
        return Err(Error::InvalidArgument(
            "typed instances are 4-step; use extract_chain_records for other step counts".into(),
        ));
    }
    let generic = extract_chain_records(evolution, sizes, options)?;
    let instances = generic
        .records
        .into_iter()
        .map(|r| SequenceInstance {
            size_t3: r.sizes[0],
            event_32: r.events[0],
            size_t2: r.sizes[1],
            event_21: r.events[1],
            size_t1: r.sizes[2],
            event_10: r.events[2],
            size_t0: r.sizes[3],
            label: r.label,
            provenance: r.provenance,
        })
        .collect();
    Ok(ExtractOutcome { instances, cap_hits: generic.cap_hits })
}

/// Variable-step variant of [`extract_instances`].
pub fn extract_chain_records(
    evolution: &[EvolutionEdge],
    sizes: &SizeTable,
    options: &ExtractOptions,
) -> Result<ExtractRecordsOutcome> {
    if options.steps < 2 {
        return Err(Error::InvalidArgument("steps must be >= 2".into()));
    }
    let back_events = options.steps - 1;

    // incoming pair edges keyed by the later endpoint
    let mut incoming: BTreeMap<(usize, String), Vec<&EvolutionEdge>> = BTreeMap::new();
    // outgoing edges keyed by the earlier endpoint
    let mut outgoing: BTreeMap<(usize, String), Vec<&EvolutionEdge>> = BTreeMap::new();
    for e in evolution {
        if e.event.is_pair_event() {
            let to = e.to.as_ref().expect("pair event has both endpoints");
            incoming.entry(to.clone()).or_default().push(e);
        }
        if let Some(from) = &e.from {
            outgoing.entry(from.clone()).or_default().push(e);
        }
    }

    let mut out = ExtractRecordsOutcome::default();
    for (terminal, edges_out) in &outgoing {
        let labels = pick_labels(edges_out, options.label_policy);
        if labels.is_empty() {
            continue;
        }
        let (chains, capped) = backward_chains(terminal, &incoming, back_events, options.chain_cap);
        if capped {
            out.cap_hits.push(terminal.clone());
        }
        for chain in &chains {
            for &label in &labels {
                out.records.push(build_record(chain, label, sizes)?);
            }
        }
    }
    out.records.sort_by(|a, b| a.provenance.cmp(&b.provenance).then(a.label.cmp(&b.label)));
    Ok(out)
}

fn pick_labels(edges_out: &[&EvolutionEdge], policy: LabelPolicy) -> Vec<EventType> {
    let pair_events: BTreeSet<EventType> = edges_out
        .iter()
        .filter(|e| e.event.is_pair_event())
        .map(|e| e.event)
        .collect();
    if pair_events.is_empty() {
        // a group whose only relation forward is rule-f Dissolving
        if edges_out.iter().any(|e| e.event == EventType::Dissolving) {
            return vec![EventType::Dissolving];
        }
        return Vec::new();
    }
    match policy {
        LabelPolicy::Priority => {
            for ev in LABEL_PRIORITY {
                if pair_events.contains(&ev) {
                    return vec![ev];
                }
            }
            unreachable!("pair_events is non-empty and drawn from the priority set")
        }
        LabelPolicy::All => pair_events.iter().copied().collect(),
    }
}

/// Chain of (frame, group_id) nodes oldest-first, with the events between
/// consecutive nodes.
#[derive(Debug, Clone)]
struct Chain {
    nodes: Vec<(usize, String)>,
    events: Vec<EventType>,
}

fn backward_chains(
    terminal: &(usize, String),
    incoming: &BTreeMap<(usize, String), Vec<&EvolutionEdge>>,
    back_events: usize,
    cap: usize,
) -> (Vec<Chain>, bool) {
    // depth-first enumeration newest-to-oldest; incoming edge lists follow
    // the deterministic evolution-graph order, so chain order is stable
    let mut chains = Vec::new();
    let mut capped = false;
    let mut stack: Vec<(Vec<(usize, String)>, Vec<EventType>)> =
        vec![(vec![terminal.clone()], Vec::new())];
    while let Some((nodes, events)) = stack.pop() {
        if events.len() == back_events {
            if chains.len() >= cap {
                capped = true;
                break;
            }
            let mut nodes = nodes;
            let mut events = events;
            nodes.reverse();
            events.reverse();
            chains.push(Chain { nodes, events });
            continue;
        }
        let newest = nodes.last().unwrap();
        if let Some(preds) = incoming.get(newest) {
            // reversed so the stack pops predecessors in forward order
            for e in preds.iter().rev() {
                let from = e.from.as_ref().unwrap();
                // frames in a chain must step back by exactly one
                if from.0 + 1 != newest.0 {
                    continue;
                }
                let mut n2 = nodes.clone();
                let mut e2 = events.clone();
                n2.push(from.clone());
                e2.push(e.event);
                stack.push((n2, e2));
            }
        }
    }
    chains.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    (chains, capped)
}

fn build_record(chain: &Chain, label: EventType, sizes: &SizeTable) -> Result<ChainRecord> {
    let sizes = chain
        .nodes
        .iter()
        .map(|key| {
            sizes.get(key).copied().ok_or_else(|| {
                Error::InvalidArgument(format!("missing size for group {}:{}", key.0, key.1))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(ChainRecord {
        sizes,
        events: chain.events.clone(),
        label,
        provenance: chain.nodes.clone(),
    })
}
