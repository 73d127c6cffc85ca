//! Temporal social network: interaction log parsing and timeframe windowing.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use crate::{Error, Result};

pub type NodeId = String;

/// One directed interaction between two actors.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    pub source: NodeId,
    pub target: NodeId,
    /// Seconds since the Unix epoch, UTC.
    pub timestamp: i64,
    pub weight: f64,
}

/// One snapshot window over the interaction log.
///
/// The interval is half-open `[start, end)` so a timestamp on a window
/// boundary belongs to exactly one side of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeframe {
    pub index: usize,
    pub start: i64,
    pub end: i64,
    pub nodes: BTreeSet<NodeId>,
    /// Aggregated weight per directed edge.
    pub edges: BTreeMap<(NodeId, NodeId), f64>,
}

impl Timeframe {
    pub fn out_weight(&self, node: &str) -> f64 {
        self.edges
            .iter()
            .filter(|((s, _), _)| s == node)
            .map(|(_, w)| w)
            .sum()
    }

    /// Restrict the frame to the given node set, keeping only edges with
    /// both endpoints inside it.
    pub fn induced(&self, members: &BTreeSet<NodeId>) -> Timeframe {
        let edges: BTreeMap<(NodeId, NodeId), f64> = self
            .edges
            .iter()
            .filter(|((s, t), _)| members.contains(s) && members.contains(t))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        Timeframe {
            index: self.index,
            start: self.start,
            end: self.end,
            nodes: members.clone(),
            edges,
        }
    }

    /// Undirected simple-graph view: an edge exists if either direction does.
    pub fn symmetrized_edges(&self) -> BTreeSet<(NodeId, NodeId)> {
        let mut out = BTreeSet::new();
        for (s, t) in self.edges.keys() {
            let (a, b) = if s < t { (s, t) } else { (t, s) };
            out.insert((a.clone(), b.clone()));
        }
        out
    }
}

/// An ordered list of timeframes sliced from one interaction log.
#[derive(Debug, Clone)]
pub struct TemporalSocialNetwork {
    pub frames: Vec<Timeframe>,
    pub window_len: i64,
    pub overlap: i64,
}

/// Column layout of a delimiter-separated interaction log.
#[derive(Debug, Clone)]
pub struct LogFormat {
    pub delimiter: u8,
    pub has_header: bool,
    /// Stop after collecting this many row errors.
    pub error_cap: usize,
}

impl Default for LogFormat {
    fn default() -> Self {
        LogFormat {
            delimiter: b',',
            has_header: false,
            error_cap: 20,
        }
    }
}

/// Outcome of a parse: interactions plus row-level diagnostics.
#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub interactions: Vec<Interaction>,
    pub self_loops_dropped: usize,
    /// (line number, message) for rows that failed to parse.
    pub row_errors: Vec<(usize, String)>,
}

fn parse_timestamp(s: &str) -> std::result::Result<i64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<i64>() {
        return Ok(v);
    }
    if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp());
    }
    if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S") {
        return Ok(dt.and_utc().timestamp());
    }
    Err(format!("unparseable timestamp {s:?}"))
}

/// Parse a `source,target,timestamp[,weight]` log. Self-loops are dropped
/// and counted; malformed rows are collected with line numbers up to the
/// configured cap, after which parsing fails.
pub fn parse_interactions<R: BufRead>(reader: R, format: &LogFormat) -> Result<ParseOutcome> {
    let delim = format.delimiter as char;
    let mut interactions = Vec::new();
    let mut self_loops = 0usize;
    let mut row_errors: Vec<(usize, String)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if idx == 0 && format.has_header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(delim).collect();
        let parsed = (|| -> std::result::Result<Option<Interaction>, String> {
            if fields.len() < 3 {
                return Err(format!("expected at least 3 columns, got {}", fields.len()));
            }
            let source = fields[0].trim().to_string();
            let target = fields[1].trim().to_string();
            if source.is_empty() || target.is_empty() {
                return Err("empty node id".to_string());
            }
            let timestamp = parse_timestamp(fields[2])?;
            let weight = if fields.len() >= 4 && !fields[3].trim().is_empty() {
                fields[3]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad weight: {e}"))?
            } else {
                1.0
            };
            if !weight.is_finite() || weight < 0.0 {
                return Err(format!("weight must be finite and >= 0, got {weight}"));
            }
            if source == target {
                return Ok(None);
            }
            Ok(Some(Interaction {
                source,
                target,
                timestamp,
                weight,
            }))
        })();
        match parsed {
            Ok(Some(i)) => interactions.push(i),
            Ok(None) => self_loops += 1,
            Err(msg) => {
                row_errors.push((lineno, msg));
                if row_errors.len() > format.error_cap {
                    let sample = row_errors
                        .iter()
                        .take(5)
                        .map(|(l, m)| format!("line {l}: {m}"))
                        .collect::<Vec<_>>()
                        .join("; ");
                    return Err(Error::TooManyErrors {
                        count: row_errors.len(),
                        sample,
                    });
                }
            }
        }
    }
    Ok(ParseOutcome {
        interactions,
        self_loops_dropped: self_loops,
        row_errors,
    })
}

/// Slice interactions into overlapping windows.
///
/// Frame k covers `[origin + k*step, origin + k*step + window_len)` with
/// `step = window_len - overlap`; frames are emitted while the window start
/// is at or before the last timestamp. When `origin` is `None` the earliest
/// timestamp in the log is used.
pub fn window(
    interactions: &[Interaction],
    window_len: i64,
    overlap: i64,
    origin: Option<i64>,
) -> Result<TemporalSocialNetwork> {
    if window_len <= 0 {
        return Err(Error::InvalidArgument("window_len must be > 0".into()));
    }
    if overlap < 0 || overlap >= window_len {
        return Err(Error::InvalidArgument(
            "overlap must satisfy 0 <= overlap < window_len".into(),
        ));
    }
    if interactions.is_empty() {
        return Err(Error::EmptyInput("no interactions to window".into()));
    }
    let origin = origin.unwrap_or_else(|| interactions.iter().map(|i| i.timestamp).min().unwrap());
    let last_ts = interactions.iter().map(|i| i.timestamp).max().unwrap();
    let step = window_len - overlap;

    let mut frames = Vec::new();
    let mut k = 0usize;
    loop {
        let start = origin + (k as i64) * step;
        if start > last_ts {
            break;
        }
        let end = start + window_len;
        let mut edges: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        for i in interactions {
            if i.timestamp >= start && i.timestamp < end {
                *edges
                    .entry((i.source.clone(), i.target.clone()))
                    .or_insert(0.0) += i.weight;
                nodes.insert(i.source.clone());
                nodes.insert(i.target.clone());
            }
        }
        frames.push(Timeframe {
            index: k,
            start,
            end,
            nodes,
            edges,
        });
        // this window already covers the tail of the log
        if end > last_ts {
            break;
        }
        k += 1;
    }
    Ok(TemporalSocialNetwork {
        frames,
        window_len,
        overlap,
    })
}
