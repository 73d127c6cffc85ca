//! CSV interchange formats shared by the pipeline stages. All outputs are
//! UTF-8 with LF line endings and `.` decimal separators; serialization is
//! byte-stable so golden tests can compare files directly.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::communities::Group;
use crate::evochain::{ChainRecord, SequenceInstance};
use crate::ged::{EvolutionEdge, EventType, InclusionPair, NiTable};
use crate::importance::ImportanceMap;
use crate::learn::{class_name, Confusion, EvalReport, NUM_CLASSES};
use crate::tsn::{TemporalSocialNetwork, Timeframe};
use crate::{Error, Result};

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad {what}: {field:?}"),
    })
}

fn open_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path)?;
    Ok(text.lines().map(|l| l.to_string()).collect())
}

// --- frames ---

pub fn write_frames(dir: &Path, tsn: &TemporalSocialNetwork) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut manifest = String::from("frame,start,end\n");
    for frame in &tsn.frames {
        manifest.push_str(&format!("{},{},{}\n", frame.index, frame.start, frame.end));
        let mut body = String::from("source,target,weight\n");
        for ((s, t), w) in &frame.edges {
            body.push_str(&format!("{s},{t},{w}\n"));
        }
        fs::write(dir.join(format!("frame_{}.csv", frame.index)), body)?;
    }
    fs::write(dir.join("manifest.csv"), manifest)?;
    Ok(())
}

pub fn read_frames(dir: &Path) -> Result<Vec<Timeframe>> {
    let manifest = open_lines(&dir.join("manifest.csv"))?;
    let mut frames = Vec::new();
    for (idx, line) in manifest.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse { line: idx + 1, message: "expected frame,start,end".into() });
        }
        let index: usize = parse_field(parts[0], idx + 1, "frame index")?;
        let start: i64 = parse_field(parts[1], idx + 1, "start")?;
        let end: i64 = parse_field(parts[2], idx + 1, "end")?;
        let body = open_lines(&dir.join(format!("frame_{index}.csv")))?;
        let mut edges = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        for (eidx, eline) in body.iter().enumerate().skip(1) {
            if eline.trim().is_empty() {
                continue;
            }
            let p: Vec<&str> = eline.split(',').collect();
            if p.len() != 3 {
                return Err(Error::Parse {
                    line: eidx + 1,
                    message: "expected source,target,weight".into(),
                });
            }
            let w: f64 = parse_field(p[2], eidx + 1, "weight")?;
            nodes.insert(p[0].to_string());
            nodes.insert(p[1].to_string());
            edges.insert((p[0].to_string(), p[1].to_string()), w);
        }
        frames.push(Timeframe { index, start, end, nodes, edges });
    }
    frames.sort_by_key(|f| f.index);
    Ok(frames)
}

// --- groups ---

pub fn write_groups(path: &Path, frames: &[Vec<Group>]) -> Result<()> {
    let mut body = String::from("frame,group_id,node\n");
    for groups in frames {
        for g in groups {
            for m in &g.members {
                body.push_str(&format!("{},{},{}\n", g.frame_index, g.group_id, m));
            }
        }
    }
    fs::write(path, body)?;
    Ok(())
}

/// Read a membership table back into per-frame group lists. Frames with no
/// groups between 0 and the max frame index come back empty. Duplicate
/// member sets within a frame are dropped; the count is returned.
pub fn read_groups(path: &Path) -> Result<(Vec<Vec<Group>>, usize)> {
    let lines = open_lines(path)?;
    let mut table: BTreeMap<usize, BTreeMap<String, BTreeSet<String>>> = BTreeMap::new();
    for (idx, line) in lines.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let p: Vec<&str> = line.split(',').collect();
        if p.len() != 3 {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected frame,group_id,node".into(),
            });
        }
        let frame: usize = parse_field(p[0], idx + 1, "frame")?;
        table
            .entry(frame)
            .or_default()
            .entry(p[1].to_string())
            .or_default()
            .insert(p[2].to_string());
    }
    let max_frame = table.keys().max().copied().unwrap_or(0);
    let mut duplicates = 0usize;
    let mut frames: Vec<Vec<Group>> = Vec::with_capacity(max_frame + 1);
    for f in 0..=max_frame {
        let groups = table.remove(&f).unwrap_or_default();
        let mut seen: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        let mut list = Vec::new();
        for (group_id, members) in groups {
            if !seen.insert(members.clone()) {
                duplicates += 1;
                continue;
            }
            list.push(Group { frame_index: f, group_id, members });
        }
        frames.push(list);
    }
    Ok((frames, duplicates))
}

// --- importance ---

pub fn write_ni(path: &Path, ni: &NiTable) -> Result<()> {
    let mut body = String::from("frame,group_id,node,score\n");
    for ((frame, group_id), map) in ni {
        for (node, score) in &map.scores {
            body.push_str(&format!("{frame},{group_id},{node},{score}\n"));
        }
    }
    fs::write(path, body)?;
    Ok(())
}

pub fn read_ni(path: &Path) -> Result<NiTable> {
    let lines = open_lines(path)?;
    let mut table = NiTable::new();
    for (idx, line) in lines.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let p: Vec<&str> = line.split(',').collect();
        if p.len() != 4 {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected frame,group_id,node,score".into(),
            });
        }
        let frame: usize = parse_field(p[0], idx + 1, "frame")?;
        let score: f64 = parse_field(p[3], idx + 1, "score")?;
        table
            .entry((frame, p[1].to_string()))
            .or_insert_with(|| ImportanceMap {
                frame_index: frame,
                group_id: p[1].to_string(),
                scores: BTreeMap::new(),
                converged: true,
            })
            .scores
            .insert(p[2].to_string(), score);
    }
    Ok(table)
}

/// Uniform importance for every group, for membership-level runs that
/// bypass the importance stage.
pub fn uniform_ni(frames: &[Vec<Group>]) -> NiTable {
    frames
        .iter()
        .flatten()
        .map(|g| ((g.frame_index, g.group_id.clone()), ImportanceMap::uniform(g)))
        .collect()
}

// --- events ---

pub fn write_events(path: &Path, edges: &[EvolutionEdge]) -> Result<()> {
    let mut body =
        String::from("frame_from,group_from,frame_to,group_to,event,inclusion_fwd,inclusion_bwd\n");
    for e in edges {
        let (ff, gf) = match &e.from {
            Some((f, g)) => (f.to_string(), g.clone()),
            None => (String::new(), String::new()),
        };
        let (ft, gt) = match &e.to {
            Some((f, g)) => (f.to_string(), g.clone()),
            None => (String::new(), String::new()),
        };
        let (ifwd, ibwd) = match &e.inclusions {
            Some(p) => (p.i_fwd.to_string(), p.i_bwd.to_string()),
            None => (String::new(), String::new()),
        };
        body.push_str(&format!("{ff},{gf},{ft},{gt},{},{ifwd},{ibwd}\n", e.event));
    }
    fs::write(path, body)?;
    Ok(())
}

pub fn read_events(path: &Path) -> Result<Vec<EvolutionEdge>> {
    let lines = open_lines(path)?;
    let mut edges = Vec::new();
    for (idx, line) in lines.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let p: Vec<&str> = line.split(',').collect();
        if p.len() != 7 {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected 7 event columns".into(),
            });
        }
        let side = |f: &str, g: &str| -> Result<Option<(usize, String)>> {
            if f.is_empty() {
                Ok(None)
            } else {
                Ok(Some((parse_field(f, idx + 1, "frame")?, g.to_string())))
            }
        };
        let inclusions = if p[5].is_empty() {
            None
        } else {
            Some(InclusionPair {
                i_fwd: parse_field(p[5], idx + 1, "inclusion_fwd")?,
                i_bwd: parse_field(p[6], idx + 1, "inclusion_bwd")?,
            })
        };
        edges.push(EvolutionEdge {
            from: side(p[0], p[1])?,
            to: side(p[2], p[3])?,
            event: p[4].parse()?,
            inclusions,
        });
    }
    Ok(edges)
}

// --- instances ---

pub const INSTANCE_HEADER: &str =
    "size_t3,event_32,size_t2,event_21,size_t1,event_10,size_t0,label";

pub fn write_instances(path: &Path, instances: &[SequenceInstance]) -> Result<()> {
    if instances.is_empty() {
        return Err(Error::EmptyInput("no instances to serialize".into()));
    }
    let mut body = format!("{INSTANCE_HEADER}\n");
    for i in instances {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            i.size_t3, i.event_32, i.size_t2, i.event_21, i.size_t1, i.event_10, i.size_t0, i.label
        ));
    }
    fs::write(path, body)?;
    Ok(())
}

/// Variable-step chain records: `size_0,event_01,size_1,...,label` with
/// sizes oldest-first.
pub fn write_chain_records(path: &Path, records: &[ChainRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no chain records to serialize".into()));
    }
    let steps = records[0].sizes.len();
    let mut header = Vec::new();
    for s in 0..steps {
        header.push(format!("size_{s}"));
        if s + 1 < steps {
            header.push(format!("event_{s}{}", s + 1));
        }
    }
    header.push("label".into());
    let mut body = header.join(",");
    body.push('\n');
    for r in records {
        let mut fields = Vec::new();
        for s in 0..steps {
            fields.push(r.sizes[s].to_string());
            if s + 1 < steps {
                fields.push(r.events[s].to_string());
            }
        }
        fields.push(r.label.to_string());
        body.push_str(&fields.join(","));
        body.push('\n');
    }
    fs::write(path, body)?;
    Ok(())
}

pub fn read_instances(path: &Path) -> Result<Vec<SequenceInstance>> {
    let lines = open_lines(path)?;
    if lines.first().map(|h| h.trim()) != Some(INSTANCE_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {INSTANCE_HEADER:?}"),
        });
    }
    let mut instances = Vec::new();
    for (idx, line) in lines.iter().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let p: Vec<&str> = line.split(',').collect();
        if p.len() != 8 {
            return Err(Error::Parse { line: idx + 1, message: "expected 8 columns".into() });
        }
        let event = |s: &str| -> Result<EventType> { s.trim().parse() };
        instances.push(SequenceInstance {
            size_t3: parse_field(p[0], idx + 1, "size_t3")?,
            event_32: event(p[1])?,
            size_t2: parse_field(p[2], idx + 1, "size_t2")?,
            event_21: event(p[3])?,
            size_t1: parse_field(p[4], idx + 1, "size_t1")?,
            event_10: event(p[5])?,
            size_t0: parse_field(p[6], idx + 1, "size_t0")?,
            label: event(p[7])?,
            provenance: Vec::new(),
        });
    }
    Ok(instances)
}

// --- reports ---

pub fn write_report(path: &Path, report: &EvalReport) -> Result<()> {
    let mut body = String::from("class,precision,recall,f,support\n");
    for (c, m) in report.per_class.iter().enumerate() {
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            class_name(c),
            m.precision,
            m.recall,
            m.f,
            m.support
        ));
    }
    body.push_str(&format!(
        "weighted,,,{},{}\n",
        report.weighted_f,
        report.confusion.total()
    ));
    fs::write(path, body)?;
    Ok(())
}

pub fn write_confusion(path: &Path, confusion: &Confusion) -> Result<()> {
    let mut body = String::from("actual\\predicted");
    for c in 0..NUM_CLASSES {
        body.push(',');
        body.push_str(class_name(c));
    }
    body.push('\n');
    for a in 0..NUM_CLASSES {
        body.push_str(class_name(a));
        for p in 0..NUM_CLASSES {
            body.push_str(&format!(",{}", confusion.counts[a][p]));
        }
        body.push('\n');
    }
    fs::write(path, body)?;
    Ok(())
}

// --- interaction logs ---

pub fn write_interactions(path: &Path, interactions: &[crate::tsn::Interaction]) -> Result<()> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "source,target,timestamp,weight")?;
    for i in interactions {
        writeln!(file, "{},{},{},{}", i.source, i.target, i.timestamp, i.weight)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ged;
    use crate::tsn;

    fn temp_dir() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn frames_round_trip_bit_exact() {
        let ints = vec![
            tsn::Interaction { source: "a".into(), target: "b".into(), timestamp: 5, weight: 1.5 },
            tsn::Interaction { source: "b".into(), target: "c".into(), timestamp: 15, weight: 0.25 },
        ];
        let net = tsn::window(&ints, 10, 0, Some(0)).unwrap();
        let dir = temp_dir();
        write_frames(dir.path(), &net).unwrap();
        let frames = read_frames(dir.path()).unwrap();
        assert_eq!(frames, net.frames);
        // a second write produces byte-identical files
        let first = fs::read(dir.path().join("frame_0.csv")).unwrap();
        write_frames(dir.path(), &net).unwrap();
        assert_eq!(first, fs::read(dir.path().join("frame_0.csv")).unwrap());
    }

    #[test]
    fn groups_round_trip_with_dedup() {
        let dir = temp_dir();
        let path = dir.path().join("groups.csv");
        fs::write(
            &path,
            "frame,group_id,node\n0,a,x\n0,a,y\n0,a,z\n0,b,x\n0,b,y\n0,b,z\n2,c,q\n2,c,r\n2,c,s\n",
        )
        .unwrap();
        let (frames, duplicates) = read_groups(&path).unwrap();
        assert_eq!(duplicates, 1); // b duplicates a's member set
        assert_eq!(frames.len(), 3);
        assert!(frames[1].is_empty());
        assert_eq!(frames[2][0].members.len(), 3);
    }

    #[test]
    fn events_round_trip() {
        let edges = vec![
            ged::EvolutionEdge {
                from: Some((0, "0:000".into())),
                to: Some((1, "1:000".into())),
                event: ged::EventType::Growing,
                inclusions: Some(ged::InclusionPair { i_fwd: 1.0, i_bwd: 0.4444444444444444 }),
            },
            ged::EvolutionEdge {
                from: Some((0, "0:001".into())),
                to: None,
                event: ged::EventType::Dissolving,
                inclusions: None,
            },
        ];
        let dir = temp_dir();
        let path = dir.path().join("events.csv");
        write_events(&path, &edges).unwrap();
        assert_eq!(read_events(&path).unwrap(), edges);
    }

    #[test]
    fn instance_header_is_exact() {
        let instances = vec![crate::evochain::SequenceInstance {
            size_t3: 4,
            event_32: ged::EventType::Growing,
            size_t2: 5,
            event_21: ged::EventType::Continuing,
            size_t1: 5,
            event_10: ged::EventType::Growing,
            size_t0: 7,
            label: ged::EventType::Shrinking,
            provenance: vec![],
        }];
        let dir = temp_dir();
        let path = dir.path().join("instances.csv");
        write_instances(&path, &instances).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "size_t3,event_32,size_t2,event_21,size_t1,event_10,size_t0,label\n\
             4,growing,5,continuing,5,growing,7,shrinking\n"
        );
        assert_eq!(read_instances(&path).unwrap(), instances);
    }

    #[test]
    fn empty_instance_list_is_an_error() {
        let dir = temp_dir();
        assert!(write_instances(&dir.path().join("i.csv"), &[]).is_err());
    }
}
