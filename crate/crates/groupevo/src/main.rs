//! Command-line front end for the group evolution pipeline.
//!
//! Exit codes: 0 success, 2 invalid usage or arguments, 3 data or
//! runtime failure.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use groupevo::communities;
use groupevo::evochain::{self, ExtractOptions, LabelPolicy};
use groupevo::formats;
use groupevo::ged::{self, GedParams, NiTable};
use groupevo::importance;
use groupevo::learn::{self, ClassifierKind, ClassifierSpec, Dataset};
use groupevo::manifest::RunManifest;
use groupevo::sweep::{self, SweepConfig};
use groupevo::synth;
use groupevo::tsn::{self, LogFormat, Timeframe};
use groupevo::{Error, Result};

const SECONDS_PER_DAY: i64 = 86_400;

#[derive(Parser)]
#[command(name = "groupevo", version, about = "Group evolution discovery and prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Slice an interaction log into overlapping timeframes.
    Window(WindowArgs),
    /// Extract overlapping communities per frame with k-clique percolation.
    Detect(DetectArgs),
    /// Score member importance within each group.
    Importance(ImportanceArgs),
    /// Classify group transitions into evolution events.
    Ged(GedArgs),
    /// Reconstruct event sequences and emit learning instances.
    Chains(ChainsArgs),
    /// Cross-validate a next-event classifier.
    Eval(EvalArgs),
    /// Grid-search alpha and beta across classifiers.
    Sweep(SweepArgs),
    /// Generate a synthetic network with planted evolution events.
    Synth(SynthArgs),
    /// Run the full pipeline from a config file.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct WindowArgs {
    /// Interaction log: source,target,timestamp[,weight] per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    window_days: i64,
    #[arg(long, default_value_t = 0)]
    overlap_days: i64,
    /// Fixed origin timestamp (epoch seconds); default is the first event.
    #[arg(long)]
    origin: Option<i64>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Skip the first line of the log.
    #[arg(long)]
    has_header: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    /// Directory produced by `window`.
    #[arg(long)]
    frames: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Drop edges lighter than this before clique search.
    #[arg(long)]
    min_weight: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ImportanceArgs {
    #[arg(long)]
    groups: PathBuf,
    /// Required unless measure is uniform.
    #[arg(long)]
    frames: Option<PathBuf>,
    /// sp (social position), degree, or uniform.
    #[arg(long, default_value = "sp")]
    measure: String,
    #[arg(long, default_value_t = 0.85)]
    epsilon: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GedArgs {
    #[arg(long)]
    groups: PathBuf,
    #[arg(long)]
    ni: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0.10)]
    dissolve_threshold: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ChainsArgs {
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    groups: PathBuf,
    #[arg(long, default_value_t = 4)]
    steps: usize,
    /// priority or all.
    #[arg(long, default_value = "priority")]
    label_policy: String,
    #[arg(long, default_value_t = 64)]
    chain_cap: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    instances: PathBuf,
    /// baseline, bayes, knn, tree, or forest.
    #[arg(long)]
    classifier: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 10)]
    trees: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
    /// Confusion matrix path; default is confusion.csv next to the report.
    #[arg(long)]
    confusion: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    groups: PathBuf,
    #[arg(long)]
    ni: PathBuf,
    /// Comma-separated thresholds, percent (50,60) or fraction (0.5,0.6).
    #[arg(long, default_value = "50,60,70,80,90,100")]
    alphas: String,
    #[arg(long, default_value = "50,60,70,80,90,100")]
    betas: String,
    #[arg(long, default_value = "tree,forest,bayes,knn,baseline")]
    classifiers: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = sweep::DEFAULT_MIN_INSTANCES)]
    min_instances: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Evolution script; see the script format in the docs.
    #[arg(long)]
    script: PathBuf,
    #[arg(long, default_value_t = 0.9)]
    p_intra: f64,
    #[arg(long, default_value_t = 0.05)]
    p_inter: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Thresholds used when re-deriving realized ground truth.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    /// key=value file, one per line, # comments.
    #[arg(long)]
    config: PathBuf,
    /// Override a config key, e.g. --set alpha=0.7. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Overrides the `out` config key.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Window(a) => cmd_window(&a),
        Command::Detect(a) => cmd_detect(&a),
        Command::Importance(a) => cmd_importance(&a),
        Command::Ged(a) => cmd_ged(&a),
        Command::Chains(a) => cmd_chains(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Pipeline(a) => cmd_pipeline(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

/// Directory that should hold run_manifest.json for an output path.
fn manifest_dir(out: &Path) -> PathBuf {
    if out.extension().is_some() {
        out.parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    } else {
        out.to_path_buf()
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}

fn frame_lookup(frames: &[Timeframe]) -> BTreeMap<usize, &Timeframe> {
    frames.iter().map(|f| (f.index, f)).collect()
}

fn parse_threshold(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad threshold {s:?}")))?;
    let v = if v > 1.0 { v / 100.0 } else { v };
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidArgument(format!("threshold {s:?} out of range")));
    }
    Ok(v)
}

fn parse_threshold_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        if !part.trim().is_empty() {
            out.push(parse_threshold(part)?);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!("no thresholds in {s:?}")));
    }
    Ok(out)
}

fn parse_label_policy(s: &str) -> Result<LabelPolicy> {
    match s {
        "priority" => Ok(LabelPolicy::Priority),
        "all" => Ok(LabelPolicy::All),
        other => Err(Error::InvalidArgument(format!("unknown label policy {other:?}"))),
    }
}

fn cmd_window(args: &WindowArgs) -> Result<()> {
    let mut manifest = RunManifest::new("window");
    manifest.flag("input", args.input.display());
    manifest.flag("window-days", args.window_days);
    manifest.flag("overlap-days", args.overlap_days);
    if let Some(origin) = args.origin {
        manifest.flag("origin", origin);
    }
    manifest.digest_input(&args.input)?;

    let format = LogFormat {
        delimiter: args.delimiter as u8,
        has_header: args.has_header,
        ..LogFormat::default()
    };
    let file = fs::File::open(&args.input)?;
    let outcome = tsn::parse_interactions(BufReader::new(file), &format)?;
    if outcome.self_loops_dropped > 0 {
        let msg = format!("{} self-loop rows dropped", outcome.self_loops_dropped);
        eprintln!("warning: {msg}");
        manifest.warn(msg);
    }
    for (line, msg) in &outcome.row_errors {
        let msg = format!("line {line}: {msg}");
        eprintln!("warning: {msg}");
        manifest.warn(msg);
    }
    let network = tsn::window(
        &outcome.interactions,
        args.window_days
            .checked_mul(SECONDS_PER_DAY)
            .ok_or_else(|| Error::InvalidArgument("window length overflows".into()))?,
        args.overlap_days * SECONDS_PER_DAY,
        args.origin,
    )?;
    formats::write_frames(&args.out, &network)?;
    println!(
        "wrote {} frames to {}",
        network.frames.len(),
        args.out.display()
    );
    manifest.finish_and_write(&manifest_dir(&args.out))
}

fn cmd_detect(args: &DetectArgs) -> Result<()> {
    let mut manifest = RunManifest::new("detect");
    manifest.flag("frames", args.frames.display());
    manifest.flag("k", args.k);
    if let Some(w) = args.min_weight {
        manifest.flag("min-weight", w);
    }
    manifest.digest_input(&args.frames.join("manifest.csv"))?;

    let frames = formats::read_frames(&args.frames)?;
    let mut groups_by_frame = Vec::new();
    for frame in &frames {
        groups_by_frame.push(communities::cpm_communities_filtered(
            frame,
            args.k,
            args.min_weight,
        )?);
    }
    ensure_parent(&args.out)?;
    formats::write_groups(&args.out, &groups_by_frame)?;
    let total: usize = groups_by_frame.iter().map(Vec::len).sum();
    println!("wrote {} groups over {} frames to {}", total, frames.len(), args.out.display());
    manifest.finish_and_write(&manifest_dir(&args.out))
}

fn compute_ni(
    groups_by_frame: &[Vec<communities::Group>],
    frames: &[Timeframe],
    measure: &str,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
    warnings: &mut Vec<String>,
) -> Result<NiTable> {
    if measure == "uniform" {
        return Ok(formats::uniform_ni(groups_by_frame));
    }
    let lookup = frame_lookup(frames);
    let mut ni = NiTable::new();
    for groups in groups_by_frame {
        for group in groups {
            let frame = lookup.get(&group.frame_index).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "groups reference frame {} absent from the frame set",
                    group.frame_index
                ))
            })?;
            let map = match measure {
                "sp" => importance::social_position(group, frame, epsilon, tol, max_iter)?,
                "degree" => importance::degree_importance(group, frame)?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown importance measure {other:?}"
                    )))
                }
            };
            if !map.converged {
                warnings.push(format!(
                    "social position did not converge for group {}:{}",
                    group.frame_index, group.group_id
                ));
            }
            ni.insert((group.frame_index, group.group_id.clone()), map);
        }
    }
    Ok(ni)
}

fn cmd_importance(args: &ImportanceArgs) -> Result<()> {
    let mut manifest = RunManifest::new("importance");
    manifest.flag("groups", args.groups.display());
    manifest.flag("measure", &args.measure);
    manifest.digest_input(&args.groups)?;

    let (groups_by_frame, _) = formats::read_groups(&args.groups)?;
    let frames = match &args.frames {
        Some(dir) => {
            manifest.flag("frames", dir.display());
            formats::read_frames(dir)?
        }
        None if args.measure == "uniform" => Vec::new(),
        None => {
            return Err(Error::InvalidArgument(
                "--frames is required unless --measure uniform".into(),
            ))
        }
    };
    let mut warnings = Vec::new();
    let ni = compute_ni(
        &groups_by_frame,
        &frames,
        &args.measure,
        args.epsilon,
        args.tol,
        args.max_iter,
        &mut warnings,
    )?;
    for w in &warnings {
        eprintln!("warning: {w}");
        manifest.warn(w);
    }
    ensure_parent(&args.out)?;
    formats::write_ni(&args.out, &ni)?;
    println!("wrote importance for {} groups to {}", ni.len(), args.out.display());
    manifest.finish_and_write(&manifest_dir(&args.out))
}

fn cmd_ged(args: &GedArgs) -> Result<()> {
    let mut manifest = RunManifest::new("ged");
    manifest.flag("groups", args.groups.display());
    manifest.flag("ni", args.ni.display());
    manifest.flag("alpha", args.alpha);
    manifest.flag("beta", args.beta);
    manifest.flag("dissolve-threshold", args.dissolve_threshold);
    manifest.digest_input(&args.groups)?;
    manifest.digest_input(&args.ni)?;

    let (groups_by_frame, _) = formats::read_groups(&args.groups)?;
    let ni = formats::read_ni(&args.ni)?;
    let mut params = GedParams::new(args.alpha, args.beta)?;
    if !(0.0..=1.0).contains(&args.dissolve_threshold) {
        return Err(Error::InvalidArgument("dissolve threshold must be in [0,1]".into()));
    }
    params.dissolve_threshold = args.dissolve_threshold;
    let outcome = ged::build_evolution_graph(&groups_by_frame, &ni, &params)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
        manifest.warn(w);
    }
    if !outcome.no_event.is_empty() {
        let msg = format!("{} groups received no event", outcome.no_event.len());
        eprintln!("warning: {msg}");
        manifest.warn(msg);
    }
    ensure_parent(&args.out)?;
    formats::write_events(&args.out, &outcome.edges)?;
    println!("wrote {} evolution edges to {}", outcome.edges.len(), args.out.display());
    manifest.finish_and_write(&manifest_dir(&args.out))
}

fn cmd_chains(args: &ChainsArgs) -> Result<()> {
    let mut manifest = RunManifest::new("chains");
    manifest.flag("events", args.events.display());
    manifest.flag("groups", args.groups.display());
    manifest.flag("steps", args.steps);
    manifest.flag("label-policy", &args.label_policy);
    manifest.digest_input(&args.events)?;
    manifest.digest_input(&args.groups)?;

    let edges = formats::read_events(&args.events)?;
    let (groups_by_frame, _) = formats::read_groups(&args.groups)?;
    let sizes = evochain::size_table(&ged::group_table(&groups_by_frame));
    let options = ExtractOptions {
        steps: args.steps,
        label_policy: parse_label_policy(&args.label_policy)?,
        chain_cap: args.chain_cap,
    };
    ensure_parent(&args.out)?;
    let (count, cap_hits) = if args.steps == 4 {
        let outcome = evochain::extract_instances(&edges, &sizes, &options)?;
        formats::write_instances(&args.out, &outcome.instances)?;
        (outcome.instances.len(), outcome.cap_hits)
    } else {
        let outcome = evochain::extract_chain_records(&edges, &sizes, &options)?;
        formats::write_chain_records(&args.out, &outcome.records)?;
        (outcome.records.len(), outcome.cap_hits)
    };
    for (frame, group) in &cap_hits {
        let msg = format!("chain cap reached at group {frame}:{group}");
        eprintln!("warning: {msg}");
        manifest.warn(msg);
    }
    println!("wrote {} instances to {}", count, args.out.display());
    manifest.finish_and_write(&manifest_dir(&args.out))
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let mut manifest = RunManifest::new("eval");
    manifest.flag("instances", args.instances.display());
    manifest.flag("classifier", &args.classifier);
    manifest.flag("folds", args.folds);
    manifest.seed = Some(args.seed);
    manifest.digest_input(&args.instances)?;

    let instances = formats::read_instances(&args.instances)?;
    let dataset = Dataset::from_instances(&instances)?;
    let spec = ClassifierSpec {
        trees: args.trees,
        k: args.k,
        ..ClassifierSpec::new(ClassifierKind::parse(&args.classifier)?, args.seed)
    };
    let report = learn::cross_validate(&dataset, &spec, args.folds)?;
    ensure_parent(&args.out)?;
    formats::write_report(&args.out, &report)?;
    let confusion_path = args
        .confusion
        .clone()
        .unwrap_or_else(|| manifest_dir(&args.out).join("confusion.csv"));
    ensure_parent(&confusion_path)?;
    formats::write_confusion(&confusion_path, &report.confusion)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    manifest.finish_and_write(&manifest_dir(&args.out))
}

fn parse_classifier_list(s: &str) -> Result<Vec<ClassifierKind>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if !part.is_empty() {
            out.push(ClassifierKind::parse(part)?);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!("no classifiers in {s:?}")));
    }
    Ok(out)
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let mut manifest = RunManifest::new("sweep");
    manifest.flag("groups", args.groups.display());
    manifest.flag("ni", args.ni.display());
    manifest.flag("alphas", &args.alphas);
    manifest.flag("betas", &args.betas);
    manifest.flag("classifiers", &args.classifiers);
    manifest.seed = Some(args.seed);
    manifest.digest_input(&args.groups)?;
    manifest.digest_input(&args.ni)?;

    let (groups_by_frame, _) = formats::read_groups(&args.groups)?;
    let ni = formats::read_ni(&args.ni)?;
    let config = SweepConfig {
        alphas: parse_threshold_list(&args.alphas)?,
        betas: parse_threshold_list(&args.betas)?,
        folds: args.folds,
        min_instances: args.min_instances,
        ..SweepConfig::new(parse_classifier_list(&args.classifiers)?, args.seed)
    };
    let result = sweep::run_sweep(&groups_by_frame, &ni, &config)?;
    fs::create_dir_all(&args.out)?;
    fs::write(args.out.join("sweep.csv"), sweep::render_long_form(&result))?;
    for &classifier in &config.classifiers {
        let matrix = sweep::render_matrix(&result, classifier)?;
        fs::write(
            args.out.join(format!("matrix_{}.csv", classifier.name())),
            matrix,
        )?;
    }
    for cell in sweep::best_cells(&result) {
        if let Some(r) = &cell.report {
            println!(
                "best {}: weighted_f={:.3} at alpha={} beta={}",
                cell.classifier.name(),
                r.weighted_f,
                cell.alpha,
                cell.beta
            );
        }
    }
    manifest.finish_and_write(&args.out)
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let mut manifest = RunManifest::new("synth");
    manifest.flag("script", args.script.display());
    manifest.flag("p-intra", args.p_intra);
    manifest.flag("p-inter", args.p_inter);
    manifest.seed = Some(args.seed);
    manifest.digest_input(&args.script)?;

    let script = synth::EvolutionScript::parse(&fs::read_to_string(&args.script)?)?;
    let planted = synth::plant_memberships(&script, args.seed)?;
    let interactions = synth::emit_edges(&planted.frames, args.p_intra, args.p_inter, args.seed)?;
    let realized = synth::derive_realized_events(&planted.frames, args.alpha, args.beta);
    fs::create_dir_all(&args.out)?;
    formats::write_interactions(&args.out.join("interactions.csv"), &interactions)?;
    formats::write_groups(&args.out.join("groups_truth.csv"), &planted.frames)?;
    formats::write_events(&args.out.join("events_intended.csv"), &planted.intended)?;
    formats::write_events(&args.out.join("events_realized.csv"), &realized)?;
    println!(
        "wrote {} interactions, {} intended and {} realized events to {}",
        interactions.len(),
        planted.intended.len(),
        realized.len(),
        args.out.display()
    );
    manifest.finish_and_write(&args.out)
}

fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected key=value, got {line:?}"),
        })?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn config_parse<T: std::str::FromStr>(
    config: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T> {
    match config.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad value for {key}: {v:?}"))),
    }
}

fn cmd_pipeline(args: &PipelineArgs) -> Result<()> {
    let mut manifest = RunManifest::new("pipeline");
    manifest.flag("config", args.config.display());
    manifest.digest_input(&args.config)?;

    let mut config = parse_config(&fs::read_to_string(&args.config)?)?;
    for set in &args.sets {
        let (key, value) = set.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("--set expects KEY=VALUE, got {set:?}"))
        })?;
        config.insert(key.trim().to_string(), value.trim().to_string());
    }
    if let Some(out) = &args.out {
        config.insert("out".into(), out.display().to_string());
    }
    for (key, value) in &config {
        manifest.flag(key, value);
    }

    let out = PathBuf::from(
        config
            .get("out")
            .ok_or_else(|| Error::InvalidArgument("config needs an `out` directory".into()))?,
    );
    fs::create_dir_all(&out)?;
    let seed: u64 = config_parse(&config, "seed", 0)?;
    manifest.seed = Some(seed);

    // Stage 1 and 2: groups, either precomputed or via window + detect.
    let (groups_by_frame, frames) = if let Some(path) = config.get("groups") {
        manifest.digest_input(Path::new(path))?;
        let (groups, _) = formats::read_groups(Path::new(path))?;
        let frames = match config.get("frames") {
            Some(dir) => formats::read_frames(Path::new(dir))?,
            None => Vec::new(),
        };
        (groups, frames)
    } else {
        let input = config
            .get("input")
            .ok_or_else(|| Error::InvalidArgument("config needs `input` or `groups`".into()))?;
        manifest.digest_input(Path::new(input))?;
        let format = LogFormat {
            has_header: config_parse(&config, "has-header", false)?,
            ..LogFormat::default()
        };
        let file = fs::File::open(Path::new(input))?;
        let outcome = tsn::parse_interactions(BufReader::new(file), &format)?;
        if outcome.self_loops_dropped > 0 {
            manifest.warn(format!("{} self-loop rows dropped", outcome.self_loops_dropped));
        }
        let window_days: i64 = config_parse(&config, "window-days", 90)?;
        let overlap_days: i64 = config_parse(&config, "overlap-days", 0)?;
        let origin = match config.get("origin") {
            Some(v) => Some(v.parse().map_err(|_| {
                Error::InvalidArgument(format!("bad value for origin: {v:?}"))
            })?),
            None => None,
        };
        let network = tsn::window(
            &outcome.interactions,
            window_days * SECONDS_PER_DAY,
            overlap_days * SECONDS_PER_DAY,
            origin,
        )?;
        formats::write_frames(&out.join("frames"), &network)?;
        let k: usize = config_parse(&config, "k", 3)?;
        let min_weight = match config.get("min-weight") {
            Some(v) => Some(v.parse().map_err(|_| {
                Error::InvalidArgument(format!("bad value for min-weight: {v:?}"))
            })?),
            None => None,
        };
        let mut groups = Vec::new();
        for frame in &network.frames {
            groups.push(communities::cpm_communities_filtered(frame, k, min_weight)?);
        }
        formats::write_groups(&out.join("groups.csv"), &groups)?;
        (groups, network.frames)
    };
    if groups_by_frame.iter().map(Vec::len).sum::<usize>() == 0 {
        return Err(Error::EmptyInput("no groups detected".into()));
    }

    // Stage 3: importance.
    let ni = if let Some(path) = config.get("ni") {
        manifest.digest_input(Path::new(path))?;
        formats::read_ni(Path::new(path))?
    } else {
        let measure = config.get("measure").map(String::as_str).unwrap_or("sp");
        if measure != "uniform" && frames.is_empty() {
            return Err(Error::InvalidArgument(
                "importance needs `frames` (or measure=uniform) when groups are precomputed".into(),
            ));
        }
        let mut warnings = Vec::new();
        let ni = compute_ni(
            &groups_by_frame,
            &frames,
            measure,
            config_parse(&config, "epsilon", 0.85)?,
            config_parse(&config, "tol", 1e-9)?,
            config_parse(&config, "max-iter", 200)?,
            &mut warnings,
        )?;
        for w in warnings {
            eprintln!("warning: {w}");
            manifest.warn(w);
        }
        formats::write_ni(&out.join("ni.csv"), &ni)?;
        ni
    };

    // Stage 4: evolution events.
    let mut params = GedParams::new(
        parse_threshold(config.get("alpha").map(String::as_str).unwrap_or("0.5"))?,
        parse_threshold(config.get("beta").map(String::as_str).unwrap_or("0.5"))?,
    )?;
    params.dissolve_threshold = config_parse(&config, "dissolve-threshold", 0.10)?;
    let outcome = ged::build_evolution_graph(&groups_by_frame, &ni, &params)?;
    for w in &outcome.warnings {
        manifest.warn(w);
    }
    formats::write_events(&out.join("events.csv"), &outcome.edges)?;

    // Stage 5: sequences.
    let sizes = evochain::size_table(&ged::group_table(&groups_by_frame));
    let options = ExtractOptions {
        steps: config_parse(&config, "steps", 4)?,
        label_policy: parse_label_policy(
            config.get("label-policy").map(String::as_str).unwrap_or("priority"),
        )?,
        chain_cap: config_parse(&config, "chain-cap", 64)?,
    };
    let extracted = evochain::extract_instances(&outcome.edges, &sizes, &options)?;
    formats::write_instances(&out.join("instances.csv"), &extracted.instances)?;

    // Stage 6: evaluation.
    let classifier = config.get("classifier").map(String::as_str).unwrap_or("tree");
    let spec = ClassifierSpec {
        trees: config_parse(&config, "trees", 10)?,
        k: config_parse(&config, "neighbors", 1)?,
        ..ClassifierSpec::new(ClassifierKind::parse(classifier)?, seed)
    };
    let dataset = Dataset::from_instances(&extracted.instances)?;
    let report = learn::cross_validate(&dataset, &spec, config_parse(&config, "folds", 10)?)?;
    formats::write_report(&out.join("report.csv"), &report)?;
    formats::write_confusion(&out.join("confusion.csv"), &report.confusion)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    manifest.finish_and_write(&out)
}
