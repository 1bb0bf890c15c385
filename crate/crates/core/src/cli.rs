//! Command-line front end.
//!
//! Every artifact carries a [`RunManifest`]: JSON outputs embed it under
//! `"manifest"`, itemset lists and DOT files start with it as a comment.
//! Exit codes: 0 success, 1 I/O or parse failure, 2 usage, 3 infeasible
//! candidate family.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::candidates::{load_family, mine_frequent_bounded, save_family, ItemsetFamily};
use crate::classify::{evaluate, Algorithm, CandidateSource, LabeledDataset};
use crate::dataset::{BinaryDataset, Format, ItemId};
use crate::dtree::{ModelJson, TreeModel};
use crate::error::{Error, Result};
use crate::extract::{json_sets, model_sets, ExtractedFamily};
use crate::greedypack::{greedy_pack_traced, GreedyOptions};
use crate::mdlcost::CostReport;
use crate::par;
use crate::setpack::{set_pack, Propagation, SearchMode, SetPackOptions};
use crate::synth;

#[derive(Parser, Debug)]
#[command(name = "packminer", version, about = "Compress binary data with decision trees and extract the itemsets they use")]
pub struct Cli {
    /// Worker threads; 0 picks automatically.
    #[arg(long, global = true, env = "PACKMINER_THREADS", default_value_t = 0)]
    threads: usize,

    /// Record wall time in the manifest (outputs then differ between runs).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a tree model.
    Pack {
        #[command(subcommand)]
        algorithm: PackCommand,
    },
    /// Write the frequent itemsets of a dataset as a candidate family.
    Mine(MineArgs),
    /// List the itemsets a saved model depends on.
    Extract(ExtractArgs),
    /// Holdout evaluation of the compression classifier.
    Classify(ClassifyArgs),
    /// Dataset size and density.
    Stats(StatsArgs),
    /// Generate toy data.
    Synth(SynthArgs),
}

#[derive(Subcommand, Debug)]
enum PackCommand {
    /// Grow trees greedily from the data.
    Greedy(GreedyArgs),
    /// Select trees within a candidate family.
    Select(SelectArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FormatArg {
    Fimi,
    Csv01,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum PropagateArg {
    Ancestors,
    Parents,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum AlgorithmArg {
    Greedy,
    Select,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SynthKind {
    Chain,
    Independent,
    TwoClass,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Greedy => SearchMode::Greedy,
        }
    }
}

impl From<PropagateArg> for Propagation {
    fn from(p: PropagateArg) -> Self {
        match p {
            PropagateArg::Ancestors => Propagation::Ancestors,
            PropagateArg::Parents => Propagation::Parents,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct InputArgs {
    /// Transaction file.
    input: PathBuf,

    /// Input format; inferred from the extension when omitted (.csv means csv01).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug, Serialize)]
struct PackOutputArgs {
    /// Model JSON.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Itemset list extracted from the model.
    #[arg(long)]
    itemsets: Option<PathBuf>,

    /// Cost report JSON; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Dependency graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,

    /// Leave the empty itemset out of the itemset list.
    #[arg(long)]
    drop_empty: bool,

    /// Human-readable summary on stdout instead of the JSON report.
    #[arg(long)]
    pretty: bool,

    /// Recompute every search instead of reusing results.
    #[arg(long)]
    no_cache: bool,

    /// Recorded in the manifest; the search itself is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct GreedyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    out: PackOutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[group(id = "family", required = true, multiple = true)]
struct CandidateArgs {
    /// Candidate family file (closed downward on load).
    #[arg(long, group = "family", conflicts_with_all = ["minsup", "minsup_frac"])]
    candidates: Option<PathBuf>,

    /// Mine candidates with this absolute support threshold.
    #[arg(long, group = "family", conflicts_with = "minsup_frac")]
    minsup: Option<usize>,

    /// Mine candidates with support at least this fraction of the rows.
    #[arg(long, group = "family")]
    minsup_frac: Option<f64>,

    /// Largest candidate size; alone, every itemset up to this size.
    #[arg(long, group = "family")]
    max_size: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct SelectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    out: PackOutputArgs,
    #[command(flatten)]
    family: CandidateArgs,

    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,

    #[arg(long, value_enum, default_value_t = PropagateArg::Ancestors)]
    propagate: PropagateArg,

    /// Fail (exit 3) instead of adding missing singletons to the family.
    #[arg(long)]
    strict_candidates: bool,

    /// Source sets and marking order as JSON.
    #[arg(long)]
    sources: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[group(id = "threshold", required = true, multiple = false)]
struct ThresholdArgs {
    #[arg(long, group = "threshold")]
    minsup: Option<usize>,

    #[arg(long, group = "threshold")]
    minsup_frac: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    threshold: ThresholdArgs,

    #[arg(long)]
    max_size: Option<usize>,

    /// Family file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ExtractArgs {
    /// Model JSON written by `pack`.
    model: PathBuf,

    /// Check the model's leaf counts against this dataset first.
    #[arg(long)]
    data: Option<PathBuf>,

    #[arg(long, value_enum, requires = "data")]
    format: Option<FormatArg>,

    #[arg(short, long)]
    output: Option<PathBuf>,

    #[arg(long)]
    drop_empty: bool,
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,

    /// One label per row (with FIMI input).
    #[arg(long)]
    labels: Option<PathBuf>,

    /// Name of the label column (with CSV input).
    #[arg(long, default_value = "class")]
    label_column: String,

    /// Fraction of rows used for training.
    #[arg(long, default_value_t = 0.9)]
    split: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = AlgorithmArg::Greedy)]
    algorithm: AlgorithmArg,

    /// Per-class mining threshold for `--algorithm select`.
    #[arg(long, default_value_t = 0.1)]
    minsup_frac: f64,

    #[arg(long)]
    max_size: Option<usize>,

    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,

    /// Add -log2 of the class frequency to each code length.
    #[arg(long)]
    prior: bool,

    #[arg(long)]
    no_cache: bool,

    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug, Serialize)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,

    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug, Serialize)]
struct SynthArgs {
    #[arg(value_enum)]
    kind: SynthKind,

    /// Rows (per class for two-class).
    #[arg(long, default_value_t = 2000)]
    rows: usize,

    #[arg(long, default_value_t = 10)]
    attrs: usize,

    /// Flip probability between neighbouring attributes (chain).
    #[arg(long, default_value_t = 0.1)]
    flip: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Data file in FIMI format; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Label file (two-class only).
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Provenance attached to every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub flags: Value,
    pub threads: usize,
    /// Only with `--timing`.
    pub wall_time_ms: Option<u64>,
}

impl RunManifest {
    fn comment(&self, prefix: &str) -> String {
        format!("{prefix} manifest: {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}

struct Context {
    command: Vec<String>,
    threads: usize,
    timing: bool,
    start: Instant,
    inputs: Vec<InputDigest>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        let digest = Sha256::digest(&bytes);
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            bytes: bytes.len(),
        });
        Ok(bytes)
    }

    fn dataset(&mut self, path: &Path, format: Option<FormatArg>) -> Result<BinaryDataset> {
        let bytes = self.read(path)?;
        let format = match format {
            Some(FormatArg::Fimi) => Format::Fimi,
            Some(FormatArg::Csv01) => Format::Csv01,
            None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv01,
            None => Format::Fimi,
        };
        BinaryDataset::load(&bytes[..], format)
    }

    fn manifest<T: Serialize>(&self, flags: &T, seed: Option<u64>) -> RunManifest {
        RunManifest {
            tool: "packminer",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command.clone(),
            inputs: self.inputs.clone(),
            seed,
            flags: serde_json::to_value(flags).expect("flags serialize"),
            threads: self.threads,
            wall_time_ms: self.timing.then(|| self.start.elapsed().as_millis() as u64),
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => 3,
        Error::InvalidArgument(_) | Error::DegenerateSplit(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    par::configure_threads(cli.threads);
    let mut ctx = Context {
        // The program path varies between installs; keep only its role.
        command: std::iter::once("packminer".to_string())
            .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
            .collect(),
        threads: cli.threads,
        timing: cli.timing,
        start: Instant::now(),
        inputs: Vec::new(),
    };
    let result = match &cli.command {
        Command::Pack { algorithm: PackCommand::Greedy(a) } => cmd_pack_greedy(&mut ctx, a),
        Command::Pack { algorithm: PackCommand::Select(a) } => cmd_pack_select(&mut ctx, a),
        Command::Mine(a) => cmd_mine(&mut ctx, a),
        Command::Extract(a) => cmd_extract(&mut ctx, a),
        Command::Classify(a) => cmd_classify(&mut ctx, a),
        Command::Stats(a) => cmd_stats(&mut ctx, a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("packminer: {e}");
            exit_code(&e)
        }
    }
}

#[derive(Serialize)]
struct PackReport<'a> {
    manifest: &'a RunManifest,
    algorithm: &'static str,
    n_rows: usize,
    n_attrs: usize,
    baseline: &'static str,
    baseline_bits: f64,
    model_bits: f64,
    ratio_percent: f64,
    cost: CostReport,
    nontrivial_trees: usize,
    internal_nodes: usize,
    itemsets: usize,
    itemsets_nonempty: usize,
    details: Value,
}

impl PackReport<'_> {
    fn pretty(&self) -> String {
        let mut rows = vec![
            ("algorithm", self.algorithm.to_string()),
            ("rows", self.n_rows.to_string()),
            ("attributes", self.n_attrs.to_string()),
            ("baseline bits", format!("{:.2}", self.baseline_bits)),
            ("model bits", format!("{:.2}", self.model_bits)),
            ("ratio", format!("{:.2}%", self.ratio_percent)),
            ("nontrivial trees", self.nontrivial_trees.to_string()),
            ("itemsets", format!("{} ({} without the empty set)", self.itemsets, self.itemsets_nonempty)),
        ];
        if let Some(calls) = self.details.get("generate_calls") {
            rows.push(("tree searches", calls.to_string()));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

struct PackOutcome {
    algorithm: &'static str,
    model: TreeModel,
    cost: CostReport,
    details: Value,
}

fn write_pack_outputs(
    ds: &BinaryDataset,
    out: &PackOutputArgs,
    manifest: &RunManifest,
    outcome: PackOutcome,
) -> Result<()> {
    let names = ds.names();
    let baseline = TreeModel::trivial(ds).cost().total;
    let sets: ExtractedFamily = model_sets(&outcome.model);
    let internal_nodes = outcome.model.trees().iter().map(|t| t.n_leaves() - 1).sum();
    let report = PackReport {
        manifest,
        algorithm: outcome.algorithm,
        n_rows: ds.n_rows(),
        n_attrs: ds.n_attrs(),
        baseline: "all-trivial trees",
        baseline_bits: baseline,
        model_bits: outcome.cost.total,
        ratio_percent: 100.0 * outcome.cost.total / baseline,
        cost: outcome.cost,
        nontrivial_trees: outcome.model.n_nontrivial(),
        internal_nodes,
        itemsets: sets.len(),
        itemsets_nonempty: sets.len_nonempty(),
        details: outcome.details,
    };

    if let Some(p) = &out.output {
        emit(Some(p), &to_json(&json!({ "manifest": manifest, "model": outcome.model.to_json(names) })))?;
    }
    if let Some(p) = &out.itemsets {
        let listed = if out.drop_empty { sets.without_empty() } else { sets };
        emit(Some(p), &(manifest.comment("#") + &listed.to_list(names)))?;
    }
    if let Some(p) = &out.dot {
        emit(Some(p), &(manifest.comment("//") + &outcome.model.graph().to_dot(names)))?;
    }
    let json = to_json(&report);
    if let Some(p) = &out.report {
        emit(Some(p), &json)?;
    }
    if out.pretty {
        emit(None, &report.pretty())?;
    } else if out.report.is_none() {
        emit(None, &json)?;
    }
    Ok(())
}

fn cmd_pack_greedy(ctx: &mut Context, a: &GreedyArgs) -> Result<()> {
    let ds = ctx.dataset(&a.input.input, a.input.format)?;
    let opts = GreedyOptions { use_cache: !a.out.no_cache, parallel: true };
    let (model, cost, trace) = greedy_pack_traced(&ds, &opts);
    let manifest = ctx.manifest(a, a.out.seed);
    let details = json!({ "splits_accepted": trace.steps.len(), "tree_searches": trace.searches });
    write_pack_outputs(&ds, &a.out, &manifest, PackOutcome { algorithm: "greedy", model, cost, details })
}

fn minsup_from(frac: f64, n_rows: usize) -> Result<usize> {
    if !(frac > 0.0 && frac <= 1.0) {
        return Err(Error::InvalidArgument(format!("--minsup-frac {frac} must lie in (0, 1]")));
    }
    Ok(((frac * n_rows as f64).ceil() as usize).max(1))
}

fn cmd_pack_select(ctx: &mut Context, a: &SelectArgs) -> Result<()> {
    let ds = ctx.dataset(&a.input.input, a.input.format)?;
    let f = &a.family;
    let (mut family, origin, closure_added) = if let Some(path) = &f.candidates {
        let text = String::from_utf8(ctx.read(path)?)
            .map_err(|_| Error::Parse { line: 0, message: "candidate file is not UTF-8".into() })?;
        let loaded = load_family(&text, |t| ds.item_by_name(t))?;
        if loaded.closure_added > 0 {
            eprintln!("packminer: warning: added {} subsets to close the candidate family downward", loaded.closure_added);
        }
        let mut fam = loaded.family;
        if let Some(m) = f.max_size {
            fam = restrict(&fam, m);
        }
        (fam, "file", loaded.closure_added)
    } else if let Some(minsup) = f.minsup {
        (mine_frequent_bounded(&ds, minsup, f.max_size)?, "mined", 0)
    } else if let Some(frac) = f.minsup_frac {
        (mine_frequent_bounded(&ds, minsup_from(frac, ds.n_rows())?, f.max_size)?, "mined", 0)
    } else {
        let m = f.max_size.expect("argument group requires one option");
        (ItemsetFamily::all_up_to(ds.n_attrs(), m), "all", 0)
    };

    let missing: Vec<ItemId> = (0..ds.n_attrs()).filter(|&i| !family.contains_sorted(&[i])).collect();
    if a.strict_candidates && !missing.is_empty() {
        let names: Vec<&str> = missing.iter().map(|&i| ds.names()[i].as_str()).collect();
        return Err(Error::Infeasible(format!("no singleton candidate for {}", names.join(", "))));
    }
    let added = family.ensure_singletons(ds.n_attrs());
    if !added.is_empty() {
        eprintln!("packminer: warning: added {} singleton candidates", added.len());
    }

    let opts = SetPackOptions {
        mode: a.mode.into(),
        propagate: a.propagate.into(),
        use_cache: !a.out.no_cache,
        parallel: true,
    };
    let result = set_pack(&ds, &family, &opts)?;
    let manifest = ctx.manifest(a, a.out.seed);
    let names = ds.names();
    let sources: BTreeMap<&str, Vec<&str>> = (0..ds.n_attrs())
        .map(|i| (names[i].as_str(), result.sources.sources[i].iter().map(|&s| names[s].as_str()).collect()))
        .collect();
    let order: Vec<&str> = result.sources.marking_order.iter().map(|&i| names[i].as_str()).collect();
    if let Some(p) = &a.sources {
        emit(Some(p), &to_json(&json!({ "manifest": manifest, "sources": sources, "marking_order": order })))?;
    }
    let details = json!({
        "mode": opts.mode.to_string(),
        "propagate": opts.propagate.to_string(),
        "candidates": {
            "origin": origin,
            "size": family.len(),
            "closure_added": closure_added,
            "singletons_added": added.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>(),
        },
        "sources": sources,
        "marking_order": order,
        "passes": result.trace.passes.len(),
        "generate_calls": result.trace.generate_calls,
    });
    write_pack_outputs(
        &ds,
        &a.out,
        &manifest,
        PackOutcome { algorithm: "select", model: result.model, cost: result.cost, details },
    )
}

fn restrict(family: &ItemsetFamily, max_size: usize) -> ItemsetFamily {
    let mut out = ItemsetFamily::empty();
    for (s, sup) in family.iter() {
        if s.len() <= max_size {
            out.insert(&s, sup);
        }
    }
    out
}

fn cmd_mine(ctx: &mut Context, a: &MineArgs) -> Result<()> {
    let ds = ctx.dataset(&a.input.input, a.input.format)?;
    let minsup = match (a.threshold.minsup, a.threshold.minsup_frac) {
        (Some(m), _) => m,
        (None, Some(f)) => minsup_from(f, ds.n_rows())?,
        (None, None) => unreachable!("argument group requires one threshold"),
    };
    let family = mine_frequent_bounded(&ds, minsup, a.max_size)?;
    let manifest = ctx.manifest(a, None);
    emit(a.output.as_deref(), &(manifest.comment("#") + &save_family(&family, ds.names())))
}

fn cmd_extract(ctx: &mut Context, a: &ExtractArgs) -> Result<()> {
    let bytes = ctx.read(&a.model)?;
    let value: Value = serde_json::from_slice(&bytes)?;
    let model_json: ModelJson = serde_json::from_value(value.get("model").cloned().unwrap_or(value))?;
    let sets = match &a.data {
        Some(path) => {
            let ds = ctx.dataset(path, a.format)?;
            model_sets(&TreeModel::from_json(&model_json, &ds)?)
        }
        None => json_sets(&model_json),
    };
    let sets = if a.drop_empty { sets.without_empty() } else { sets };
    let manifest = ctx.manifest(a, None);
    emit(a.output.as_deref(), &(manifest.comment("#") + &sets.to_list(&model_json.attr_names)))
}

fn cmd_classify(ctx: &mut Context, a: &ClassifyArgs) -> Result<()> {
    let bytes = ctx.read(&a.input.input)?;
    let csv = match a.input.format {
        Some(FormatArg::Csv01) => true,
        Some(FormatArg::Fimi) => false,
        None => a.input.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")),
    };
    let data = if csv {
        LabeledDataset::load_csv(&bytes[..], &a.label_column)?
    } else {
        let path = a
            .labels
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("FIMI input needs --labels".into()))?;
        let labels = ctx.read(path)?;
        LabeledDataset::load_fimi(&bytes[..], &labels[..])?
    };
    let algorithm = match a.algorithm {
        AlgorithmArg::Greedy => Algorithm::Greedy(GreedyOptions { use_cache: !a.no_cache, parallel: true }),
        AlgorithmArg::Select => Algorithm::Select {
            candidates: CandidateSource::Mine { minsup_frac: a.minsup_frac, max_len: a.max_size },
            options: SetPackOptions { mode: a.mode.into(), use_cache: !a.no_cache, ..Default::default() },
        },
    };
    let report = evaluate(&data, a.split, a.seed, &algorithm, a.prior)?;
    let manifest = ctx.manifest(a, Some(a.seed));
    if a.pretty {
        let mut text = format!(
            "accuracy  {:.4} ({}/{})\ntrain     {}\n\nconfusion (rows actual, columns predicted)\n",
            report.accuracy, report.correct, report.n_test, report.n_train
        );
        let w = report.classes.iter().map(String::len).max().unwrap_or(1).max(5);
        text += &format!("{:w$}", "");
        for c in &report.classes {
            text += &format!(" {c:>w$}");
        }
        text.push('\n');
        for (c, row) in report.classes.iter().zip(&report.confusion) {
            text += &format!("{c:w$}");
            for n in row {
                text += &format!(" {n:>w$}");
            }
            text.push('\n');
        }
        emit(None, &text)
    } else {
        emit(None, &to_json(&json!({ "manifest": manifest, "report": report })))
    }
}

fn cmd_stats(ctx: &mut Context, a: &StatsArgs) -> Result<()> {
    let ds = ctx.dataset(&a.input.input, a.input.format)?;
    let density = 100.0 * ds.density();
    if a.pretty {
        return emit(None, &format!("|D|    {}\nK      {}\n% 1's  {density:.1}\n", ds.n_rows(), ds.n_attrs()));
    }
    let manifest = ctx.manifest(a, None);
    emit(
        None,
        &to_json(&json!({
            "manifest": manifest,
            "n_rows": ds.n_rows(),
            "n_attrs": ds.n_attrs(),
            "density_percent": density,
            "renumbered": ds.renumbered(),
        })),
    )
}

fn cmd_synth(a: &SynthArgs) -> Result<()> {
    if a.rows == 0 || a.attrs == 0 {
        return Err(Error::InvalidArgument("--rows and --attrs must be positive".into()));
    }
    if !(0.0..=1.0).contains(&a.flip) {
        return Err(Error::InvalidArgument(format!("--flip {} must lie in [0, 1]", a.flip)));
    }
    match a.kind {
        SynthKind::Chain => emit(a.output.as_deref(), &synth::chain(a.rows, a.attrs, a.flip, a.seed).to_fimi()),
        SynthKind::Independent => emit(a.output.as_deref(), &synth::independent(a.rows, a.attrs, a.seed).to_fimi()),
        SynthKind::TwoClass => {
            let data = synth::two_class(a.rows, a.attrs, a.seed);
            let path = a
                .labels
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("two-class data needs --labels".into()))?;
            emit(Some(path), &(data.labels.join("\n") + "\n"))?;
            emit(a.output.as_deref(), &data.dataset.to_fimi())
        }
    }
}
