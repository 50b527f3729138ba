//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::builder::{build_arborescence, BuildConfig, InsertionOrder, ParentRule};
use crate::distance::DistanceKind;
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::eval::{
    accuracy_by_edge_length, accuracy_by_node_power, accuracy_by_tree_level, edge_accuracy,
    synonym_accuracy, sweep_p, AccuracyCurve, EvalReport, LcaInputs, Method,
};
use crate::io::{
    export_tree, load_embedding, load_lch, load_power_file, load_rank_file, load_relations, load_tree,
    write_csv, EmbeddingFormat, LabeledTree, TreeFormat,
};
use crate::lca::{hit_rate, lca_closure, lch_closure, sample_pairs, LcaIndex};
use crate::nnindex::{BallTree, DEFAULT_LEAF_SIZE};
use crate::power::{
    debias_embedding, degree_power, fit_pca, hypernym_rank_scatter, norm_rank_curve, pagerank_power,
    pca_power, power_rank_curve, zipf_power, PageRankConfig, PowerAssignment,
};
use crate::relations::RelationSet;
use crate::subtrees::extract_subtrees;
use crate::tree::node_of;

#[derive(Debug, Parser)]
#[command(name = "orient", version, about = "Build and evaluate power-ordered arborescences over embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a tree and write it as json, dot or tsv.
    Build(BuildArgs),
    /// Score tree edges against ground-truth pairs.
    EvalEdges(EvalEdgesArgs),
    /// LCA hit-rate against lowest-common-hypernym ground truth.
    EvalLca(EvalLcaArgs),
    /// Build and evaluate over a grid of p values and insertion methods.
    Sweep(SweepArgs),
    /// Compute entity powers and optional diagnostics.
    Power(PowerArgs),
    /// Cut long edges and write the resulting clusters.
    Cut(CutArgs),
}

/// Where entity powers come from.
#[derive(Debug, Clone, PartialEq)]
enum PowerSpec {
    Zipf,
    Pca,
    Degree,
    PageRank,
    File(PathBuf),
}

impl FromStr for PowerSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zipf" => Ok(PowerSpec::Zipf),
            "pca" => Ok(PowerSpec::Pca),
            "degree" => Ok(PowerSpec::Degree),
            "pagerank" => Ok(PowerSpec::PageRank),
            other => match other.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(PowerSpec::File(PathBuf::from(p))),
                _ => Err(format!("expected zipf|pca|degree|pagerank|file:PATH, got `{other}`")),
            },
        }
    }
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    embedding: PathBuf,
    /// glove or word2vec (text).
    #[arg(long, default_value = "glove")]
    format: EmbeddingFormat,
    /// zipf | pca | degree | pagerank | file:PATH
    #[arg(long, default_value = "zipf")]
    power: PowerSpec,
    /// Number of principal components for pca power.
    #[arg(long, default_value_t = 3)]
    pca_k: usize,
    /// Keep the raw vectors when using pca power.
    #[arg(long)]
    no_debias: bool,
    /// Edge list for degree and pagerank power (defaults to --truth).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// One label per line, most frequent first; overrides file order.
    #[arg(long)]
    rank_file: Option<PathBuf>,
    /// Keep only entities that appear in the --truth relation file.
    #[arg(long)]
    restrict_to_truth: bool,
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[arg(long, default_value = "l2")]
    distance: DistanceKind,
    #[arg(long, default_value_t = 0.6)]
    p: f64,
    #[arg(long, default_value = "desc")]
    order: InsertionOrder,
    #[arg(long, default_value = "score")]
    parent_rule: ParentRule,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scan all candidates instead of using the ball tree.
    #[arg(long)]
    no_accel: bool,
    #[arg(long, default_value_t = DEFAULT_LEAF_SIZE)]
    leaf_size: usize,
}

impl TreeArgs {
    fn config(&self) -> BuildConfig {
        BuildConfig {
            p: self.p,
            distance: self.distance,
            order: self.order,
            parent_rule: self.parent_rule,
            seed: self.seed,
            accelerated: !self.no_accel,
            leaf_size: self.leaf_size,
            ..BuildConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    tree: TreeArgs,
    /// Relation file used by --restrict-to-truth and as the default graph.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Output path; the format follows the extension unless --tree-format is set.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    tree_format: Option<TreeFormat>,
}

#[derive(Debug, Args)]
struct EvalEdgesArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Symmetric synonym pairs for the synonym accuracy.
    #[arg(long)]
    synonyms: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    buckets: usize,
    /// Moving-average window for the smoothed curve columns.
    #[arg(long, default_value_t = 50)]
    smooth: usize,
    /// Directory for the per-curve CSV files.
    #[arg(long)]
    curves: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalLcaArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
    #[arg(long, default_value = "glove")]
    format: EmbeddingFormat,
    #[arg(long)]
    lch: PathBuf,
    /// Hypernym edges used to close the LCH sets.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    #[arg(long, default_value_t = 20)]
    knn: usize,
    /// Ancestor radius on the tree side.
    #[arg(long, default_value_t = 2)]
    closure: usize,
    /// Hypernym-hop radius on the ground-truth side (needs --truth).
    #[arg(long, default_value_t = 2)]
    lch_closure: usize,
    #[arg(long, default_value = "l2")]
    distance: DistanceKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    tree: TreeArgs,
    #[arg(long)]
    truth: PathBuf,
    /// `lo:hi:step` or a comma-separated list.
    #[arg(long, default_value = "0:1:0.1", value_parser = parse_grid)]
    p_grid: Grid,
    /// Comma-separated subset of desc,rand,asc,random-selection.
    #[arg(long, default_value = "desc,rand,asc,random-selection", value_delimiter = ',')]
    orders: Vec<Method>,
    /// Optional LCH file; adds a hit-rate column.
    #[arg(long)]
    lch: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    #[arg(long, default_value_t = 20)]
    knn: usize,
    #[arg(long, default_value_t = 2)]
    closure: usize,
    #[arg(long, default_value_t = 2)]
    lch_closure: usize,
    /// Output CSV (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Directory for norm-rank, power-rank and hypernym-rank CSVs.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    window: usize,
}

#[derive(Debug, Args)]
struct CutArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long, default_value_t = 90.0)]
    percentile: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}`"));
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if step.is_nan() || step <= 0.0 || hi < lo {
                return Err("grid needs lo <= hi and step > 0".into());
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
                .collect()
        }
        [list] => list.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?,
        _ => return Err("expected lo:hi:step or a comma-separated list".into()),
    };
    if values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err("p values must lie in [0, 1]".into());
    }
    Ok(Grid(values))
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Build(a) => cmd_build(a),
        Command::EvalEdges(a) => cmd_eval_edges(a),
        Command::EvalLca(a) => cmd_eval_lca(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Power(a) => cmd_power(a),
        Command::Cut(a) => cmd_cut(a),
    }
}

struct Prepared {
    embedding: EmbeddingSet,
    powers: PowerAssignment,
}

fn load_truth(path: &Path) -> Result<RelationSet> {
    load_relations(path, "truth")
}

/// Load, reorder, restrict, compute powers, and debias if asked.
fn prepare(d: &DataArgs, truth: Option<&RelationSet>) -> Result<Prepared> {
    let mut e = load_embedding(&d.embedding, d.format)?;
    if let Some(rf) = &d.rank_file {
        e = e.reorder_by_rank(&load_rank_file(rf)?)?;
    }
    if d.restrict_to_truth {
        let t = truth.ok_or_else(|| Error::InvalidParameter("--restrict-to-truth needs --truth".into()))?;
        let keep: HashSet<&str> = t.labels().into_iter().collect();
        e = e.restrict_to(&keep)?;
    }
    let graph = || -> Result<RelationSet> {
        match (&d.graph, truth) {
            (Some(p), _) => load_relations(p, "graph"),
            (None, Some(t)) => Ok(t.clone()),
            (None, None) => Err(Error::InvalidParameter("degree and pagerank power need --graph".into())),
        }
    };
    let (embedding, powers) = match &d.power {
        PowerSpec::Zipf => {
            let p = zipf_power(e.len())?;
            (e, p)
        }
        PowerSpec::Pca => {
            let model = fit_pca(&e, d.pca_k)?;
            let p = pca_power(&e, &model)?;
            let e = if d.no_debias { e } else { debias_embedding(&e, &model)? };
            (e, p)
        }
        PowerSpec::Degree => {
            let p = degree_power(&graph()?, &e)?;
            (e, p)
        }
        PowerSpec::PageRank => {
            let p = pagerank_power(&graph()?, &e, PageRankConfig::default())?;
            (e, p)
        }
        PowerSpec::File(path) => {
            let raw = load_power_file(path, &e)?;
            let p = PowerAssignment::from_raw(raw, crate::power::PowerSource::External)?;
            (e, p)
        }
    };
    Ok(Prepared { embedding, powers })
}

fn power_name(spec: &PowerSpec) -> String {
    match spec {
        PowerSpec::Zipf => "zipf".into(),
        PowerSpec::Pca => "pca".into(),
        PowerSpec::Degree => "degree".into(),
        PowerSpec::PageRank => "pagerank".into(),
        PowerSpec::File(p) => format!("file:{}", p.display()),
    }
}

fn cmd_build(a: BuildArgs) -> Result<()> {
    let truth = a.truth.as_deref().map(load_truth).transpose()?;
    let prep = prepare(&a.data, truth.as_ref())?;
    let cfg = a.tree.config();
    let tree = build_arborescence(&prep.embedding, &prep.powers, &cfg)?;
    let mut lt = LabeledTree::new(prep.embedding.labels().to_vec(), tree)?;
    lt.powers = Some(prep.powers.powers().to_vec());
    let meta = [
        ("p", serde_json::json!(cfg.p)),
        ("distance", serde_json::json!(cfg.distance.to_string())),
        ("order", serde_json::json!(cfg.order.to_string())),
        ("parent_rule", serde_json::json!(cfg.parent_rule)),
        ("seed", serde_json::json!(cfg.seed)),
        ("power", serde_json::json!(power_name(&a.data.power))),
        ("n_entities", serde_json::json!(prep.embedding.len())),
    ];
    lt.metadata = meta.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
    let format = a.tree_format.unwrap_or_else(|| TreeFormat::from_path(&a.out));
    export_tree(&lt, &a.out, format)
}

#[derive(Serialize)]
struct CurveRow {
    bucket: usize,
    x: f64,
    mean_key: f64,
    edges: usize,
    directed_hits: usize,
    reversed_hits: usize,
    undirected_hits: usize,
    directed_acc: f64,
    undirected_acc: f64,
    directed_smoothed: f64,
    undirected_smoothed: f64,
}

fn curve_rows(c: &AccuracyCurve, window: usize) -> Vec<CurveRow> {
    let (ds, us) = (c.smoothed_directed(window), c.smoothed_undirected(window));
    c.points
        .iter()
        .enumerate()
        .map(|(i, p)| CurveRow {
            bucket: i,
            x: p.x,
            mean_key: p.mean_key,
            edges: p.hits.edges,
            directed_hits: p.hits.directed,
            reversed_hits: p.hits.reversed,
            undirected_hits: p.hits.undirected,
            directed_acc: p.hits.directed_acc(),
            undirected_acc: p.hits.undirected_acc(),
            directed_smoothed: ds[i],
            undirected_smoothed: us[i],
        })
        .collect()
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|e| Error::io("<stdout>", e))
}

fn cmd_eval_edges(a: EvalEdgesArgs) -> Result<()> {
    let lt = load_tree(&a.tree)?;
    let truth = load_truth(&a.truth)?.resolve_labels(&lt.labels);
    let mut report: EvalReport = edge_accuracy(&lt.tree, &truth)?;
    if let Some(s) = &a.synonyms {
        let syn = load_relations(s, "synonym")?.resolve_labels(&lt.labels);
        report.synonym_acc = Some(synonym_accuracy(&lt.tree, &syn)?);
    }
    if let Some(dir) = &a.curves {
        crate::io::ensure_dir(dir)?;
        let by_len = accuracy_by_edge_length(&lt.tree, &truth, a.buckets)?;
        write_csv(dir.join("accuracy_by_edge_length.csv"), curve_rows(&by_len, a.smooth))?;
        let by_level = accuracy_by_tree_level(&lt.tree, &truth)?;
        write_csv(dir.join("accuracy_by_tree_level.csv"), curve_rows(&by_level, a.smooth))?;
        if let Some(p) = &lt.powers {
            let powers = PowerAssignment::from_raw(p.clone(), crate::power::PowerSource::External)?;
            let by_power = accuracy_by_node_power(&lt.tree, &truth, &powers, a.buckets)?;
            write_csv(dir.join("accuracy_by_node_power.csv"), curve_rows(&by_power, a.smooth))?;
        }
    }
    #[derive(Serialize)]
    struct Out<'a> {
        report: &'a EvalReport,
        truth_pairs_resolved: usize,
        truth_pairs_dropped: usize,
    }
    print_json(&Out {
        report: &report,
        truth_pairs_resolved: truth.len(),
        truth_pairs_dropped: truth.dropped,
    })
}

/// Aligns the embedding rows with the tree's entity order.
fn align_embedding(e: &EmbeddingSet, labels: &[String]) -> Result<EmbeddingSet> {
    let rows = labels
        .iter()
        .map(|l| e.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone())))
        .collect::<Result<Vec<_>>>()?;
    e.select(&rows)
}

/// Samples pairs and builds the closed ground-truth sets as entity indices.
#[allow(clippy::too_many_arguments)]
fn lca_inputs(
    e: &EmbeddingSet,
    powers: &PowerAssignment,
    kind: DistanceKind,
    lch_path: &Path,
    hypernyms: Option<&RelationSet>,
    n_pairs: usize,
    k: usize,
    lch_radius: usize,
    tree_closure: usize,
    seed: u64,
) -> Result<LcaInputs> {
    let table = load_lch(lch_path)?;
    let index = BallTree::build(e, powers, kind, DEFAULT_LEAF_SIZE)?;
    let pairs = sample_pairs(e, &index, n_pairs, k, seed)?;
    let empty = RelationSet::default();
    let hyp = hypernyms.unwrap_or(&empty);
    let radius = if hypernyms.is_some() { lch_radius } else { 0 };
    let truth_sets = pairs
        .iter()
        .map(|&(a, b)| {
            let base = table.get(e.label(a), e.label(b)).cloned().unwrap_or_default();
            lch_closure(hyp, &base, radius)
                .iter()
                .filter_map(|l| e.index_of(l))
                .collect::<BTreeSet<usize>>()
        })
        .collect();
    Ok(LcaInputs {
        pairs,
        truth_sets,
        tree_closure,
    })
}

fn cmd_eval_lca(a: EvalLcaArgs) -> Result<()> {
    let lt = load_tree(&a.tree)?;
    let e = align_embedding(&load_embedding(&a.embedding, a.format)?, &lt.labels)?;
    let hyp = a.truth.as_deref().map(load_truth).transpose()?;
    let powers = zipf_power(e.len())?;
    let inputs = lca_inputs(
        &e, &powers, a.distance, &a.lch, hyp.as_ref(), a.pairs, a.knn, a.lch_closure, a.closure, a.seed,
    )?;
    let index = LcaIndex::new(&lt.tree);
    let tree_sets = inputs
        .pairs
        .iter()
        .map(|&(x, y)| lca_closure(&index, &lt.tree, node_of(x), node_of(y), a.closure))
        .collect::<Result<Vec<_>>>()?;
    let rate = hit_rate(&tree_sets, &inputs.truth_sets)?;
    #[derive(Serialize)]
    struct Out {
        hit_rate: f64,
        pairs: usize,
        scorable_pairs: usize,
        closure: usize,
        lch_closure: usize,
    }
    print_json(&Out {
        hit_rate: rate,
        pairs: inputs.pairs.len(),
        scorable_pairs: inputs.truth_sets.iter().filter(|s| !s.is_empty()).count(),
        closure: a.closure,
        lch_closure: if hyp.is_some() { a.lch_closure } else { 0 },
    })
}

#[derive(Serialize)]
struct SweepCsvRow {
    method: String,
    p: Option<f64>,
    edges: usize,
    directed: f64,
    reversed: f64,
    undirected: f64,
    hit_rate: Option<f64>,
    best: bool,
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let truth_set = load_truth(&a.truth)?;
    let prep = prepare(&a.data, Some(&truth_set))?;
    let e = &prep.embedding;
    let truth = truth_set.resolve(e);
    let lca = match &a.lch {
        Some(path) => Some(lca_inputs(
            e,
            &prep.powers,
            a.tree.distance,
            path,
            Some(&truth_set),
            a.pairs,
            a.knn,
            a.lch_closure,
            a.closure,
            a.tree.seed,
        )?),
        None => None,
    };
    let table = sweep_p(e, &prep.powers, &a.tree.config(), &a.p_grid.0, &a.orders, &truth, lca.as_ref())?;
    let best: HashMap<String, (Option<f64>, f64)> = table
        .methods()
        .into_iter()
        .filter_map(|m| table.best(m).map(|r| (m.to_string(), (r.p, r.report.directed_acc))))
        .collect();
    let rows: Vec<SweepCsvRow> = table
        .rows
        .iter()
        .map(|r| SweepCsvRow {
            method: r.method.to_string(),
            p: r.p,
            edges: r.report.n_edges(),
            directed: r.report.directed_acc,
            reversed: r.report.reversed_acc,
            undirected: r.report.undirected_acc,
            hit_rate: r.hit_rate,
            best: best.get(&r.method.to_string()).is_some_and(|b| b.0 == r.p),
        })
        .collect();
    match &a.out {
        Some(path) => write_csv(path, rows),
        None => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(std::io::stdout().lock());
            for r in rows {
                w.serialize(r)?;
            }
            w.flush().map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn cmd_power(a: PowerArgs) -> Result<()> {
    let truth = a.truth.as_deref().map(load_truth).transpose()?;
    let prep = prepare(&a.data, truth.as_ref())?;
    let e = &prep.embedding;
    #[derive(Serialize)]
    struct Row<'a> {
        rank: usize,
        label: &'a str,
        power: f64,
    }
    write_csv(
        &a.out,
        (0..e.len()).map(|i| Row {
            rank: i,
            label: e.label(i),
            power: prep.powers.get(i),
        }),
    )?;
    if let Some(dir) = &a.diagnostics {
        crate::io::ensure_dir(dir)?;
        #[derive(Serialize)]
        struct Point {
            rank: usize,
            value: f64,
        }
        // norms are taken from the file's vectors, before any debiasing
        let raw = load_embedding(&a.data.embedding, a.data.format)?;
        let raw = match &a.data.rank_file {
            Some(rf) => raw.reorder_by_rank(&load_rank_file(rf)?)?,
            None => raw,
        };
        write_csv(
            dir.join("norm_rank.csv"),
            norm_rank_curve(&raw, a.window).into_iter().map(|(rank, value)| Point { rank, value }),
        )?;
        let curve = power_rank_curve(&prep.powers, a.window);
        write_csv(
            dir.join("power_rank.csv"),
            curve.points.iter().map(|&(rank, value)| Point { rank, value }),
        )?;
        if let Some(t) = &truth {
            let rank_of: HashMap<String, usize> =
                e.labels().iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
            let scatter = hypernym_rank_scatter(t, &rank_of);
            #[derive(Serialize)]
            struct Pair {
                hyponym_rank: usize,
                hypernym_rank: usize,
            }
            write_csv(
                dir.join("hypernym_rank_scatter.csv"),
                scatter.points.iter().map(|&(c, p)| Pair {
                    hyponym_rank: c,
                    hypernym_rank: p,
                }),
            )?;
            println!("fraction_below_diagonal={}", scatter.fraction_below_diagonal);
        }
        println!("power_rank_spearman={}", curve.spearman);
    }
    Ok(())
}

fn cmd_cut(a: CutArgs) -> Result<()> {
    let lt = load_tree(&a.tree)?;
    let forest = extract_subtrees(&lt.tree, a.percentile)?;
    #[derive(Serialize)]
    struct Cluster<'a> {
        root: &'a str,
        members: Vec<&'a str>,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        percentile: f64,
        threshold: Option<f64>,
        removed_edges: usize,
        clusters: Vec<Cluster<'a>>,
    }
    let out = Out {
        percentile: a.percentile,
        threshold: forest.threshold,
        removed_edges: forest.removed_edges,
        clusters: forest
            .clusters
            .iter()
            .map(|c| Cluster {
                root: &lt.labels[c.root],
                members: c.members.iter().map(|&m| lt.labels[m].as_str()).collect(),
            })
            .collect(),
    };
    let file = std::fs::File::create(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let mut w = std::io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &out)?;
    writeln!(w).map_err(|e| Error::io(&a.out, e))?;
    w.flush().map_err(|e| Error::io(&a.out, e))
}
