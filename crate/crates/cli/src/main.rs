//! `fetclust` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 for usage and
//! input errors.

mod config;
mod manifest;

use std::collections::HashMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fetclust::datasets;
use fetclust::graph::{read_vote_table, votes_preprocess, FeatureDomain};
use fetclust::metrics::{accuracy, ari, modularity, nmi_with, MatchStrategy, NmiNormalization};
use fetclust::synth::{generate, sweep_padd, sweep_to_tsv, DegreeModel, SynthSpec};
use fetclust::{
    cluster, BipartiteGraph, ClusterOptions, Dendrogram, LabelMap, OneModeGraph, Partition, TextOptions,
};

use manifest::Manifest;

/// Hierarchical clustering by the significance of shared features.
#[derive(Debug, Parser, Serialize)]
#[command(name = "fetclust", version, args_override_self = true)]
struct Cli {
    /// key=value file whose keys mirror the long flags of the subcommand
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads for the dissimilarity matrix, or `auto`
    #[arg(long, global = true, env = "FETCLUST_WORKERS", default_value = "auto")]
    workers: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Cluster a graph and write the tree, profile, partition and manifest
    Cluster(ClusterArgs),
    /// Generate two-block benchmark graphs or run a noise sweep
    Synth(SynthArgs),
    /// Score a partition against ground truth
    Eval(EvalArgs),
    /// Turn vote tables or attribute matrices into bipartite edge lists
    Preprocess(PreprocessArgs),
    /// Convert a saved dendrogram or cut it at a threshold
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Bipartite,
    Onemode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum InputFormat {
    /// two columns: entity, feature
    Edgelist,
    /// 0/1 matrix with entity labels in the first column and a header row
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Artifact {
    Newick,
    Json,
    Dot,
    Profile,
    Matrix,
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    /// Graph file
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Bundled dataset: karate, southern-women, or football (needs FETCLUST_DATA_DIR)
    #[arg(long, value_name = "NAME")]
    dataset: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct ClusterArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value_t = Mode::Bipartite)]
    mode: Mode,
    /// Layout of a bipartite input file
    #[arg(long, value_enum, default_value_t = InputFormat::Edgelist)]
    format: InputFormat,
    /// Field delimiter; whitespace when omitted
    #[arg(long)]
    delimiter: Option<char>,
    /// Clusters smaller than this are reported as unassigned
    #[arg(long, default_value_t = 2)]
    min_cluster_size: usize,
    /// Recompute every p-value instead of caching by counts
    #[arg(long)]
    no_memo: bool,
    /// Tree and matrix files to write next to the partition
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Artifact::Newick, Artifact::Json, Artifact::Dot, Artifact::Profile])]
    export: Vec<Artifact>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Uniform,
    Preferential,
}

#[derive(Debug, Args, Serialize)]
struct SynthArgs {
    #[arg(long, default_value_t = 50)]
    entities_per_block: usize,
    #[arg(long, default_value_t = 200)]
    features_per_block: usize,
    #[arg(long, default_value_t = 0.5)]
    p_in: f64,
    /// Cross-block edge probability; a comma-separated grid with --sweep
    #[arg(long, value_delimiter = ',', default_values_t = [0.0])]
    padd: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Model::Uniform)]
    model: Model,
    /// Feature attachments per entity in the preferential model
    #[arg(long, default_value_t = 4)]
    attachments: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the mean and spread of maximal susceptibility per p_add
    #[arg(long)]
    sweep: bool,
    /// Replicates per grid point with --sweep
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Normalization {
    Arithmetic,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Matching {
    Auto,
    Exhaustive,
    Greedy,
}

#[derive(Debug, Args, Serialize)]
struct EvalArgs {
    /// Partition file as written by `cluster`
    #[arg(long, value_name = "PATH")]
    partition: PathBuf,
    /// `node class` lines
    #[arg(long, value_name = "PATH")]
    truth: PathBuf,
    /// One-mode edge list; adds modularity to the report
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Normalization::Arithmetic)]
    nmi: Normalization,
    #[arg(long, value_enum, default_value_t = Matching::Auto)]
    matching: Matching,
    #[arg(long)]
    delimiter: Option<char>,
    /// Also write the report here
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false, id = "table")]
struct PreprocessInput {
    /// member, bill, cast code table
    #[arg(long, value_name = "PATH")]
    votes: Option<PathBuf>,
    /// 0/1 attribute matrix to expand into yes/no features
    #[arg(long, value_name = "PATH")]
    complement: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct PreprocessArgs {
    #[command(flatten)]
    input: PreprocessInput,
    #[arg(long)]
    delimiter: Option<char>,
    /// Output edge list
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ExportFormat {
    Newick,
    Json,
    Dot,
    /// flat partition at --threshold
    Partition,
}

#[derive(Debug, Args, Serialize)]
struct ExportArgs {
    /// Dendrogram JSON as written by `cluster`
    #[arg(long, value_name = "PATH")]
    dendrogram: PathBuf,
    #[arg(long, value_enum)]
    format: ExportFormat,
    /// Partition used to color DOT leaves
    #[arg(long, value_name = "PATH")]
    partition: Option<PathBuf>,
    /// log10 p-value at which to cut for `--format partition`
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Failure classes that map onto exit codes.
#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    Compute(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

/// Library errors caused by the content of the inputs.
fn is_input_error(e: &fetclust::Error) -> bool {
    use fetclust::Error::*;
    matches!(
        e,
        Parse { .. }
            | NoEdges
            | NonBinaryCell { .. }
            | RaggedRow { .. }
            | DuplicateLabel(_)
            | InvalidCastCode { .. }
            | DuplicateVote { .. }
            | SelfLoop(_)
            | Asymmetric(..)
            | UnknownLabel(_)
            | UniverseMismatch(..)
            | InvalidParameter(_)
            | MalformedDendrogram(_)
    )
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let input = e.chain().any(|c| {
            c.downcast_ref::<std::io::Error>().is_some()
                || c.downcast_ref::<fetclust::Error>().is_some_and(is_input_error)
        });
        if input {
            Failure::Input(e)
        } else {
            Failure::Compute(e)
        }
    }
}

type CmdResult = Result<(), Failure>;

fn input_err(e: anyhow::Error) -> Failure {
    Failure::Input(e)
}

fn text_options(delimiter: Option<char>) -> TextOptions {
    TextOptions {
        delimiter,
        ..TextOptions::default()
    }
}

fn read_input(path: &Path, manifest: &mut Manifest) -> Result<String, Failure> {
    let bytes = fs::read(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input_err)?;
    manifest.add_input(&path.display().to_string(), &bytes);
    String::from_utf8(bytes)
        .with_context(|| format!("{} is not UTF-8", path.display()))
        .map_err(input_err)
}

fn create_dir(dir: &Path) -> CmdResult {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
        .map_err(input_err)
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(input_err)
}

enum Loaded {
    Bipartite(BipartiteGraph),
    OneMode(OneModeGraph),
}

fn load_graph(args: &ClusterArgs, manifest: &mut Manifest) -> Result<Loaded, Failure> {
    let opts = text_options(args.delimiter);
    // Bundled datasets carry their own layout; --mode and --format apply to files.
    let (text, mode, format) = match (&args.source.input, &args.source.dataset) {
        (Some(path), _) => (read_input(path, manifest)?, args.mode, args.format),
        (None, Some(name)) if name == "football" => {
            let (g, _) = datasets::football().ok_or_else(|| {
                Failure::Input(anyhow!(
                    "football data not found; set {} to a directory with football.edges and football.truth",
                    datasets::DATA_DIR_ENV
                ))
            })?;
            let text = g.to_edgelist();
            manifest.add_input("dataset:football", text.as_bytes());
            (text, Mode::Onemode, InputFormat::Edgelist)
        }
        (None, Some(name)) => {
            let data = datasets::bundled(name).ok_or_else(|| {
                Failure::Input(anyhow!(
                    "unknown dataset {name:?}; available: {}, football",
                    datasets::NAMES.join(", ")
                ))
            })?;
            manifest.add_input(&format!("dataset:{name}"), data.graph.as_bytes());
            let (mode, format) = if name == "southern-women" {
                (Mode::Bipartite, InputFormat::Matrix)
            } else {
                (Mode::Onemode, InputFormat::Edgelist)
            };
            (data.graph.to_owned(), mode, format)
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let opts = if args.source.input.is_some() {
        opts
    } else {
        TextOptions::default()
    };
    let loaded = match (mode, format) {
        (Mode::Onemode, _) => {
            let l = OneModeGraph::read_edgelist(text.as_bytes(), &opts)?;
            report_duplicates(l.duplicates);
            Loaded::OneMode(l.graph)
        }
        (Mode::Bipartite, InputFormat::Edgelist) => {
            let l = BipartiteGraph::read_edgelist(text.as_bytes(), &opts)?;
            report_duplicates(l.duplicates);
            Loaded::Bipartite(l.graph)
        }
        (Mode::Bipartite, InputFormat::Matrix) => {
            Loaded::Bipartite(BipartiteGraph::read_matrix(text.as_bytes(), &opts)?)
        }
    };
    Ok(loaded)
}

fn report_duplicates(n: usize) {
    if n > 0 {
        eprintln!("collapsed {n} duplicate edges");
    }
}

impl From<fetclust::Error> for Failure {
    fn from(e: fetclust::Error) -> Self {
        if is_input_error(&e) {
            Failure::Input(e.into())
        } else {
            Failure::Compute(e.into())
        }
    }
}

fn cmd_cluster(args: &ClusterArgs, manifest: &mut Manifest) -> CmdResult {
    let graph = load_graph(args, manifest)?;
    create_dir(&args.out)?;
    let opts = ClusterOptions {
        min_cluster_size: args.min_cluster_size,
        memoize: !args.no_memo,
    };
    let bipartite = match &graph {
        Loaded::Bipartite(g) => g.clone(),
        Loaded::OneMode(g) => fetclust::onemode::to_bipartite(g),
    };
    let result = cluster(&bipartite, &opts)?;
    let labels = bipartite.entity_labels();
    let opt = &result.optimal;

    let mut written = vec!["partition.tsv".to_owned()];
    write(&args.out.join("partition.tsv"), &opt.partition.to_tsv(labels))?;
    for artifact in dedup(&args.export) {
        let (name, text) = match artifact {
            Artifact::Newick => ("dendrogram.nwk", result.dendrogram.to_newick()),
            Artifact::Json => ("dendrogram.json", result.dendrogram.to_json()),
            Artifact::Dot => ("dendrogram.dot", result.dendrogram.to_dot(Some(&opt.partition))),
            Artifact::Profile => ("profile.tsv", opt.profile.to_tsv()),
            Artifact::Matrix => ("matrix.tsv", result.matrix.to_tsv(labels)),
        };
        write(&args.out.join(name), &text)?;
        written.push(name.to_owned());
    }
    manifest.set_outputs(written);
    manifest.write(&args.out)?;

    println!(
        "{} entities, {} clusters, {} unassigned, chi {:.4} at log10 p {}",
        labels.len(),
        opt.partition.num_clusters(),
        opt.partition.unassigned_count(),
        opt.chi,
        opt.threshold
    );
    Ok(())
}

fn dedup(xs: &[Artifact]) -> Vec<Artifact> {
    let mut out: Vec<Artifact> = Vec::new();
    for &x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn cmd_synth(args: &SynthArgs, manifest: &mut Manifest) -> CmdResult {
    let degree_model = match args.model {
        Model::Uniform => DegreeModel::Uniform,
        Model::Preferential => DegreeModel::Preferential {
            attachments: args.attachments,
        },
    };
    let base = SynthSpec {
        entities_per_block: args.entities_per_block,
        features_per_block: args.features_per_block,
        p_in: args.p_in,
        p_add: args.padd[0],
        degree_model,
        seed: args.seed,
    };
    for &p_add in &args.padd {
        SynthSpec {
            p_add,
            ..base.clone()
        }
        .validate()?;
    }
    create_dir(&args.out)?;
    if args.sweep {
        let rows = sweep_padd(&base, &args.padd, args.reps)?;
        write(&args.out.join("sweep.tsv"), &sweep_to_tsv(&rows))?;
        manifest.set_outputs(vec!["sweep.tsv".into()]);
        for r in &rows {
            println!("p_add {}: mean chi {:.4} ± {:.4}", r.p_add, r.mean_chi, r.std_chi);
        }
    } else {
        if args.padd.len() != 1 {
            return Err(Failure::Input(anyhow!("a list of --padd values needs --sweep")));
        }
        let (g, truth) = generate(&base)?;
        write(&args.out.join("graph.edges"), &g.to_edgelist())?;
        write(&args.out.join("truth.tsv"), &truth.to_text())?;
        manifest.set_outputs(vec!["graph.edges".into(), "truth.tsv".into()]);
        println!(
            "{} entities, {} features, {} edges",
            g.num_entities(),
            g.num_features(),
            g.num_edges()
        );
    }
    manifest.write(&args.out)
}

fn cmd_eval(args: &EvalArgs, manifest: &mut Manifest) -> CmdResult {
    let opts = text_options(args.delimiter);
    let (nodes, partition) = Partition::from_tsv(&read_input(&args.partition, manifest)?)?;
    let truth = LabelMap::read(read_input(&args.truth, manifest)?.as_bytes(), &opts)?;

    let missing = truth.missing(&nodes);
    if !missing.is_empty() {
        return Err(Failure::Input(anyhow!(
            "truth file {} has no class for: {}",
            args.truth.display(),
            missing.join(", ")
        )));
    }
    let known: std::collections::HashSet<&str> = nodes.iter().map(String::as_str).collect();
    let extra: Vec<&str> = truth
        .iter()
        .map(|(n, _)| n)
        .filter(|n| !known.contains(n))
        .collect();
    if !extra.is_empty() {
        return Err(Failure::Input(anyhow!(
            "truth file {} labels nodes absent from the partition: {}",
            args.truth.display(),
            extra.join(", ")
        )));
    }
    let (truth_partition, classes) = truth.to_partition(&nodes)?;

    let norm = match args.nmi {
        Normalization::Arithmetic => NmiNormalization::Arithmetic,
        Normalization::Max => NmiNormalization::Max,
    };
    let strategy = match args.matching {
        Matching::Auto => MatchStrategy::Auto,
        Matching::Exhaustive => MatchStrategy::Exhaustive,
        Matching::Greedy => MatchStrategy::Greedy,
    };
    let acc = accuracy(&partition, &truth_partition, strategy)?;
    let mut report = String::from("metric\tvalue\n");
    report += &format!("nmi\t{}\n", nmi_with(&partition, &truth_partition, norm)?);
    report += &format!("ari\t{}\n", ari(&partition, &truth_partition)?);
    report += &format!("accuracy\t{}\n", acc.overall);
    report += &format!("accuracy_classified\t{}\n", acc.classified_only);

    if let Some(path) = &args.graph {
        let g = OneModeGraph::read_edgelist(read_input(path, manifest)?.as_bytes(), &opts)?.graph;
        let position: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let absent: Vec<&str> = g
            .labels()
            .iter()
            .map(String::as_str)
            .filter(|l| !position.contains_key(l))
            .collect();
        if !absent.is_empty() {
            return Err(Failure::Input(anyhow!(
                "graph nodes missing from the partition: {}",
                absent.join(", ")
            )));
        }
        let aligned = Partition::from_assignment(
            g.labels()
                .iter()
                .map(|l| partition.assignment()[position[l.as_str()]])
                .collect(),
        );
        report += &format!("modularity\t{}\n", modularity(&g, &aligned)?);
    }
    report += "\ncluster\tlabel\n";
    for (c, t) in &acc.matching {
        report += &format!("{c}\t{}\n", classes[*t]);
    }

    print!("{report}");
    if let Some(out) = &args.out {
        write(out, &report)?;
    }
    Ok(())
}

fn cmd_preprocess(args: &PreprocessArgs, manifest: &mut Manifest) -> CmdResult {
    let opts = text_options(args.delimiter);
    let graph = match (&args.input.votes, &args.input.complement) {
        (Some(path), _) => {
            let text = read_input(path, manifest)?;
            votes_preprocess(&read_vote_table(BufReader::new(text.as_bytes()), &opts)?)?
        }
        (None, Some(path)) => {
            let text = read_input(path, manifest)?;
            BipartiteGraph::read_matrix(text.as_bytes(), &opts)?
                .binarize_with_complement(&FeatureDomain::All)?
        }
        (None, None) => unreachable!("clap requires one table"),
    };
    write(&args.out, &graph.to_edgelist())?;
    println!(
        "{} entities, {} features, {} edges",
        graph.num_entities(),
        graph.num_features(),
        graph.num_edges()
    );
    Ok(())
}

fn cmd_export(args: &ExportArgs, manifest: &mut Manifest) -> CmdResult {
    let tree = Dendrogram::from_json(&read_input(&args.dendrogram, manifest)?)?;
    let partition = match &args.partition {
        Some(path) => {
            let (nodes, p) = Partition::from_tsv(&read_input(path, manifest)?)?;
            if nodes != tree.leaf_labels() {
                return Err(Failure::Input(anyhow!(
                    "partition {} does not list the dendrogram leaves in order",
                    path.display()
                )));
            }
            Some(p)
        }
        None => None,
    };
    let text = match args.format {
        ExportFormat::Newick => tree.to_newick(),
        ExportFormat::Json => tree.to_json(),
        ExportFormat::Dot => tree.to_dot(partition.as_ref()),
        ExportFormat::Partition => {
            let h = args
                .threshold
                .ok_or_else(|| Failure::Input(anyhow!("--format partition needs --threshold")))?;
            tree.cut(h).to_tsv(tree.leaf_labels())
        }
    };
    match &args.out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_workers(spec: &str) -> CmdResult {
    if spec == "auto" {
        return Ok(());
    }
    let n: usize = spec.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Input(anyhow!(
            "--workers must be a positive integer or `auto`, got {spec:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Compute(e.into()))
}

fn run(cli: &Cli) -> CmdResult {
    configure_workers(&cli.workers)?;
    let mut manifest = Manifest::new(cli);
    match &cli.command {
        Command::Cluster(a) => cmd_cluster(a, &mut manifest),
        Command::Synth(a) => cmd_synth(a, &mut manifest),
        Command::Eval(a) => cmd_eval(a, &mut manifest),
        Command::Preprocess(a) => cmd_preprocess(a, &mut manifest),
        Command::Export(a) => cmd_export(a, &mut manifest),
    }
}

fn main() -> ExitCode {
    let argv = match config::expand_args(std::env::args_os().collect()) {
        Ok(argv) => argv,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(argv);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.code();
            let (Failure::Input(e) | Failure::Compute(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
