use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use tracing::{info, warn};
use wos_core::api::{self, AppState};
use wos_core::geo::{format_geo_table, parse_geo_table, GeoTable};
use wos_core::ingest::{build_scholars, filter_by_field, parse_corpus};
use wos_core::mine::advisor::{labeled_features, parse_labeled_pairs, AdvisorContext, AdvisorParams, LabeledPair};
use wos_core::mine::{fit_advisor_weights, mine_graph, FitConfig, MineConfig, DEFAULT_TEAM_THRESHOLD};
use wos_core::ranking::{ranked_list, Measure};
use wos_core::synth::{self, SynthConfig, SynthManifest};
use wos_core::{export, snapshot, EdgeKind, KnowledgeGraph, PublicationRecord};

#[derive(Debug, Parser)]
#[command(name = "wos", version, about = "Build, query and serve a scholar knowledge graph")]
struct Cli {
    /// trace, debug, info, warn or error.
    #[arg(long, global = true, default_value = "warn")]
    log_level: tracing::Level,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic corpus with planted advisor pairs.
    Synth(SynthArgs),
    /// Parse a corpus into an unmined snapshot.
    Ingest(IngestArgs),
    /// Mine relationship edges into a snapshot.
    Mine(MineArgs),
    /// Fit advisor-scoring weights from labeled pairs.
    Fit(FitArgs),
    /// Print a ranking list.
    Rank(RankArgs),
    /// Serve the HTTP API over a snapshot.
    Serve(ServeArgs),
    /// Write a snapshot as a node-link document.
    Export(ExportArgs),
    /// Rebuild a snapshot from a node-link document.
    Import(ImportArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 100)]
    scholars: usize,
    #[arg(long, default_value_t = 500)]
    pubs: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Planted advisor pairs; defaults to 30% of scholars.
    #[arg(long)]
    advisor_pairs: Option<usize>,
    /// Directory for corpus.jsonl, geo.tsv, labels.tsv and manifest.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Keep only publications tagged with this field.
    #[arg(long)]
    field: Option<String>,
    /// Institution coordinates, `institution<TAB>lat<TAB>lng` per line.
    #[arg(long)]
    geo: Option<PathBuf>,
    #[arg(long)]
    snapshot: PathBuf,
}

#[derive(Debug, Args)]
struct MineArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// Write here instead of overwriting the input snapshot.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "coauthor,advisor,cites,cocited,team")]
    kinds: Vec<EdgeKind>,
    /// Advisor score threshold.
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = DEFAULT_TEAM_THRESHOLD)]
    team_threshold: f64,
    /// Fitted weights file written by `fit`.
    #[arg(long, conflicts_with_all = ["weights", "bias"])]
    params: Option<PathBuf>,
    /// Four comma-separated advisor feature weights.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    bias: Option<f64>,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Labeled pairs as TSV or a synth manifest.json.
    #[arg(long)]
    labels: PathBuf,
    /// Corpus the labels refer to; alternatively pass --snapshot.
    #[arg(long, required_unless_present = "snapshot", conflicts_with = "snapshot")]
    corpus: Option<PathBuf>,
    #[arg(long)]
    snapshot: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    #[arg(long, default_value_t = 20_000)]
    iterations: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Mini-batch size; full batch when omitted.
    #[arg(long)]
    batch_size: Option<usize>,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long)]
    measure: Measure,
    #[arg(long, default_value_t = 0)]
    offset: usize,
    #[arg(long, default_value_t = 50)]
    limit: usize,
    /// Print JSON instead of tab-separated lines.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long, env = "WOS_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Static UI assets served under /ui/.
    #[arg(long)]
    ui_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long, default_value = "nodelink")]
    format: String,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ImportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    snapshot: PathBuf,
}

/// Output of `fit`, accepted by `mine --params`.
#[derive(Debug, Serialize, Deserialize)]
struct FittedParams {
    weights: [f64; 4],
    bias: f64,
    samples: usize,
    skipped: usize,
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<KnowledgeGraph> {
    snapshot::load_snapshot(path).with_context(|| format!("cannot load snapshot {}", path.display()))
}

fn save(graph: &KnowledgeGraph, path: &Path) -> Result<()> {
    snapshot::save_snapshot(graph, path).with_context(|| format!("cannot write snapshot {}", path.display()))
}

fn read_corpus(path: &Path) -> Result<Vec<PublicationRecord>> {
    let file = File::open(path).with_context(|| format!("cannot open corpus {}", path.display()))?;
    let parsed = parse_corpus(BufReader::new(file)).with_context(|| format!("cannot read corpus {}", path.display()))?;
    for d in &parsed.diagnostics {
        warn!("{}: {d}", path.display());
    }
    Ok(parsed.records)
}

fn synth_cmd(args: SynthArgs) -> Result<()> {
    let config = SynthConfig {
        scholars: args.scholars,
        pubs: args.pubs,
        seed: args.seed,
        advisor_pairs: args.advisor_pairs,
        ..SynthConfig::default()
    };
    let corpus = synth::generate(&config)?;
    fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    let files = [
        ("corpus.jsonl", corpus.corpus_text()),
        ("geo.tsv", format_geo_table(&corpus.geo)),
        ("labels.tsv", wos_core::mine::advisor::format_labeled_pairs(&corpus.manifest.labeled)),
        ("manifest.json", serde_json::to_string_pretty(&corpus.manifest)? + "\n"),
    ];
    for (name, text) in files {
        let path = args.out.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    println!(
        "wrote {} publications, {} scholars, {} planted advisor pairs to {}",
        corpus.manifest.publication_count,
        corpus.manifest.scholar_count,
        corpus.manifest.planted.len(),
        args.out.display()
    );
    Ok(())
}

fn ingest_cmd(args: IngestArgs) -> Result<()> {
    let mut records = read_corpus(&args.corpus)?;
    if let Some(tag) = &args.field {
        records = filter_by_field(&records, tag);
    }
    let geo = match &args.geo {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            parse_geo_table(&text).with_context(|| format!("bad geo table {}", path.display()))?
        }
        None => GeoTable::new(),
    };
    let (_, conflicts) = build_scholars(&records);
    for c in &conflicts {
        warn!(?c, "scholar listed under differing names or institutions");
    }
    let graph = KnowledgeGraph::from_records(&records, geo);
    save(&graph, &args.snapshot)?;
    println!(
        "ingested {} publications, {} scholars, {} dangling refs into {}",
        graph.publications().len(),
        graph.scholar_count(),
        graph.dangling_refs().len(),
        args.snapshot.display()
    );
    Ok(())
}

fn mine_cmd(args: MineArgs) -> Result<()> {
    let mut advisor = AdvisorParams { threshold: args.tau, ..AdvisorParams::default() };
    if let Some(path) = &args.params {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let fitted: FittedParams = serde_json::from_str(&text).with_context(|| format!("bad params file {}", path.display()))?;
        advisor.weights = fitted.weights;
        advisor.bias = fitted.bias;
    }
    if let Some(w) = &args.weights {
        advisor.weights = w.as_slice().try_into().context("--weights takes exactly four values")?;
    }
    if let Some(b) = args.bias {
        advisor.bias = b;
    }
    let config = MineConfig { kinds: args.kinds.iter().copied().collect(), advisor, team_threshold: args.team_threshold };
    let mut graph = load(&args.snapshot)?;
    let report = mine_graph(&mut graph, &config)?;
    for cycle in &report.advisor_cycles {
        let ids: Vec<&str> = cycle.iter().map(|s| s.as_str()).collect();
        warn!("advisor cycle: {}", ids.join(" -> "));
    }
    let out = args.out.as_deref().unwrap_or(&args.snapshot);
    save(&graph, out)?;
    let counts: Vec<String> = report.edges_per_kind.iter().map(|(k, n)| format!("{k}={n}")).collect();
    println!("mined {} into {}", counts.join(" "), out.display());
    Ok(())
}

fn read_labels(path: &Path) -> Result<Vec<LabeledPair>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let manifest: SynthManifest = serde_json::from_str(&text).with_context(|| format!("bad manifest {}", path.display()))?;
        return Ok(manifest.labeled);
    }
    parse_labeled_pairs(&text).with_context(|| format!("bad labels file {}", path.display()))
}

fn fit_cmd(args: FitArgs) -> Result<()> {
    let labels = read_labels(&args.labels)?;
    let records = match (&args.corpus, &args.snapshot) {
        (Some(corpus), _) => read_corpus(corpus)?,
        (None, Some(snap)) => load(snap)?.records(),
        (None, None) => bail!("pass --corpus or --snapshot"),
    };
    let (scholars, _) = build_scholars(&records);
    let ctx = AdvisorContext::new(&records, &scholars);
    let (samples, skipped) = labeled_features(&ctx, &labels, &AdvisorParams::default());
    if !skipped.is_empty() {
        warn!(count = skipped.len(), "labeled pairs without joint publications were skipped");
    }
    let config = FitConfig { learning_rate: args.rate, iterations: args.iterations, seed: args.seed, batch_size: args.batch_size };
    let (weights, bias) = fit_advisor_weights(&samples, &config)?;
    let fitted = FittedParams { weights, bias, samples: samples.len(), skipped: skipped.len() };
    write_output(args.out.as_deref(), (serde_json::to_string_pretty(&fitted)? + "\n").as_bytes())
}

fn rank_cmd(args: RankArgs) -> Result<()> {
    let graph = load(&args.snapshot)?;
    let list = ranked_list(args.measure, &graph);
    let page = list.page(args.offset, args.limit);
    let mut out = String::new();
    if args.json {
        out = serde_json::to_string_pretty(&page)? + "\n";
    } else {
        for (i, e) in page.iter().enumerate() {
            let name = graph.scholar(&e.scholar_id).map_or("", |s| s.name.as_str());
            out.push_str(&format!("{}\t{}\t{}\t{}\n", args.offset + i + 1, e.scholar_id, name, e.value));
        }
    }
    write_output(None, out.as_bytes())
}

async fn shutdown_signal() {
    if let Err(e) = tokio::signal::ctrl_c().await {
        warn!(error = %e, "cannot listen for ctrl-c");
        std::future::pending::<()>().await;
    }
}

fn serve_cmd(args: ServeArgs) -> Result<()> {
    let state = AppState::load(args.snapshot.clone()).with_context(|| format!("cannot load snapshot {}", args.snapshot.display()))?;
    let state = Arc::new(state);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port))
            .await
            .with_context(|| format!("cannot bind {}:{}", args.host, args.port))?;
        println!("listening on http://{}", listener.local_addr()?);
        #[cfg(unix)]
        api::spawn_reload_on_sighup(Arc::clone(&state))?;
        api::serve(listener, state, args.ui_dir, shutdown_signal()).await?;
        info!("shut down");
        Ok(())
    })
}

fn export_cmd(args: ExportArgs) -> Result<()> {
    if args.format != "nodelink" {
        bail!("unsupported export format `{}`; expected nodelink", args.format);
    }
    let graph = load(&args.snapshot)?;
    write_output(args.out.as_deref(), &export::export_graph(&graph))
}

fn import_cmd(args: ImportArgs) -> Result<()> {
    let bytes = fs::read(&args.input).with_context(|| format!("cannot read {}", args.input.display()))?;
    let graph = export::import_graph(&bytes).with_context(|| format!("cannot import {}", args.input.display()))?;
    save(&graph, &args.snapshot)?;
    let kinds: BTreeSet<EdgeKind> = graph.edges().map(|e| e.kind).collect();
    println!("imported {} scholars, {} edges of {} kinds into {}", graph.scholar_count(), graph.edge_count(), kinds.len(), args.snapshot.display());
    Ok(())
}

/// The error chain joined by `: `, skipping causes a parent already quotes.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt().with_max_level(cli.log_level).with_writer(std::io::stderr).init();
    let result = match cli.command {
        Command::Synth(a) => synth_cmd(a),
        Command::Ingest(a) => ingest_cmd(a),
        Command::Mine(a) => mine_cmd(a),
        Command::Fit(a) => fit_cmd(a),
        Command::Rank(a) => rank_cmd(a),
        Command::Serve(a) => serve_cmd(a),
        Command::Export(a) => export_cmd(a),
        Command::Import(a) => import_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::FAILURE
        }
    }
}
