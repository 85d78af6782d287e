//! Subcommands. Each writes its report to `out` and diagnostics to `err`.

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use textgraph_core::eval::{run_ablation, JudgmentSet};
use textgraph_core::lexicon::Lexicon;
use textgraph_core::pipeline::{self, BuildOptions};
use textgraph_core::{snapshot, WalkParams};

use crate::library::{format_listing, Library, QueryError, QueryRequest, DEFAULT_K};
use crate::manifest::BuildManifest;

#[derive(Debug, Parser)]
#[command(name = "textgraph", version, about = "Build and query textbook knowledge graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile annotated HTML chapters into a snapshot and content bundle.
    Build(BuildArgs),
    /// Rank nodes of one kind by similarity to a set of seed nodes.
    Query(QueryArgs),
    /// Serve the JSON API and reader assets.
    Serve(ServeArgs),
    /// Score the four graph variants against a judgment file.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// TOML build manifest; flags given here override it.
    #[arg(long, conflicts_with = "files")]
    pub manifest: Option<PathBuf>,
    /// Corpus files, in book order.
    pub files: Vec<PathBuf>,
    #[arg(long)]
    pub no_inference: bool,
    #[arg(long)]
    pub no_lexical: bool,
    /// Stopword list, one word per line.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long, required_unless_present = "manifest")]
    pub snapshot: Option<PathBuf>,
    #[arg(long, required_unless_present = "manifest")]
    pub bundle: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Artifacts {
    #[arg(long)]
    pub snapshot: PathBuf,
    #[arg(long)]
    pub bundle: PathBuf,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub artifacts: Artifacts,
    /// Seed node ids, comma separated or repeated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub seeds: Vec<String>,
    /// Target container kind, e.g. `question` or `BookContainer`.
    #[arg(long)]
    pub target: String,
    #[arg(short, long, default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub d_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub artifacts: Artifacts,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory of static reader assets served at `/`.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Tsv,
    Json,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub snapshot: PathBuf,
    #[arg(long)]
    pub judgments: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub format: ReportFormat,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub d_max: Option<usize>,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Build(args) => build(&args, out),
        Command::Query(args) => query(&args, out, err),
        Command::Serve(args) => serve(args),
        Command::Eval(args) => eval(&args, out),
    }
}

fn manifest_from(args: &BuildArgs) -> Result<BuildManifest> {
    let mut m = match &args.manifest {
        Some(path) => BuildManifest::load(path)?,
        None => {
            if args.files.is_empty() {
                bail!("no corpus files given");
            }
            BuildManifest {
                corpus: args.files.clone(),
                inference: true,
                lexical: true,
                stopwords: None,
                snapshot: PathBuf::new(),
                bundle: PathBuf::new(),
                base: PathBuf::new(),
            }
        }
    };
    m.inference &= !args.no_inference;
    m.lexical &= !args.no_lexical;
    if let Some(s) = &args.stopwords {
        m.stopwords = Some(std::env::current_dir()?.join(s));
    }
    if let Some(s) = &args.snapshot {
        m.snapshot = std::env::current_dir()?.join(s);
    }
    if let Some(b) = &args.bundle {
        m.bundle = std::env::current_dir()?.join(b);
    }
    Ok(m)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn build(args: &BuildArgs, out: &mut dyn Write) -> Result<()> {
    run_manifest(&manifest_from(args)?, out)
}

/// Runs a manifest and prints node and triple counts by provenance.
pub fn run_manifest(m: &BuildManifest, out: &mut dyn Write) -> Result<()> {
    let mut files = Vec::with_capacity(m.corpus.len());
    for entry in &m.corpus {
        let path = m.resolve(entry);
        let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
        let name = entry
            .file_name()
            .unwrap_or(entry.as_os_str())
            .to_string_lossy()
            .into_owned();
        files.push((name, bytes));
    }
    let lexicon = match &m.stopwords {
        Some(p) => {
            let path = m.resolve(p);
            Lexicon::from_stopwords(
                &std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?,
            )
        }
        None => Lexicon::default(),
    };
    let options = BuildOptions {
        inference: m.inference,
        lexical: m.lexical,
        lexicon,
    };
    let built = pipeline::build(&files, &options)?;
    write_file(&m.resolve(&m.snapshot), &snapshot::to_snapshot_string(&built.graph))?;
    write_file(&m.resolve(&m.bundle), &built.bundle.to_bundle_string())?;
    writeln!(out, "nodes\t{}", built.graph.node_count())?;
    writeln!(out, "triples\t{}", built.graph.triple_count())?;
    for (prov, n) in built.graph.count_by_provenance() {
        writeln!(out, "{prov}\t{n}")?;
    }
    Ok(())
}

pub fn query(args: &QueryArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let lib = Library::load(&args.artifacts.snapshot, &args.artifacts.bundle)?;
    let req = QueryRequest {
        seeds: args.seeds.clone(),
        target_kind: args.target.clone(),
        k: Some(args.k),
        gamma: args.gamma,
        d_max: args.d_max,
    };
    let response = match lib.query(&req) {
        Ok(r) => r,
        Err(QueryError::AllSeedsUnknown(ids)) => {
            for id in &ids {
                writeln!(err, "warning: unknown seed {id}")?;
            }
            bail!("none of the seeds is in the graph");
        }
        Err(e) => return Err(e.into()),
    };
    for id in &response.unknown_seeds {
        writeln!(err, "warning: unknown seed {id}")?;
    }
    out.write_all(format_listing(&response).as_bytes())?;
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    let lib = Library::load(&args.artifacts.snapshot, &args.artifacts.bundle)?;
    let addr = SocketAddr::new(args.host, args.port);
    tokio::runtime::Runtime::new()?.block_on(crate::server::serve(lib, addr, args.ui_dir))
}

pub fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&args.snapshot)
        .with_context(|| format!("reading snapshot {}", args.snapshot.display()))?;
    let graph = snapshot::parse_snapshot(&text)?;
    let text = std::fs::read_to_string(&args.judgments)
        .with_context(|| format!("reading judgments {}", args.judgments.display()))?;
    let judgments = JudgmentSet::parse(&text).with_context(|| format!("in {}", args.judgments.display()))?;
    let defaults = WalkParams::default();
    let params = WalkParams::new(
        args.gamma.unwrap_or(defaults.gamma),
        args.d_max.unwrap_or(defaults.d_max),
    )?;
    let report = run_ablation(&graph, &judgments, &params)?;
    match args.format {
        ReportFormat::Table => out.write_all(report.to_table().as_bytes())?,
        ReportFormat::Tsv => out.write_all(report.to_tsv().as_bytes())?,
        ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
    }
    Ok(())
}
