//! Command-line front end. [`run`] is the whole program minus process
//! setup, so it can be driven from tests.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 external-service error.

mod config;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::backends::{BackendKind, ExtractError, Extractor};
use crate::corpus::{self, load_corpus, load_index, save_index, search, CorpusError, SearchMode};
use crate::embedding::{Embedder, EmbeddingError, ProviderKind};
use crate::evalkit::{
    self, bundled_fixtures, char_reduction_csv, load_queries, render_summary, run_comparison, summarize, verdicts_csv,
    QueryPairRecord, ReportFormat,
};
use crate::speechact::{classify, Utterance};

pub use config::{AppConfig, Paths, KEYS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXTERNAL: i32 = 3;

#[derive(Debug)]
enum Failure {
    Input(String),
    External(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::External(_) => EXIT_EXTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::External(m) => m,
        }
    }
}

impl From<ExtractError> for Failure {
    fn from(e: ExtractError) -> Self {
        if e.is_external() {
            Failure::External(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<EmbeddingError> for Failure {
    fn from(e: EmbeddingError) -> Self {
        if e.is_external() {
            Failure::External(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Embedding { ref source, .. } if source.is_external() => Failure::External(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

type CmdResult = Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(name = "propshift", version, about = "Speech-act query preprocessing and retrieval comparison")]
struct Cli {
    /// Configuration file (`key = value` lines); flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print `<category>\t<utterance>` for each input line.
    Classify {
        /// Input file; stdin when absent or `-`.
        input: Option<PathBuf>,
    },
    /// Print the propositional content of each input line.
    Extract {
        input: Option<PathBuf>,
        /// Emit JSON Lines with the matched frames and applied transforms.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        llm: LlmArgs,
    },
    /// Embed a JSON Lines corpus into an index file.
    Ingest {
        #[arg(long, value_name = "FILE")]
        corpus: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        index: Option<PathBuf>,
        #[command(flatten)]
        embed: EmbedArgs,
    },
    /// Search an index with each query line (or `--query`).
    Search {
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        index: Option<PathBuf>,
        #[arg(long, short)]
        query: Option<String>,
        /// Search with the extracted proposition instead of the raw text.
        #[arg(long)]
        propositional: bool,
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        embed: EmbedArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        llm: LlmArgs,
    },
    /// Compare original and propositional queries against an index.
    Compare {
        #[arg(long, value_name = "FILE")]
        queries: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        index: Option<PathBuf>,
        /// Skip retrieval and use the bundled reference measurements.
        #[arg(long)]
        fixtures: bool,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        embed: EmbedArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        llm: LlmArgs,
    },
    /// Summarize a record file (default: the bundled reference measurements).
    Report {
        /// Records in fixture CSV layout, as written by `compare --format csv`.
        #[arg(long, value_name = "FILE")]
        records: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, default_value = "md")]
    format: String,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Directory for plot-ready CSVs (char_reduction.csv, verdicts.csv).
    #[arg(long, value_name = "DIR")]
    plots: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Args)]
struct LlmArgs {
    /// Extraction backend: rule or llm.
    #[arg(long)]
    backend: Option<String>,
    #[arg(long, value_name = "URL")]
    llm_endpoint: Option<String>,
    #[arg(long)]
    llm_model: Option<String>,
    #[arg(long, value_name = "SECS")]
    llm_timeout: Option<f64>,
    #[arg(long)]
    llm_retries: Option<u32>,
    #[arg(long, value_name = "FILE")]
    cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    /// Embedding provider: local or remote.
    #[arg(long)]
    provider: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    native_dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "URL")]
    embedding_endpoint: Option<String>,
    #[arg(long)]
    embedding_model: Option<String>,
}

#[derive(Debug, Args)]
struct PolicyArgs {
    /// topk, threshold or both.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, short)]
    k: Option<usize>,
    #[arg(long)]
    min_similarity: Option<f64>,
}

impl LlmArgs {
    fn apply(&self, cfg: &mut AppConfig) -> CmdResult {
        if let Some(b) = &self.backend {
            cfg.extractor.backend = b.parse::<BackendKind>().map_err(input)?;
        }
        if let Some(v) = &self.llm_endpoint {
            cfg.extractor.endpoint_url = v.clone();
        }
        if let Some(v) = &self.llm_model {
            cfg.extractor.model_name = v.clone();
        }
        if let Some(v) = self.llm_timeout {
            if !(v > 0.0 && v.is_finite()) {
                return Err(input("--llm-timeout must be positive"));
            }
            cfg.extractor.timeout = Duration::from_secs_f64(v);
        }
        if let Some(v) = self.llm_retries {
            cfg.extractor.max_retries = v;
        }
        if let Some(v) = &self.cache {
            cfg.paths.cache = Some(v.clone());
        }
        cfg.extractor.cache_path = cfg.paths.cache.clone();
        Ok(())
    }
}

impl EmbedArgs {
    fn apply(&self, cfg: &mut AppConfig) -> CmdResult {
        if let Some(p) = &self.provider {
            cfg.embedding.provider = p.parse::<ProviderKind>().map_err(input)?;
        }
        if let Some(v) = self.dim {
            cfg.embedding.target_dim = v;
        }
        if let Some(v) = self.native_dim {
            cfg.embedding.native_dim = v;
        }
        if let Some(v) = self.seed {
            cfg.embedding.seed = v;
        }
        if let Some(v) = &self.embedding_endpoint {
            cfg.embedding.endpoint_url = v.clone();
        }
        if let Some(v) = &self.embedding_model {
            cfg.embedding.model_name = v.clone();
        }
        cfg.embedding.validate().map_err(input)
    }
}

impl PolicyArgs {
    fn apply(&self, cfg: &mut AppConfig) -> CmdResult {
        if let Some(m) = &self.mode {
            cfg.search.mode = m.parse::<SearchMode>().map_err(input)?;
        }
        if let Some(k) = self.k {
            cfg.search.k = k;
        }
        if let Some(t) = self.min_similarity {
            cfg.search.min_similarity = t;
        }
        cfg.search.validate().map_err(input)
    }
}

impl OutputArgs {
    fn apply(&self, cfg: &mut AppConfig) -> Result<ReportFormat, Failure> {
        if let Some(e) = self.epsilon {
            if e.is_nan() || e < 0.0 {
                return Err(input("--epsilon must be non-negative"));
            }
            cfg.epsilon = e;
        }
        if let Some(o) = &self.output {
            cfg.paths.output = Some(o.clone());
        }
        if let Some(dir) = &self.plots {
            if !dir.is_dir() {
                return Err(input(format!("{}: plot directory does not exist", dir.display())));
            }
        }
        if let Some(parent) = cfg.paths.output.as_deref().and_then(Path::parent) {
            if !parent.as_os_str().is_empty() && !parent.is_dir() {
                return Err(input(format!("{}: output directory does not exist", parent.display())));
            }
        }
        self.format.parse::<ReportFormat>().map_err(input)
    }
}

/// Runs the program with explicit arguments and streams; returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli, stdin, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "propshift: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> CmdResult {
    let mut cfg = match &cli.config {
        Some(p) => AppConfig::load(p).map_err(Failure::Input)?,
        None => AppConfig::default(),
    };
    match cli.command {
        Command::Classify { input: path } => cmd_classify(path.as_deref(), stdin, stdout),
        Command::Extract { input: path, trace, llm } => {
            llm.apply(&mut cfg)?;
            cmd_extract(&cfg, path.as_deref(), trace, stdin, stdout)
        }
        Command::Ingest { corpus, index, embed } => {
            embed.apply(&mut cfg)?;
            let corpus = required(corpus.or(cfg.paths.corpus.clone()), "--corpus")?;
            let index = required(index.or(cfg.paths.index.clone()), "--index")?;
            cmd_ingest(&cfg, &corpus, &index, stdout)
        }
        Command::Search { input: path, index, query, propositional, format, embed, policy, llm } => {
            embed.apply(&mut cfg)?;
            policy.apply(&mut cfg)?;
            llm.apply(&mut cfg)?;
            let index = required(index.or(cfg.paths.index.clone()), "--index")?;
            let format = format.parse::<ReportFormat>().map_err(input)?;
            let queries = match query {
                Some(q) => vec![q],
                None => read_lines(path.as_deref(), stdin)?,
            };
            cmd_search(&cfg, &index, &queries, propositional, format, stdout)
        }
        Command::Compare { queries, index, fixtures, out, jobs, embed, policy, llm } => {
            let format = out.apply(&mut cfg)?;
            if fixtures {
                let records = fixture_records(&cfg)?;
                // CSV stays loadable by `report --records`, so no summary.
                let mut text = evalkit::emit_report(&records, format);
                if format != ReportFormat::Csv {
                    text += &separator(format);
                    text += &render_summary(&summarize(&records, cfg.epsilon), format);
                }
                return finish(&cfg, &out, &records, &text, stdout);
            }
            embed.apply(&mut cfg)?;
            policy.apply(&mut cfg)?;
            llm.apply(&mut cfg)?;
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            let queries = required(queries, "--queries")?;
            let index = required(index.or(cfg.paths.index.clone()), "--index")?;
            cmd_compare(&cfg, &out, &queries, &index, format, stdout)
        }
        Command::Report { records, out } => {
            let format = out.apply(&mut cfg)?;
            let records = match records {
                Some(p) => evalkit::load_fixtures(&p).map_err(input)?,
                None => fixture_records(&cfg)?,
            };
            let text = render_summary(&summarize(&records, cfg.epsilon), format);
            finish(&cfg, &out, &records, &text, stdout)
        }
    }
}

fn separator(format: ReportFormat) -> String {
    match format {
        ReportFormat::MarkdownTables => "\n".into(),
        _ => String::new(),
    }
}

fn required(p: Option<PathBuf>, flag: &str) -> Result<PathBuf, Failure> {
    p.ok_or_else(|| input(format!("missing {flag}")))
}

fn fixture_records(cfg: &AppConfig) -> Result<Vec<QueryPairRecord>, Failure> {
    match &cfg.paths.fixtures {
        Some(p) => evalkit::load_fixtures(p).map_err(input),
        None => Ok(bundled_fixtures().to_vec()),
    }
}

fn read_lines(path: Option<&Path>, stdin: &mut dyn BufRead) -> Result<Vec<String>, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display())))?;
        }
        _ => {
            stdin.read_to_string(&mut text).map_err(|e| input(format!("stdin: {e}")))?;
        }
    }
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
}

fn out_err(e: std::io::Error) -> Failure {
    Failure::Input(format!("writing output: {e}"))
}

fn cmd_classify(path: Option<&Path>, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> CmdResult {
    for line in read_lines(path, stdin)? {
        let u = Utterance::new(line.as_str()).map_err(input)?;
        writeln!(stdout, "{}\t{}", classify(&u), line).map_err(out_err)?;
    }
    Ok(())
}

fn cmd_extract(
    cfg: &AppConfig,
    path: Option<&Path>,
    trace: bool,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
) -> CmdResult {
    let lines = read_lines(path, stdin)?;
    let extractor = Extractor::new(&cfg.extractor)?;
    let utterances: Vec<Utterance> =
        lines.iter().map(|l| Utterance::new(l.as_str()).map_err(input)).collect::<Result<_, _>>()?;
    for (u, result) in utterances.iter().zip(extractor.extract_many(&utterances)) {
        let p = result?;
        if trace {
            let obj = serde_json::json!({
                "utterance": u.text(),
                "category": p.source_category,
                "proposition": p.text,
                "matched_frames": p.trace.matched_frames,
                "transforms": p.trace.transforms_applied,
            });
            writeln!(stdout, "{obj}").map_err(out_err)?;
        } else {
            writeln!(stdout, "{}", p.text).map_err(out_err)?;
        }
    }
    Ok(())
}

fn cmd_ingest(cfg: &AppConfig, corpus_path: &Path, index_path: &Path, stdout: &mut dyn Write) -> CmdResult {
    check_parent(index_path)?;
    let docs = load_corpus(corpus_path)?;
    let index = corpus::ingest(&docs, &cfg.embedding)?;
    save_index(&index, index_path)?;
    writeln!(stdout, "{}", index.summary()).map_err(out_err)
}

fn check_parent(path: &Path) -> CmdResult {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => {
            Err(input(format!("{}: directory does not exist", p.display())))
        }
        _ => Ok(()),
    }
}

fn cmd_search(
    cfg: &AppConfig,
    index_path: &Path,
    queries: &[String],
    propositional: bool,
    format: ReportFormat,
    stdout: &mut dyn Write,
) -> CmdResult {
    let index = load_index(index_path)?;
    let embedder = Embedder::new(&cfg.embedding)?;
    let extractor = if propositional { Some(Extractor::new(&cfg.extractor)?) } else { None };
    if format == ReportFormat::Csv {
        writeln!(stdout, "query,rank,chunk_id,layer,score").map_err(out_err)?;
    }
    for q in queries {
        let text = match &extractor {
            Some(ex) => ex.extract(&Utterance::new(q.as_str()).map_err(input)?)?.text,
            None => q.clone(),
        };
        let v = embedder.embed(&text)?;
        let hits = search(&index, &v, &cfg.search)?;
        match format {
            ReportFormat::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                for (i, h) in hits.iter().enumerate() {
                    w.write_record([
                        text.as_str(),
                        &(i + 1).to_string(),
                        &h.chunk_id,
                        h.layer.as_str(),
                        &h.score.to_string(),
                    ])
                    .map_err(input)?;
                }
                stdout.write_all(&w.into_inner().map_err(input)?).map_err(out_err)?;
            }
            ReportFormat::JsonLines => {
                let obj = serde_json::json!({ "query": text, "hits": hits });
                writeln!(stdout, "{obj}").map_err(out_err)?;
            }
            ReportFormat::MarkdownTables => {
                writeln!(stdout, "### {text}\n\n| Rank | Chunk | Layer | Score |\n|---:|---|---|---:|")
                    .map_err(out_err)?;
                for (i, h) in hits.iter().enumerate() {
                    writeln!(stdout, "| {} | {} | {} | {:.4} |", i + 1, h.chunk_id, h.layer, h.score)
                        .map_err(out_err)?;
                }
                writeln!(stdout).map_err(out_err)?;
            }
        }
    }
    Ok(())
}

fn cmd_compare(
    cfg: &AppConfig,
    out: &OutputArgs,
    queries_path: &Path,
    index_path: &Path,
    format: ReportFormat,
    stdout: &mut dyn Write,
) -> CmdResult {
    let queries = load_queries(queries_path).map_err(input)?;
    if queries.is_empty() {
        return Err(input(format!("{}: no queries", queries_path.display())));
    }
    let index = load_index(index_path)?;
    let embedder = Embedder::new(&cfg.embedding)?;
    let extractor = Extractor::new(&cfg.extractor)?;
    let run = run_comparison(&queries, &index, &embedder, &extractor, &cfg.search, cfg.jobs.max(1));
    let text = run.render(format, cfg.epsilon);
    finish(cfg, out, &run.records, &text, stdout)?;
    if run.records.is_empty() {
        let msg = format!("all {} queries failed; first: {}", run.failures.len(), run.failures[0].message);
        return Err(if run.failures.iter().any(|f| f.external) { Failure::External(msg) } else { Failure::Input(msg) });
    }
    Ok(())
}

fn finish(
    cfg: &AppConfig,
    out: &OutputArgs,
    records: &[QueryPairRecord],
    text: &str,
    stdout: &mut dyn Write,
) -> CmdResult {
    if let Some(dir) = &out.plots {
        write_file(&dir.join("char_reduction.csv"), &char_reduction_csv(records))?;
        write_file(&dir.join("verdicts.csv"), &verdicts_csv(records, cfg.epsilon))?;
    }
    match &cfg.paths.output {
        Some(p) => write_file(p, text),
        None => stdout.write_all(text.as_bytes()).map_err(out_err),
    }
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}
