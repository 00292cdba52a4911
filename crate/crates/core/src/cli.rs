//! Command-line front end.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::DatasetConfig;
use crate::eval::{self, Prediction, ScoringOptions};
use crate::forge::{self, assign_splits, DatasetRecord, GraphRecord};
use crate::io::{self, FileEntry, Manifest, DATASET_FILE, GRAPHS_FILE, MANIFEST_FILE};
use crate::model::{Domain, GraphSpec, SizeClass};
use crate::templates::Subset;
use crate::textualize::{build_prompt, graph_sentences, PromptQuestion, PromptRecord};

#[derive(Debug, Parser)]
#[command(name = "clegr-forge", version, about = "Generate, textualize and score graph question-answering datasets")]
pub struct Cli {
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, env = "CLEGR_FORGE_JOBS", default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate graphs and questions into an output directory
    Generate(GenerateArgs),
    /// Summarise node, edge and line counts of a graphs file
    Stats(StatsArgs),
    /// Render one prompt per dataset record
    ExportPrompts(ExportArgs),
    /// Score predictions against a dataset
    Evaluate(EvaluateArgs),
    /// Reassign train/validation/test splits of a dataset
    Split(SplitArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Dataset config file (TOML key = value pairs)
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub size_class: Option<SizeClass>,
    #[arg(long)]
    pub domain: Option<Domain>,
    #[arg(long)]
    pub subset: Option<Subset>,
    #[arg(long)]
    pub n_graphs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub graphs: PathBuf,
    /// Also write the statistics as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub graphs: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write node and edge sentences to this file
    #[arg(long)]
    pub sentences: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Score questions without a prediction as incorrect instead of failing
    #[arg(long)]
    pub allow_missing: bool,
    /// Accept categorical predictions that start with the gold answer
    #[arg(long)]
    pub categorical_prefix: bool,
    /// Per-record scores as CSV
    #[arg(long)]
    pub scores_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: u64,
}

/// Parses the process arguments; `--help` lists the config defaults.
pub fn parse_args() -> Cli {
    let cmd = Cli::command().after_long_help(format!("Config keys and defaults:\n{}", DatasetConfig::describe_defaults()));
    let matches = cmd.get_matches();
    Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit())
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let cfg = load_config(&a)?;
            let manifest = cmd_generate(&cfg, &a.out, cli.jobs)?;
            println!("wrote {} graphs and {} questions to {}", manifest.n_graphs, manifest.n_questions, a.out.display());
        }
        Command::Stats(a) => {
            let graphs: Vec<GraphRecord> = io::read_jsonl(&a.graphs)?;
            let stats = graph_stats(graphs.iter().map(|g| &g.graph));
            if let Some(p) = a.json {
                io::write_json(&p, &stats)?;
            }
            emit(&stats.table())?;
        }
        Command::ExportPrompts(a) => {
            let n = cmd_export_prompts(&a.dataset, &a.graphs, &a.out, a.sentences.as_deref())?;
            println!("wrote {n} prompts to {}", a.out.display());
        }
        Command::Evaluate(a) => {
            let report = cmd_evaluate(&a)?;
            println!("overall accuracy {:.4} over {} questions", report.overall_accuracy, report.n_records);
        }
        Command::Split(a) => {
            let mut records: Vec<DatasetRecord> = io::read_jsonl(&a.dataset)?;
            resplit(&mut records, a.seed)?;
            io::write_jsonl(&a.out, &records)?;
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for r in &records {
                *counts.entry(format!("{:?}", r.split).to_lowercase()).or_default() += 1;
            }
            println!("{}", serde_json::to_string(&counts)?);
        }
    }
    Ok(())
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn load_config(a: &GenerateArgs) -> anyhow::Result<DatasetConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            DatasetConfig::parse(&text).with_context(|| format!("in {}", p.display()))?
        }
        None => DatasetConfig::default(),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(s) = a.size_class {
        cfg.size_class = s;
    }
    if let Some(d) = a.domain {
        cfg.domain = d;
    }
    if let Some(s) = a.subset {
        cfg.subset = s;
    }
    if let Some(n) = a.n_graphs {
        cfg.n_graphs = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Generates a dataset into `out`. On failure every output file of this
/// run is removed.
pub fn cmd_generate(cfg: &DatasetConfig, out: &Path, jobs: usize) -> anyhow::Result<Manifest> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let paths = [GRAPHS_FILE, DATASET_FILE, MANIFEST_FILE].map(|f| out.join(f));
    let result = (|| {
        let ds = forge::build_dataset(cfg, jobs)?;
        io::write_jsonl(&paths[0], &ds.graphs)?;
        io::write_jsonl(&paths[1], &ds.records)?;
        let mut per_split = BTreeMap::new();
        for r in &ds.records {
            *per_split.entry(serde_json::to_value(r.split)?.as_str().unwrap_or_default().to_string()).or_default() += 1;
        }
        let manifest = Manifest {
            generator: format!("clegr-forge {}", env!("CARGO_PKG_VERSION")),
            config: cfg.clone(),
            seed: cfg.seed,
            n_graphs: ds.graphs.len(),
            n_questions: ds.records.len(),
            questions_per_split: per_split,
            files: [GRAPHS_FILE, DATASET_FILE]
                .iter()
                .map(|f| Ok((f.to_string(), FileEntry::of(&out.join(f))?)))
                .collect::<crate::error::Result<_>>()?,
        };
        io::write_json(&paths[2], &manifest)?;
        Ok::<_, anyhow::Error>(manifest)
    })();
    if result.is_err() {
        for p in &paths {
            let _ = fs::remove_file(p);
        }
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return MeanStd { mean: 0.0, std: 0.0 };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        MeanStd { mean, std: var.sqrt() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n_graphs: usize,
    pub nodes: MeanStd,
    pub edges: MeanStd,
    pub lines: MeanStd,
}

impl GraphStats {
    pub fn table(&self) -> String {
        let row = |name: &str, m: MeanStd| format!("{name:<8}{:>10.2} ± {:.2}\n", m.mean, m.std);
        format!(
            "graphs  {:>10}\n{}{}{}",
            self.n_graphs,
            row("nodes", self.nodes),
            row("edges", self.edges),
            row("lines", self.lines)
        )
    }
}

pub fn graph_stats<'a>(graphs: impl IntoIterator<Item = &'a GraphSpec>) -> GraphStats {
    let (mut n, mut e, mut l) = (Vec::new(), Vec::new(), Vec::new());
    for g in graphs {
        n.push(g.nodes.len() as f64);
        e.push(g.edges.len() as f64);
        l.push(g.lines.len() as f64);
    }
    GraphStats { n_graphs: n.len(), nodes: MeanStd::of(&n), edges: MeanStd::of(&e), lines: MeanStd::of(&l) }
}

pub fn cmd_export_prompts(dataset: &Path, graphs: &Path, out: &Path, sentences: Option<&Path>) -> anyhow::Result<usize> {
    let records: Vec<DatasetRecord> = io::read_jsonl(dataset)?;
    let graphs: Vec<GraphRecord> = io::read_jsonl(graphs)?;
    let by_id: BTreeMap<&str, &GraphSpec> = graphs.iter().map(|g| (g.graph_id.as_str(), &g.graph)).collect();
    let mut prompts = Vec::with_capacity(records.len());
    for r in &records {
        let Some(g) = by_id.get(r.graph_id.as_str()) else {
            bail!("question {} refers to unknown graph {}", r.question_id, r.graph_id);
        };
        let q = PromptQuestion {
            template_id: &r.template_id,
            question: &r.question,
            output_type: r.output_type,
            slot_bindings: &r.slot_bindings,
        };
        prompts.push(PromptRecord {
            graph_id: r.graph_id.clone(),
            question_id: r.question_id.clone(),
            prompt: build_prompt(g, q)?,
            answer: r.answer.clone(),
        });
    }
    io::write_jsonl(out, &prompts)?;
    if let Some(path) = sentences {
        let mut all = Vec::new();
        for g in &graphs {
            all.extend(graph_sentences(&g.graph_id, &g.graph)?);
        }
        io::write_jsonl(path, &all)?;
    }
    Ok(prompts.len())
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> anyhow::Result<eval::EvalReport> {
    let dataset: Vec<DatasetRecord> = io::read_jsonl(&a.dataset)?;
    let predictions: Vec<Prediction> = io::read_jsonl(&a.predictions)?;
    let opts = ScoringOptions { categorical_prefix: a.categorical_prefix };
    let (report, scored) = eval::evaluate(&dataset, &predictions, a.allow_missing, opts)?;
    io::write_json(&a.out, &report)?;
    if let Some(path) = &a.scores_csv {
        io::write_atomic(path, |w| {
            writeln!(w, "question_id,template_id,group,answer_type,correct,abs_error,set_f1")?;
            for s in &scored {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    s.question_id,
                    s.template_id,
                    s.group,
                    s.answer_type,
                    s.correct,
                    s.abs_error.map(|e| e.to_string()).unwrap_or_default(),
                    s.set_score.map(|x| x.f1.to_string()).unwrap_or_default()
                )?;
            }
            Ok(())
        })?;
    }
    Ok(report)
}

/// Reassigns splits by graph id, keeping all questions of a graph together.
pub fn resplit(records: &mut [DatasetRecord], seed: u64) -> anyhow::Result<()> {
    let mut ids: Vec<String> = Vec::new();
    for r in records.iter() {
        if ids.last() != Some(&r.graph_id) && !ids.contains(&r.graph_id) {
            ids.push(r.graph_id.clone());
        }
    }
    let splits = assign_splits(&ids, (3, 1, 1), seed)?;
    for r in records.iter_mut() {
        r.split = splits[&r.graph_id];
    }
    Ok(())
}
