//! Library side of the `qldpc` command: argument types and subcommand drivers.

pub mod analyze;
pub mod config;
pub mod simulate;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qldpc_core::gf2::io::write_alist;
use qldpc_core::grouping::GroupingFile;
use qldpc_core::{CodeDescriptor, CssCode};

use crate::analyze::{analyze, CodeSummary};
use crate::config::{ExperimentConfig, GroupingStrategy};

#[derive(Debug, Parser)]
#[command(name = "qldpc", version, about = "Quantum LDPC codes: construction, analysis and decoding simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a code from a descriptor and write its parity-check matrices.
    Build(BuildArgs),
    /// Partition the checks of a code into generalized check nodes.
    Group(GroupArgs),
    /// Report 4-cycles, girth, 2-TNC and trellis statistics.
    Analyze(AnalyzeArgs),
    /// Run a Monte Carlo logical-error-rate sweep.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Code descriptor JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for `h0.alist`, `h1.alist` and `code.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// trivial | full | partial:A | partial:B | greedy:R[:SEED] | local:R[:SEED] | file:PATH
    #[arg(long, default_value = "full")]
    pub strategy: GroupingStrategy,
    /// Overrides the seed of greedy strategies.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "trivial")]
    pub grouping: GroupingStrategy,
    /// Report path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Experiment configuration JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV path; overrides the config's `out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_code(path: &Path) -> Result<(CssCode, Option<String>)> {
    let (desc, base) = CodeDescriptor::load(path).with_context(|| format!("loading {}", path.display()))?;
    let code = desc.build(&base).with_context(|| format!("building {}", path.display()))?;
    Ok((code, desc.name().map(str::to_owned)))
}

fn base_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn with_seed(strategy: GroupingStrategy, seed: Option<u64>) -> GroupingStrategy {
    match (strategy, seed) {
        (GroupingStrategy::Greedy { r, .. }, Some(seed)) => GroupingStrategy::Greedy { r, seed },
        (GroupingStrategy::Local { r, .. }, Some(seed)) => GroupingStrategy::Local { r, seed },
        (s, _) => s,
    }
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_build(args: &BuildArgs) -> Result<CodeSummary> {
    let (code, name) = load_code(&args.config)?;
    let summary = CodeSummary::new(&code, name);
    println!("[[{}, {}]]", code.n, code.k);
    for (side, w) in summary.row_weight.iter().enumerate() {
        println!("H{side}: {} rows, weight avg {:.2} range [{}, {}]", w.rows, w.avg, w.min, w.max);
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        write_alist(dir.join("h0.alist"), &code.h0)?;
        write_alist(dir.join("h1.alist"), &code.h1)?;
        std::fs::write(dir.join("code.json"), serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(summary)
}

pub fn cmd_group(args: &GroupArgs) -> Result<GroupingFile> {
    let (code, _) = load_code(&args.config)?;
    let strategy = with_seed(args.strategy.clone(), args.seed);
    let groups = strategy.build(&code, &base_of(&args.config))?;
    for g in &groups {
        eprintln!("side {}: {} blocks, r = {}", g.side, g.num_blocks(), g.r);
    }
    let file = GroupingFile::from_groupings(&groups, Some(strategy.to_string()));
    write_or_print(&serde_json::to_string_pretty(&file)?, args.out.as_deref())?;
    Ok(file)
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<analyze::AnalysisReport> {
    let (code, name) = load_code(&args.config)?;
    let groups = args.grouping.build(&code, &base_of(&args.config))?;
    let report = analyze(&code, name, &groups, &args.grouping.to_string())?;
    write_or_print(&serde_json::to_string_pretty(&report)?, args.out.as_deref())?;
    Ok(report)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Vec<simulate::CsvRow>> {
    let (cfg, base) = ExperimentConfig::load(&args.config)?;
    let exp = cfg.resolve(base)?;
    let seed = args.seed.unwrap_or(exp.config.seed);
    let workers = args.workers.unwrap_or(exp.config.workers);
    let out = args
        .out
        .clone()
        .or_else(|| exp.config.out.as_ref().map(|p| exp.base_dir.join(p)))
        .context("no output path: pass --out or set `out` in the config")?;
    let rows = simulate::simulate(&exp, &out, seed, workers)?;
    eprintln!("{} new rows written to {}", rows.len(), out.display());
    Ok(rows)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build(a) => cmd_build(&a).map(drop),
        Command::Group(a) => cmd_group(&a).map(drop),
        Command::Analyze(a) => cmd_analyze(&a).map(drop),
        Command::Simulate(a) => cmd_simulate(&a).map(drop),
    }
}
