//! Sweep runner writing one CSV row per (configuration, ε); rows already present in
//! the output file are skipped, so an interrupted sweep resumes where it stopped.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::path::Path;

use anyhow::{Context, Result};
use qldpc_core::channel::run_point;
use qldpc_core::{Decoder, DecoderConfig, DecoderKind, LerRow};
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, GroupingStrategy};

pub const CSV_HEADER: [&str; 15] = [
    "code_id",
    "decoder",
    "grouping",
    "alpha",
    "t_max",
    "osd",
    "epsilon",
    "trials",
    "failures",
    "ler",
    "ler_ci_low",
    "ler_ci_high",
    "mean_iters",
    "stage1_frac",
    "seed",
];

/// One CSV line; `failures` counts logical and convergence failures alike.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub code_id: String,
    pub decoder: String,
    pub grouping: String,
    pub alpha: f64,
    pub t_max: usize,
    pub osd: String,
    pub epsilon: f64,
    pub trials: u64,
    pub failures: u64,
    pub ler: Option<f64>,
    pub ler_ci_low: Option<f64>,
    pub ler_ci_high: Option<f64>,
    pub mean_iters: Option<f64>,
    pub stage1_frac: Option<f64>,
    pub seed: u64,
}

impl CsvRow {
    fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}|{}|{}|{}",
            self.code_id, self.decoder, self.grouping, self.alpha, self.t_max, self.osd, self.epsilon, self.seed
        )
    }
}

fn decoder_label(d: &DecoderConfig) -> String {
    match (d.decoder, d.warm_start) {
        (DecoderKind::Hybrid, true) => "hybrid-warm".into(),
        (k, _) => k.name().into(),
    }
}

/// A (decoder, grouping) pair to sweep. Decoders that ignore groupings run once.
struct Job {
    decoder: DecoderConfig,
    grouping: Option<GroupingStrategy>,
}

fn jobs(exp: &Experiment) -> Vec<Job> {
    let mut out = Vec::new();
    for d in exp.config.decoder.to_vec() {
        if d.decoder.needs_grouping() {
            for g in exp.config.grouping.to_vec() {
                out.push(Job {
                    decoder: d.clone(),
                    grouping: Some(g),
                });
            }
        } else {
            out.push(Job {
                decoder: d,
                grouping: None,
            });
        }
    }
    out
}

fn existing_keys(path: &Path) -> Result<HashSet<String>> {
    if !path.exists() || std::fs::metadata(path)?.len() == 0 {
        return Ok(HashSet::new());
    }
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut keys = HashSet::new();
    for row in reader.deserialize::<CsvRow>() {
        keys.insert(row.with_context(|| format!("malformed row in {}", path.display()))?.key());
    }
    Ok(keys)
}

/// Runs the sweep, appending rows to `out`. Returns the rows computed in this call.
pub fn simulate(exp: &Experiment, out: &Path, seed: u64, workers: usize) -> Result<Vec<CsvRow>> {
    let done = existing_keys(out)?;
    let fresh = done.is_empty() && (!out.exists() || std::fs::metadata(out)?.len() == 0);
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(out)
        .with_context(|| format!("opening {}", out.display()))?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        writer.write_record(CSV_HEADER)?;
        writer.flush()?;
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let mut written = Vec::new();
    for job in jobs(exp) {
        let grouping_label = job.grouping.as_ref().map_or("trivial".to_owned(), ToString::to_string);
        let groups = job
            .grouping
            .as_ref()
            .map(|g| g.build(&exp.code, &exp.base_dir))
            .transpose()
            .with_context(|| format!("building grouping {grouping_label}"))?;
        let decoder = Decoder::new(&exp.code, groups.as_ref(), job.decoder.clone())?;
        for (point, &eps) in exp.epsilons.iter().enumerate() {
            let mut row = CsvRow {
                code_id: exp.code_id.clone(),
                decoder: decoder_label(&job.decoder),
                grouping: grouping_label.clone(),
                alpha: job.decoder.alpha,
                t_max: job.decoder.t_max,
                osd: job.decoder.osd.name().into(),
                epsilon: eps,
                trials: 0,
                failures: 0,
                ler: None,
                ler_ci_low: None,
                ler_ci_high: None,
                mean_iters: None,
                stage1_frac: None,
                seed,
            };
            if done.contains(&row.key()) {
                continue;
            }
            let stats: LerRow = pool.install(|| run_point(&exp.code, &decoder, eps, point as u64, exp.budget, seed))?;
            row.trials = stats.trials;
            row.failures = stats.failures;
            row.ler = stats.ler;
            row.ler_ci_low = stats.ler_ci_low;
            row.ler_ci_high = stats.ler_ci_high;
            row.mean_iters = stats.mean_iters;
            row.stage1_frac = stats.stage1_frac;
            writer.serialize(&row)?;
            writer.flush()?;
            written.push(row);
        }
    }
    Ok(written)
}
