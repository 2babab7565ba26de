//! Experiment configuration and grouping strategies.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use qldpc_core::grouping::{
    full_grouping, greedy_grouping, partial_grouping, unstructured_local_grouping, Axis, Grouping, GroupingFile,
};
use qldpc_core::{CodeDescriptor, CssCode, DecoderConfig, TrialBudget};
use serde::{Deserialize, Serialize};

/// How checks are grouped into generalized check nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupingStrategy {
    Trivial,
    Full,
    Partial(Axis),
    /// Greedy overlap grouping of each full parity-check matrix.
    Greedy { r: usize, seed: u64 },
    /// Greedy grouping of the local code, replicated over every vertex (QT codes only).
    Local { r: usize, seed: u64 },
    File(PathBuf),
}

impl FromStr for GroupingStrategy {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize, what: &str| -> Result<u64> {
            parts
                .get(i)
                .with_context(|| format!("grouping `{s}` is missing {what}"))?
                .parse()
                .with_context(|| format!("grouping `{s}`: bad {what}"))
        };
        Ok(match parts[0] {
            "trivial" => GroupingStrategy::Trivial,
            "full" => GroupingStrategy::Full,
            "partial" => match parts.get(1).copied() {
                Some("A") | Some("a") => GroupingStrategy::Partial(Axis::A),
                Some("B") | Some("b") => GroupingStrategy::Partial(Axis::B),
                _ => bail!("grouping `{s}`: expected partial:A or partial:B"),
            },
            "greedy" | "local" => {
                let r = num(1, "block size r")? as usize;
                let seed = if parts.len() > 2 { num(2, "seed")? } else { 0 };
                if parts[0] == "greedy" {
                    GroupingStrategy::Greedy { r, seed }
                } else {
                    GroupingStrategy::Local { r, seed }
                }
            }
            "file" => GroupingStrategy::File(PathBuf::from(&s[5..])),
            other => bail!("unknown grouping strategy `{other}`"),
        })
    }
}

impl fmt::Display for GroupingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupingStrategy::Trivial => write!(f, "trivial"),
            GroupingStrategy::Full => write!(f, "full"),
            GroupingStrategy::Partial(Axis::A) => write!(f, "partial:A"),
            GroupingStrategy::Partial(Axis::B) => write!(f, "partial:B"),
            GroupingStrategy::Greedy { r, seed } => write!(f, "greedy:{r}:{seed}"),
            GroupingStrategy::Local { r, seed } => write!(f, "local:{r}:{seed}"),
            GroupingStrategy::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for GroupingStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupingStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl GroupingStrategy {
    /// Builds both sides' groupings; relative file paths resolve against `base`.
    pub fn build(&self, code: &CssCode, base: &Path) -> Result<[Grouping; 2]> {
        Ok(match self {
            GroupingStrategy::Trivial => [Grouping::trivial(&code.h0, 0), Grouping::trivial(&code.h1, 1)],
            GroupingStrategy::Full => full_grouping(code).context("full grouping needs a quadripartite QT code")?,
            GroupingStrategy::Partial(axis) => {
                partial_grouping(code, *axis).context("partial grouping needs a quadripartite QT code")?
            }
            GroupingStrategy::Greedy { r, seed } => {
                [greedy_grouping(&code.h0, 0, *r, *seed)?, greedy_grouping(&code.h1, 1, *r, *seed)?]
            }
            GroupingStrategy::Local { r, seed } => unstructured_local_grouping(code, *r, *seed)?,
            GroupingStrategy::File(p) => {
                let path = base.join(p);
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let file: GroupingFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                file.into_groupings(code)?
            }
        })
    }
}

/// One value or a list of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSweep {
    List(Vec<f64>),
    /// `points` values spaced evenly in log scale from `start` to `stop`, both included.
    LogRange { start: f64, stop: f64, points: usize },
}

impl EpsilonSweep {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            EpsilonSweep::List(v) => v.clone(),
            EpsilonSweep::LogRange { start, stop, points } => {
                ensure!(*start > 0.0 && *stop > 0.0, "log-spaced sweep needs positive endpoints");
                ensure!(*points >= 1, "log-spaced sweep needs at least one point");
                if *points == 1 {
                    vec![*start]
                } else {
                    let (a, b) = (start.ln(), stop.ln());
                    (0..*points)
                        .map(|i| (a + (b - a) * i as f64 / (*points - 1) as f64).exp())
                        .collect()
                }
            }
        };
        ensure!(!v.is_empty(), "empty epsilon sweep");
        for &e in &v {
            ensure!((0.0..=1.0).contains(&e), "epsilon {e} outside [0, 1]");
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureTarget {
    pub failures: u64,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
}

fn default_max_trials() -> u64 {
    1_000_000
}

fn default_grouping() -> OneOrMany<GroupingStrategy> {
    OneOrMany::One(GroupingStrategy::Trivial)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Path to a code descriptor JSON, relative to the config file.
    pub code: PathBuf,
    /// Label for the CSV; defaults to the descriptor name or file stem.
    #[serde(default)]
    pub code_id: Option<String>,
    #[serde(default = "default_grouping")]
    pub grouping: OneOrMany<GroupingStrategy>,
    pub decoder: OneOrMany<DecoderConfig>,
    pub epsilon: EpsilonSweep,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub failure_target: Option<FailureTarget>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// A loaded configuration with everything resolved.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub base_dir: PathBuf,
    pub code: CssCode,
    pub code_id: String,
    pub epsilons: Vec<f64>,
    pub budget: TrialBudget,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok((cfg, path.parent().map(Path::to_path_buf).unwrap_or_default()))
    }

    pub fn budget(&self) -> Result<TrialBudget> {
        match (self.trials, self.failure_target) {
            (Some(t), None) => Ok(TrialBudget::Fixed(t)),
            (None, Some(f)) => {
                ensure!(f.failures > 0, "failure target must be positive");
                Ok(TrialBudget::FailureTarget {
                    failures: f.failures,
                    max_trials: f.max_trials,
                })
            }
            (Some(_), Some(_)) => bail!("give either `trials` or `failure_target`, not both"),
            (None, None) => bail!("one of `trials` or `failure_target` is required"),
        }
    }

    pub fn resolve(self, base_dir: PathBuf) -> Result<Experiment> {
        let code_path = base_dir.join(&self.code);
        let (descriptor, code_base) =
            CodeDescriptor::load(&code_path).with_context(|| format!("loading {}", code_path.display()))?;
        let code = descriptor.build(&code_base).with_context(|| format!("building {}", code_path.display()))?;
        let code_id = self
            .code_id
            .clone()
            .or_else(|| descriptor.name().map(str::to_owned))
            .or_else(|| self.code.file_stem().map(|s| s.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "code".into());
        let epsilons = self.epsilon.values()?;
        let budget = self.budget()?;
        for d in self.decoder.to_vec() {
            d.validate()?;
        }
        Ok(Experiment {
            config: self,
            base_dir,
            code,
            code_id,
            epsilons,
            budget,
        })
    }
}
