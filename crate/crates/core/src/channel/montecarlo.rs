//! Parallel logical-error-rate estimation with per-trial RNG streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_depolarizing, Classifier, TrialOutcome};
use crate::codes::CssCode;
use crate::decode::{init_priors, ChannelPriors, Decoder};
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959964;

/// Trials are decoded in chunks of this size; failure-target runs stop inside a chunk
/// at the exact trial that reaches the target, so the result does not depend on it.
const CHUNK: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialBudget {
    Fixed(u64),
    /// Stop at `failures` failures or after `max_trials` trials.
    FailureTarget { failures: u64, max_trials: u64 },
}

impl TrialBudget {
    fn cap(self) -> u64 {
        match self {
            TrialBudget::Fixed(t) => t,
            TrialBudget::FailureTarget { max_trials, .. } => max_trials,
        }
    }
}

/// One `(ε, decoder)` point. `ler` and the interval are `None` when no trial ran.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LerRow {
    pub epsilon: f64,
    pub trials: u64,
    pub failures: u64,
    pub logical_failures: u64,
    pub convergence_failures: u64,
    pub ler: Option<f64>,
    pub ler_ci_low: Option<f64>,
    pub ler_ci_high: Option<f64>,
    pub mean_iters: Option<f64>,
    /// Fraction of trials that converged in the decoder's first BP stage.
    pub stage1_frac: Option<f64>,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> Option<(f64, f64)> {
    if n == 0 {
        return None;
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Some(((center - half).max(0.0), (center + half).min(1.0)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// RNG for trial `trial` at sweep point `point`; independent of scheduling.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(seed) ^ point) ^ trial);
    ChaCha8Rng::seed_from_u64(key)
}

#[derive(Clone, Copy)]
struct TrialResult {
    outcome: TrialOutcome,
    iterations: usize,
    first_stage: bool,
}

fn run_trial(
    code: &CssCode,
    decoder: &Decoder,
    classifier: &Classifier,
    priors: &ChannelPriors,
    epsilon: f64,
    seed: u64,
    point: u64,
    trial: u64,
) -> Result<TrialResult> {
    let mut rng = trial_rng(seed, point, trial);
    let e = sample_depolarizing(code.n, epsilon, &mut rng);
    let s = super::syndrome(code, &e)?;
    let out = decoder.decode(&s, priors, &mut rng)?;
    if out.converged && !decoder.satisfies(&out.estimate, &s) {
        return Err(Error::InconsistentSyndrome);
    }
    Ok(TrialResult {
        outcome: classifier.classify(&e, &out.estimate, out.converged),
        iterations: out.iterations,
        first_stage: out.converged && out.stage == decoder.config().decoder.first_stage(),
    })
}

/// Runs one sweep point on the current rayon pool.
pub fn run_point(
    code: &CssCode,
    decoder: &Decoder,
    epsilon: f64,
    point: u64,
    budget: TrialBudget,
    seed: u64,
) -> Result<LerRow> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside [0, 1]")));
    }
    let classifier = Classifier::new(code);
    // ε = 0 never reaches the decoder with a nonzero syndrome, any finite prior will do.
    let priors = init_priors(epsilon.clamp(1e-12, 1.0 - 1e-12), code.n)?;
    let cap = budget.cap();
    let (mut trials, mut failures, mut logical, mut convergence, mut iters, mut first) = (0u64, 0u64, 0u64, 0u64, 0u64, 0u64);
    'outer: while trials < cap {
        let end = (trials + CHUNK).min(cap);
        let results: Vec<TrialResult> = (trials..end)
            .into_par_iter()
            .map(|t| run_trial(code, decoder, &classifier, &priors, epsilon, seed, point, t))
            .collect::<Result<_>>()?;
        for r in results {
            trials += 1;
            iters += r.iterations as u64;
            first += r.first_stage as u64;
            match r.outcome {
                TrialOutcome::Success => {}
                TrialOutcome::LogicalFailure => logical += 1,
                TrialOutcome::ConvergenceFailure => convergence += 1,
            }
            if r.outcome.is_failure() {
                failures += 1;
                if let TrialBudget::FailureTarget { failures: target, .. } = budget {
                    if failures >= target {
                        break 'outer;
                    }
                }
            }
        }
    }
    let ci = wilson_interval(failures, trials, WILSON_Z);
    let frac = |x: u64| (trials > 0).then(|| x as f64 / trials as f64);
    Ok(LerRow {
        epsilon,
        trials,
        failures,
        logical_failures: logical,
        convergence_failures: convergence,
        ler: frac(failures),
        ler_ci_low: ci.map(|c| c.0),
        ler_ci_high: ci.map(|c| c.1),
        mean_iters: frac(iters),
        stage1_frac: frac(first),
    })
}

/// Runs every `ε` on a dedicated pool of `workers` threads (0 = rayon default).
pub fn run_monte_carlo(
    code: &CssCode,
    decoder: &Decoder,
    epsilons: &[f64],
    budget: TrialBudget,
    seed: u64,
    workers: usize,
) -> Result<Vec<LerRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        epsilons
            .iter()
            .enumerate()
            .map(|(i, &eps)| run_point(code, decoder, eps, i as u64, budget, seed))
            .collect()
    })
}
