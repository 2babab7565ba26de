//! Relay-BP₄: consecutive memory-BP legs with randomized per-qubit memory strengths.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bp::{hard_decision, BpGraph, BpState, DecodeOutcome, OsdSystem, Stage};
use super::llr::ChannelPriors;
use crate::channel::PauliError;
use crate::error::{Error, Result};
use crate::gf2::BitVec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelayParams {
    /// Maximum number of legs `R`.
    pub legs: usize,
    /// Iterations per leg; the last entry repeats for later legs.
    pub leg_iterations: Vec<usize>,
    pub gamma_center: f64,
    pub gamma_width: f64,
    /// Stop after this many syndrome-satisfying solutions; `None` means `R`.
    #[serde(default)]
    pub solutions: Option<usize>,
}

impl Default for RelayParams {
    fn default() -> Self {
        Self {
            legs: 5,
            leg_iterations: vec![6],
            gamma_center: 0.3,
            gamma_width: 0.66,
            solutions: None,
        }
    }
}

impl RelayParams {
    pub fn validate(&self) -> Result<()> {
        if self.legs == 0 || self.leg_iterations.is_empty() {
            return Err(Error::InvalidParameter("relay needs at least one leg and one iteration count".into()));
        }
        if !(self.gamma_width >= 0.0) || !self.gamma_center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "relay memory range {} ± {}/2 is invalid",
                self.gamma_center, self.gamma_width
            )));
        }
        if self.solutions == Some(0) {
            return Err(Error::InvalidParameter("relay solution target must be positive".into()));
        }
        Ok(())
    }

    fn iterations_for(&self, leg: usize) -> usize {
        self.leg_iterations[leg.min(self.leg_iterations.len() - 1)]
    }

    fn target(&self) -> usize {
        self.solutions.unwrap_or(self.legs)
    }
}

/// Per-leg record, for inspection and tests.
#[derive(Clone, Debug, PartialEq)]
pub struct RelayLeg {
    pub gammas: Vec<f64>,
    pub iterations: usize,
    /// Soft weight of the leg's solution, if it produced one.
    pub weight: Option<f64>,
    /// The solution became the new incumbent.
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelayTrace {
    pub outcome: DecodeOutcome,
    /// Soft weight of the returned estimate (`+∞` when none was found).
    pub weight: f64,
    pub legs: Vec<RelayLeg>,
}

/// `ω = Σ_{v: Ê_v = W ≠ I} Λ_v^W`.
pub fn soft_weight(e: &PauliError, priors: &ChannelPriors) -> f64 {
    (0..e.len())
        .filter_map(|v| e.get(v).llr_index().map(|w| priors.llrs[v][w]))
        .sum()
}

pub fn relay_bp4<R: Rng + ?Sized>(
    graph: &BpGraph,
    s: &BitVec,
    priors: &ChannelPriors,
    params: &RelayParams,
    osd: Option<&OsdSystem>,
    rng: &mut R,
) -> Result<DecodeOutcome> {
    relay_bp4_traced(graph, s, priors, params, osd, rng).map(|t| t.outcome)
}

/// [`relay_bp4`] that also reports every leg.
pub fn relay_bp4_traced<R: Rng + ?Sized>(
    graph: &BpGraph,
    s: &BitVec,
    priors: &ChannelPriors,
    params: &RelayParams,
    osd: Option<&OsdSystem>,
    rng: &mut R,
) -> Result<RelayTrace> {
    params.validate()?;
    let n = graph.num_qubits();
    if priors.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "priors for {} qubits on a {n}-qubit code",
            priors.len()
        )));
    }
    let lambda = &priors.llrs;
    let mut state = BpState::new(graph, s)?;
    state.post.clone_from(lambda);
    let mut blended = lambda.clone();

    let mut best: Option<(PauliError, f64)> = None;
    let mut last = PauliError::identity(n);
    let mut found = 0;
    let mut total_iters = 0;
    let mut legs = Vec::new();
    let (lo, hi) = (
        params.gamma_center - params.gamma_width / 2.0,
        params.gamma_center + params.gamma_width / 2.0,
    );

    for leg in 0..params.legs {
        let gammas: Vec<f64> = (0..n)
            .map(|_| if hi > lo { rng.gen_range(lo..hi) } else { lo })
            .collect();
        state.reset_messages(graph, lambda);
        let mut solution = None;
        let mut iters = 0;
        for _ in 0..params.iterations_for(leg) {
            iters += 1;
            for v in 0..n {
                let g = gammas[v];
                for w in 0..3 {
                    blended[v][w] = (1.0 - g) * lambda[v][w] + g * state.post[v][w];
                }
            }
            state.iterate(graph, &blended, 1.0);
            last = hard_decision(&state.post);
            if graph.check_syndrome(&last, s)? {
                solution = Some(last.clone());
                break;
            }
        }
        total_iters += iters;
        if solution.is_none() {
            if let Some(sys) = osd {
                let e = sys.decode(&state.post, s)?;
                if graph.check_syndrome(&e, s)? {
                    solution = Some(e);
                }
            }
        }

        let mut record = RelayLeg {
            gammas,
            iterations: iters,
            weight: None,
            accepted: false,
        };
        if let Some(e) = solution {
            let w = soft_weight(&e, priors);
            record.weight = Some(w);
            if best.as_ref().is_none_or(|(_, bw)| w < *bw) {
                best = Some((e, w));
                record.accepted = true;
            }
            found += 1;
        }
        legs.push(record);
        if found >= params.target() {
            break;
        }
    }

    let (outcome, weight) = match best {
        Some((estimate, w)) => (
            DecodeOutcome {
                estimate,
                converged: true,
                iterations: total_iters,
                stage: Stage::Relay,
            },
            w,
        ),
        None => (
            DecodeOutcome {
                estimate: last,
                converged: false,
                iterations: total_iters,
                stage: Stage::Relay,
            },
            f64::INFINITY,
        ),
    };
    Ok(RelayTrace { outcome, weight, legs })
}
