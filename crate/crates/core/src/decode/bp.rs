//! Flooding quaternary BP with memory over a (possibly generalized) Tanner graph.

use serde::{Deserialize, Serialize};

use super::llr::{boxplus_extrinsic, quaternary_to_binary, ChannelPriors};
use crate::channel::{Pauli, PauliError};
use crate::codes::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec};
use crate::grouping::Grouping;
use crate::trellis::{clamp_llr, SisoScratch, Trellis};

/// Which stage of a decoder produced an outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Mbp4,
    Gmbp4,
    Osd,
    Relay,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub estimate: PauliError,
    /// The estimate reproduces the syndrome.
    pub converged: bool,
    /// BP iterations spent across all stages.
    pub iterations: usize,
    pub stage: Stage,
}

/// `⟨W, W_i⟩` for `W ∈ [X, Y, Z]`: X-type checks (side 0) flag Y and Z, Z-type checks X and Y.
#[inline]
pub(crate) fn anticommutes(side: usize, w: usize) -> bool {
    if side == 0 {
        w != 0
    } else {
        w != 2
    }
}

/// How a check node turns incoming binary messages into outgoing ones.
#[derive(Clone, Debug)]
enum CheckRule {
    BoxPlus,
    Trellis(Trellis),
}

#[derive(Clone, Debug)]
struct CheckNode {
    side: usize,
    /// Global syndrome positions (side 1 rows offset by `rows(H0)`).
    rows: Vec<usize>,
    rule: CheckRule,
}

/// Quotient Tanner graph with per-edge message slots. Edges of a check are stored
/// contiguously in increasing qubit order, which is the trellis column order.
#[derive(Clone, Debug)]
pub struct BpGraph {
    n: usize,
    checks: Vec<CheckNode>,
    check_offset: Vec<usize>,
    edge_var: Vec<u32>,
    edge_side: Vec<u8>,
    var_offset: Vec<usize>,
    var_edges: Vec<u32>,
    /// Row supports of `H0` then `H1` for the syndrome test.
    row_support: Vec<Vec<u32>>,
    rows0: usize,
}

impl BpGraph {
    /// One check per row with box-plus updates (MBP₄, Relay-BP₄).
    pub fn trivial(code: &CssCode) -> Self {
        let mut checks = Vec::new();
        let mut supports = Vec::new();
        for side in 0..2 {
            let h = code.pcm(side);
            let base = if side == 0 { 0 } else { code.h0.rows() };
            for r in 0..h.rows() {
                checks.push(CheckNode {
                    side,
                    rows: vec![base + r],
                    rule: CheckRule::BoxPlus,
                });
                supports.push(h.row_support(r));
            }
        }
        Self::assemble(code, checks, supports)
    }

    /// One check per block with trellis SISO updates, including single-row blocks.
    pub fn generalized(code: &CssCode, groupings: &[Grouping; 2]) -> Result<Self> {
        let mut checks = Vec::new();
        let mut supports = Vec::new();
        for (side, g) in groupings.iter().enumerate() {
            let h = code.pcm(side);
            if g.side != side {
                return Err(Error::InvalidGrouping(format!(
                    "grouping for side {} supplied in slot {side}",
                    g.side
                )));
            }
            let covered: usize = g.blocks.iter().map(Vec::len).sum();
            if covered != h.rows() || g.blocks.iter().flatten().any(|&r| r >= h.rows()) {
                return Err(Error::InvalidGrouping(format!(
                    "side-{side} grouping does not partition the {} rows",
                    h.rows()
                )));
            }
            let base = if side == 0 { 0 } else { code.h0.rows() };
            for (c, block) in g.blocks.iter().enumerate() {
                checks.push(CheckNode {
                    side,
                    rows: block.iter().map(|&r| base + r).collect(),
                    rule: CheckRule::Trellis(Trellis::new(&g.local_pcms[c])?),
                });
                supports.push(g.supports[c].clone());
            }
        }
        Ok(Self::assemble(code, checks, supports))
    }

    fn assemble(code: &CssCode, checks: Vec<CheckNode>, supports: Vec<Vec<usize>>) -> Self {
        let n = code.n;
        let mut check_offset = vec![0];
        let mut edge_var = Vec::new();
        let mut edge_side = Vec::new();
        for (check, support) in checks.iter().zip(&supports) {
            for &v in support {
                edge_var.push(v as u32);
                edge_side.push(check.side as u8);
            }
            check_offset.push(edge_var.len());
        }
        let mut degree = vec![0usize; n];
        edge_var.iter().for_each(|&v| degree[v as usize] += 1);
        let mut var_offset = vec![0];
        for d in &degree {
            var_offset.push(var_offset.last().unwrap() + d);
        }
        let mut fill = var_offset.clone();
        let mut var_edges = vec![0u32; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v as usize]] = e as u32;
            fill[v as usize] += 1;
        }
        let row_support = [&code.h0, &code.h1]
            .iter()
            .flat_map(|h| (0..h.rows()).map(|r| h.row_support(r).into_iter().map(|v| v as u32).collect()))
            .collect();
        Self {
            n,
            checks,
            check_offset,
            edge_var,
            edge_side,
            var_offset,
            var_edges,
            row_support,
            rows0: code.h0.rows(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    pub fn syndrome_len(&self) -> usize {
        self.row_support.len()
    }

    /// Full syndrome `(H0·z, H1·x)` of a Pauli estimate.
    pub fn syndrome_of(&self, e: &PauliError) -> BitVec {
        let mut s = BitVec::zeros(self.row_support.len());
        for (r, support) in self.row_support.iter().enumerate() {
            let part = if r < self.rows0 { &e.z } else { &e.x };
            let parity = support.iter().filter(|&&v| part.get(v as usize)).count() % 2 == 1;
            s.set(r, parity);
        }
        s
    }

    pub(crate) fn check_syndrome(&self, e: &PauliError, s: &BitVec) -> Result<bool> {
        if s.len() != self.syndrome_len() || e.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "decoder expects {} qubits and {} syndrome bits, got {} and {}",
                self.n,
                self.syndrome_len(),
                e.len(),
                s.len()
            )));
        }
        Ok(self.syndrome_of(e) == *s)
    }
}

/// Per-call message storage.
#[derive(Default)]
pub(crate) struct BpState {
    pub msg_q: Vec<[f64; 3]>,
    msg_b: Vec<f64>,
    delta: Vec<f64>,
    pub post: Vec<[f64; 3]>,
    /// Coset shift (trellis checks) or syndrome parity (box-plus checks) per check.
    leaders: Vec<Vec<u8>>,
    flips: Vec<bool>,
    scratch: Vec<f64>,
    siso: SisoScratch,
}

impl BpState {
    pub fn new(graph: &BpGraph, s: &BitVec) -> Result<Self> {
        if s.len() != graph.syndrome_len() {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {} for {} checks",
                s.len(),
                graph.syndrome_len()
            )));
        }
        let mut leaders = Vec::with_capacity(graph.checks.len());
        let mut flips = Vec::with_capacity(graph.checks.len());
        for check in &graph.checks {
            let bits: Vec<bool> = check.rows.iter().map(|&r| s.get(r)).collect();
            flips.push(bits.iter().filter(|&&b| b).count() % 2 == 1);
            leaders.push(match &check.rule {
                CheckRule::BoxPlus => Vec::new(),
                CheckRule::Trellis(t) => t.coset_leader(&bits)?,
            });
        }
        let ne = graph.num_edges();
        Ok(Self {
            msg_q: vec![[0.0; 3]; ne],
            msg_b: vec![0.0; ne],
            delta: vec![0.0; ne],
            post: vec![[0.0; 3]; graph.n],
            leaders,
            flips,
            scratch: Vec::new(),
            siso: SisoScratch::default(),
        })
    }

    /// Sets every variable-to-check message to the prior of its qubit.
    pub fn reset_messages(&mut self, graph: &BpGraph, init: &[[f64; 3]]) {
        for (e, &v) in graph.edge_var.iter().enumerate() {
            self.msg_q[e] = init[v as usize];
        }
    }

    /// One flooding iteration: binary conversion, check updates, posterior with
    /// weight `scale` on check messages, and the memory message update.
    pub fn iterate(&mut self, graph: &BpGraph, prior: &[[f64; 3]], scale: f64) {
        for e in 0..graph.num_edges() {
            self.msg_b[e] = quaternary_to_binary(self.msg_q[e], graph.edge_side[e] as usize);
        }
        for (c, check) in graph.checks.iter().enumerate() {
            let range = graph.check_offset[c]..graph.check_offset[c + 1];
            let (inputs, out) = (&self.msg_b[range.clone()], &mut self.delta[range]);
            match &check.rule {
                CheckRule::BoxPlus => boxplus_extrinsic(inputs, self.flips[c], out, &mut self.scratch),
                CheckRule::Trellis(t) => t.siso_into(&self.leaders[c], inputs, out, &mut self.siso),
            }
        }
        for v in 0..graph.n {
            let mut g = prior[v];
            for &e in &graph.var_edges[graph.var_offset[v]..graph.var_offset[v + 1]] {
                let side = graph.edge_side[e as usize] as usize;
                for (w, gw) in g.iter_mut().enumerate() {
                    if anticommutes(side, w) {
                        *gw += scale * self.delta[e as usize];
                    }
                }
            }
            self.post[v] = g.map(clamp_llr);
        }
        for e in 0..graph.num_edges() {
            let side = graph.edge_side[e] as usize;
            let mut m = self.post[graph.edge_var[e] as usize];
            for (w, mw) in m.iter_mut().enumerate() {
                if anticommutes(side, w) {
                    *mw = clamp_llr(*mw - scale * self.delta[e]);
                }
            }
            self.msg_q[e] = m;
        }
    }
}

/// `I` if every component is positive, otherwise the argmin with ties broken X < Y < Z.
pub fn hard_decision_qubit(g: [f64; 3]) -> Pauli {
    if g.iter().all(|&x| x > 0.0) {
        return Pauli::I;
    }
    let mut best = 0;
    for w in 1..3 {
        if g[w] < g[best] {
            best = w;
        }
    }
    [Pauli::X, Pauli::Y, Pauli::Z][best]
}

pub fn hard_decision(post: &[[f64; 3]]) -> PauliError {
    let mut e = PauliError::identity(post.len());
    for (v, &g) in post.iter().enumerate() {
        e.set(v, hard_decision_qubit(g));
    }
    e
}

/// Result of one BP run, including the final posterior for post-processing.
pub(crate) struct BpRun {
    pub estimate: PauliError,
    pub converged: bool,
    pub iterations: usize,
    pub posterior: Vec<[f64; 3]>,
}

/// Algorithm-3 loop: messages start at `init`, posteriors accumulate on `priors`.
pub(crate) fn run_bp(
    graph: &BpGraph,
    s: &BitVec,
    priors: &ChannelPriors,
    init: &[[f64; 3]],
    alpha: f64,
    t_max: usize,
) -> Result<BpRun> {
    if priors.len() != graph.n || init.len() != graph.n {
        return Err(Error::DimensionMismatch(format!(
            "priors for {} qubits on a {}-qubit code",
            priors.len(),
            graph.n
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let mut state = BpState::new(graph, s)?;
    state.reset_messages(graph, init);
    let mut estimate = PauliError::identity(graph.n);
    for t in 1..=t_max {
        state.iterate(graph, &priors.llrs, 1.0 / alpha);
        estimate = hard_decision(&state.post);
        if graph.check_syndrome(&estimate, s)? {
            return Ok(BpRun {
                estimate,
                converged: true,
                iterations: t,
                posterior: state.post,
            });
        }
    }
    let posterior = if t_max == 0 { priors.llrs.clone() } else { state.post };
    Ok(BpRun {
        estimate,
        converged: false,
        iterations: t_max,
        posterior,
    })
}

/// Joint binary system `[H0 0; 0 H1]` over `(e_z, e_x)` for OSD post-processing.
#[derive(Clone, Debug)]
pub struct OsdSystem {
    matrix: BinaryMatrix,
    n: usize,
}

impl OsdSystem {
    pub fn new(code: &CssCode) -> Self {
        Self {
            matrix: code.h0.block_diag(&code.h1),
            n: code.n,
        }
    }

    /// OSD-1 from quaternary posteriors: `P(e_z) = P(Z) + P(Y)`, `P(e_x) = P(X) + P(Y)`.
    pub fn decode(&self, posterior: &[[f64; 3]], s: &BitVec) -> Result<PauliError> {
        let mut probs = vec![0.0; 2 * self.n];
        for (v, g) in posterior.iter().enumerate() {
            let [px, py, pz] = pauli_probabilities(*g);
            probs[v] = pz + py;
            probs[self.n + v] = px + py;
        }
        let bits = super::osd::osd1(&self.matrix, &probs, s)?;
        Ok(PauliError::from_parts(bits.slice(self.n, 2 * self.n), bits.slice(0, self.n)))
    }
}

/// `[P(X), P(Y), P(Z)]` from LLRs `log(P(I)/P(W))`.
pub fn pauli_probabilities(g: [f64; 3]) -> [f64; 3] {
    let logs = [0.0, -g[0], -g[1], -g[2]];
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = logs.iter().map(|l| (l - m).exp()).sum();
    [1, 2, 3].map(|i| (logs[i] - m).exp() / z)
}

fn finish(run: BpRun, stage: Stage, extra_iters: usize) -> DecodeOutcome {
    DecodeOutcome {
        estimate: run.estimate,
        converged: run.converged,
        iterations: run.iterations + extra_iters,
        stage,
    }
}

fn post_process(
    graph: &BpGraph,
    run: BpRun,
    s: &BitVec,
    osd: Option<&OsdSystem>,
    stage: Stage,
    extra_iters: usize,
) -> Result<DecodeOutcome> {
    match osd {
        Some(sys) if !run.converged => {
            let estimate = sys.decode(&run.posterior, s)?;
            let converged = graph.check_syndrome(&estimate, s)?;
            Ok(DecodeOutcome {
                estimate,
                converged,
                iterations: run.iterations + extra_iters,
                stage: Stage::Osd,
            })
        }
        _ => Ok(finish(run, stage, extra_iters)),
    }
}

/// GMBP₄ on a graph built by [`BpGraph::generalized`], optionally followed by OSD-1.
pub fn gmbp4_decode(
    graph: &BpGraph,
    s: &BitVec,
    priors: &ChannelPriors,
    alpha: f64,
    t_max: usize,
    osd: Option<&OsdSystem>,
) -> Result<DecodeOutcome> {
    let run = run_bp(graph, s, priors, &priors.llrs, alpha, t_max)?;
    post_process(graph, run, s, osd, Stage::Gmbp4, 0)
}

/// MBP₄ on a graph built by [`BpGraph::trivial`], optionally followed by OSD-1.
pub fn mbp4_decode(
    graph: &BpGraph,
    s: &BitVec,
    priors: &ChannelPriors,
    alpha: f64,
    t_max: usize,
    osd: Option<&OsdSystem>,
) -> Result<DecodeOutcome> {
    let run = run_bp(graph, s, priors, &priors.llrs, alpha, t_max)?;
    post_process(graph, run, s, osd, Stage::Mbp4, 0)
}

/// MBP₄ first; on failure GMBP₄ (cold-started from the priors unless `warm_start`),
/// then OSD-1 when given.
#[allow(clippy::too_many_arguments)]
pub fn hybrid_decode(
    trivial: &BpGraph,
    generalized: &BpGraph,
    s: &BitVec,
    priors: &ChannelPriors,
    alpha: f64,
    t_max: usize,
    osd: Option<&OsdSystem>,
    warm_start: bool,
) -> Result<DecodeOutcome> {
    let first = run_bp(trivial, s, priors, &priors.llrs, alpha, t_max)?;
    if first.converged {
        return Ok(finish(first, Stage::Mbp4, 0));
    }
    let init = if warm_start { &first.posterior } else { &priors.llrs };
    let second = run_bp(generalized, s, priors, init, alpha, t_max)?;
    post_process(generalized, second, s, osd, Stage::Gmbp4, first.iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_hgp, build_quadripartite_qt, GroupTable};
    use crate::decode::llr::init_priors;
    use crate::grouping::{full_grouping, greedy_grouping};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rep(n: usize) -> BinaryMatrix {
        let mut h = BinaryMatrix::zeros(n - 1, n);
        for i in 0..n - 1 {
            h.set(i, i, true);
            h.set(i, i + 1, true);
        }
        h
    }

    fn toy_qt() -> CssCode {
        let g = GroupTable::cyclic(5);
        let h_a = BinaryMatrix::from_u8_rows(&[[1, 1]]);
        let h_b = BinaryMatrix::from_u8_rows(&[[1, 1]]);
        build_quadripartite_qt(g, vec![1, 4], vec![2, 3], h_a, h_b).unwrap()
    }

    fn random_error(n: usize, eps: f64, rng: &mut ChaCha8Rng) -> PauliError {
        let mut e = PauliError::identity(n);
        for v in 0..n {
            if rng.gen::<f64>() < eps {
                e.set(v, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]);
            }
        }
        e
    }

    #[test]
    fn hard_decision_rules() {
        assert_eq!(hard_decision_qubit([1.0, 2.0, 3.0]), Pauli::I);
        assert_eq!(hard_decision_qubit([-1.0, 2.0, 3.0]), Pauli::X);
        assert_eq!(hard_decision_qubit([-1.0, -1.0, 5.0]), Pauli::X);
        assert_eq!(hard_decision_qubit([2.0, -1.0, -1.0]), Pauli::Y);
        assert_eq!(hard_decision_qubit([0.0, 1.0, 1.0]), Pauli::X);
    }

    #[test]
    fn pauli_probabilities_normalize() {
        let p = pauli_probabilities([27f64.ln(); 3]);
        for x in p {
            assert!((x - 1.0 / 30.0).abs() < 1e-12);
        }
        let p = pauli_probabilities([1e6, -1e6, 1e6]);
        assert!((p[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_syndrome_converges_immediately() {
        let code = toy_qt();
        let priors = init_priors(0.05, code.n).unwrap();
        let s = BitVec::zeros(code.h0.rows() + code.h1.rows());
        let graph = BpGraph::trivial(&code);
        let out = mbp4_decode(&graph, &s, &priors, 1.6, 6, None).unwrap();
        assert!(out.converged && out.estimate.is_identity());
        assert_eq!((out.iterations, out.stage), (1, Stage::Mbp4));
        let full = BpGraph::generalized(&code, &full_grouping(&code).unwrap()).unwrap();
        let out = gmbp4_decode(&full, &s, &priors, 1.6, 6, None).unwrap();
        assert!(out.converged && out.estimate.is_identity() && out.iterations == 1);
    }

    #[test]
    fn single_qubit_y() {
        // Not a valid stabilizer code (the two checks anticommute), but the decoder
        // only sees the graph.
        let one = BinaryMatrix::from_u8_rows(&[[1]]);
        let code = CssCode {
            n: 1,
            k: 0,
            h0: one.clone(),
            h1: one,
            meta: Default::default(),
        };
        let graph = BpGraph::trivial(&code);
        let s = graph.syndrome_of(&PauliError::from_paulis(&[Pauli::Y]));
        assert_eq!(s.to_u8s(), vec![1, 1]);
        for alpha in [1.0, 1.6] {
            let out = mbp4_decode(&graph, &s, &init_priors(0.1, 1).unwrap(), alpha, 6, None).unwrap();
            assert!(out.converged && out.iterations == 1);
            assert_eq!(out.estimate.paulis(), vec![Pauli::Y]);
        }
    }

    #[test]
    fn trivial_generalized_matches_boxplus() {
        let code = toy_qt();
        let trivial = BpGraph::trivial(&code);
        let singles = [Grouping::trivial(&code.h0, 0), Grouping::trivial(&code.h1, 1)];
        let gen = BpGraph::generalized(&code, &singles).unwrap();
        let priors = init_priors(0.12, code.n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let e = random_error(code.n, 0.12, &mut rng);
            let s = trivial.syndrome_of(&e);
            for t in 1..=6 {
                let a = run_bp(&trivial, &s, &priors, &priors.llrs, 1.6, t).unwrap();
                let b = run_bp(&gen, &s, &priors, &priors.llrs, 1.6, t).unwrap();
                assert_eq!(a.estimate, b.estimate);
                assert_eq!((a.converged, a.iterations), (b.converged, b.iterations));
            }
        }
    }

    #[test]
    fn converged_outcomes_match_syndrome() {
        let code = toy_qt();
        let trivial = BpGraph::trivial(&code);
        let full = BpGraph::generalized(&code, &full_grouping(&code).unwrap()).unwrap();
        let osd = OsdSystem::new(&code);
        let priors = init_priors(0.1, code.n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let e = random_error(code.n, 0.1, &mut rng);
            let s = trivial.syndrome_of(&e);
            let out = hybrid_decode(&trivial, &full, &s, &priors, 1.6, 6, Some(&osd), false).unwrap();
            assert!(out.converged, "OSD always restores the syndrome");
            assert_eq!(trivial.syndrome_of(&out.estimate), s);
            if out.stage == Stage::Mbp4 {
                assert!(out.iterations <= 6);
            }
        }
    }

    #[test]
    fn hybrid_reaches_second_stage() {
        // Full grouping of this toy keeps one row per vertex, so pair rows greedily.
        let code = toy_qt();
        let trivial = BpGraph::trivial(&code);
        let pairs = [greedy_grouping(&code.h0, 0, 2, 3).unwrap(), greedy_grouping(&code.h1, 1, 2, 3).unwrap()];
        let full = BpGraph::generalized(&code, &pairs).unwrap();
        let priors = init_priors(0.2, code.n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let found = (0..2000).any(|_| {
            let e = random_error(code.n, 0.2, &mut rng);
            let s = trivial.syndrome_of(&e);
            let out = hybrid_decode(&trivial, &full, &s, &priors, 1.6, 6, None, false).unwrap();
            out.stage == Stage::Gmbp4 && out.converged && out.iterations > 6
        });
        assert!(found);
    }

    #[test]
    fn hgp_osd_fixes_every_single_error() {
        let code = build_hgp(&rep(3), &rep(3));
        let graph = BpGraph::trivial(&code);
        let osd = OsdSystem::new(&code);
        let priors = init_priors(0.05, code.n).unwrap();
        for v in 0..code.n {
            for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                let mut e = PauliError::identity(code.n);
                e.set(v, p);
                let s = graph.syndrome_of(&e);
                let out = mbp4_decode(&graph, &s, &priors, 1.0, 0, Some(&osd)).unwrap();
                assert_eq!(out.stage, Stage::Osd);
                assert_eq!(graph.syndrome_of(&out.estimate), s);
            }
        }
    }
}
