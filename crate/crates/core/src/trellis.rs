//! Minimal syndrome trellises of small local codes and the max* forward/backward SISO.
//!
//! The state at depth `t` is the partial syndrome `Σ_{j<t} e_j·h_j` of the independent
//! rows of `H_c`, packed into a `u64`. A transition is kept only if its right state can
//! still be completed to the zero syndrome by the remaining columns, which yields the
//! minimal (proper) trellis in a single forward pass.
//!
//! LLRs follow `Γ = log P(e = 0) − log P(e = 1)`. Saturated values are clamped to
//! `±LLR_INF`; unreachable states use IEEE `−∞` internally.

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec};

/// Magnitude of the "certain" LLR used for saturated outputs.
pub const LLR_INF: f64 = 1e6;

/// `log(e^a + e^b)`, exact; infinities absorb.
#[inline]
pub fn maxstar(a: f64, b: f64) -> f64 {
    if a.is_infinite() || b.is_infinite() {
        return a.max(b);
    }
    a.max(b) + (-(a - b).abs()).exp().ln_1p()
}

/// Upper bound on the number of edges of the minimal trellis of an `[n, k]` code.
pub fn edge_count_bound(n: usize, k: usize) -> u64 {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    let (n, k) = (n as i64, k as i64);
    let v = if k <= n - k {
        (1i64 << k) * (4 + n - 2 * k) - 4
    } else {
        (1i64 << (n - k + 1)) * (2 - n + 2 * k) - 4
    };
    v.max(0) as u64
}

/// [`edge_count_bound`] with a fractional length, for averages over checks of unequal size.
pub fn edge_count_bound_f64(n: f64, k: usize) -> f64 {
    let k = k as f64;
    let v = if k <= n - k {
        k.exp2() * (4.0 + n - 2.0 * k) - 4.0
    } else {
        (n - k + 1.0).exp2() * (2.0 - n + 2.0 * k) - 4.0
    };
    v.max(0.0)
}

/// Some `u` with `H·uᵀ = s`.
pub fn coset_representative(h: &BinaryMatrix, s: &BitVec) -> Result<BitVec> {
    h.solve(s)?.ok_or(Error::InconsistentSyndrome)
}

#[derive(Clone, Debug)]
pub struct Trellis {
    n: usize,
    rows: usize,
    kept: Vec<usize>,
    /// Per dropped row, its index and the mask of kept rows summing to it.
    dropped: Vec<(usize, u64)>,
    /// Per kept row, a vector whose syndrome is that row's unit vector.
    unit_leaders: Vec<BitVec>,
    /// `state_offset[t]..state_offset[t+1]` are the states at depth `t` (n + 2 offsets).
    state_offset: Vec<usize>,
    states: Vec<u64>,
    /// `edge_offset[t]..edge_offset[t+1]` are the edges of section `t` (n + 1 offsets).
    edge_offset: Vec<usize>,
    /// Global state indices and label of each edge.
    edge_left: Vec<u32>,
    edge_right: Vec<u32>,
    edge_label: Vec<u8>,
}

/// Echelon basis keyed by highest set bit.
fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        let top = 63 - b.leading_zeros();
        if v >> top & 1 == 1 {
            v ^= b;
        }
    }
    v
}

fn insert(basis: &mut Vec<u64>, v: u64) {
    let v = reduce(basis, v);
    if v != 0 {
        basis.push(v);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
}

impl Trellis {
    /// Builds the minimal trellis of `ker H_c`. Redundant rows are dropped and only
    /// checked for consistency when a coset leader is requested.
    pub fn new(h: &BinaryMatrix) -> Result<Self> {
        let n = h.cols();
        if let Some(c) = (0..n).find(|&c| h.col_weight(c) == 0) {
            return Err(Error::ZeroColumn(c));
        }
        let kept = h.independent_rows();
        if kept.len() > 64 {
            return Err(Error::TrellisTooWide(kept.len()));
        }
        let hk = h.select_rows(&kept);
        let cols: Vec<u64> = (0..n)
            .map(|c| (0..kept.len()).filter(|&r| hk.get(r, c)).fold(0u64, |m, r| m | 1 << r))
            .collect();

        // suffix[t] spans the columns t..n.
        let mut suffix: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        for t in (0..n).rev() {
            let mut b = suffix[t + 1].clone();
            insert(&mut b, cols[t]);
            suffix[t] = b;
        }

        let mut state_offset = vec![0, 1];
        let mut states = vec![0u64];
        let mut edge_offset = vec![0];
        let (mut edge_left, mut edge_right, mut edge_label) = (Vec::new(), Vec::new(), Vec::new());
        for t in 0..n {
            let (lo, hi) = (state_offset[t], state_offset[t + 1]);
            let mut next: Vec<u64> = Vec::new();
            let mut pending = Vec::new();
            for li in lo..hi {
                let s = states[li];
                for bit in 0..2u8 {
                    let s2 = if bit == 1 { s ^ cols[t] } else { s };
                    if reduce(&suffix[t + 1], s2) == 0 {
                        pending.push((li, s2, bit));
                        next.push(s2);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            let base = states.len();
            for (li, s2, bit) in pending {
                let ri = base + next.binary_search(&s2).expect("state was collected");
                edge_left.push(li as u32);
                edge_right.push(ri as u32);
                edge_label.push(bit);
            }
            states.extend_from_slice(&next);
            state_offset.push(states.len());
            edge_offset.push(edge_left.len());
        }

        let basis_t = hk.transpose();
        let mut dropped = Vec::new();
        for r in (0..h.rows()).filter(|r| !kept.contains(r)) {
            let combo = basis_t
                .solve(&h.row(r))?
                .expect("dropped rows lie in the span of the kept rows");
            dropped.push((r, combo.ones().fold(0u64, |m, i| m | 1 << i)));
        }
        let unit_leaders = (0..kept.len())
            .map(|i| {
                hk.solve(&BitVec::from_ones(kept.len(), &[i]))
                    .map(|u| u.expect("kept rows are independent"))
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            n,
            rows: h.rows(),
            kept,
            dropped,
            unit_leaders,
            state_offset,
            states,
            edge_offset,
            edge_left,
            edge_right,
            edge_label,
        })
    }

    /// Section count `n_c`.
    pub fn depth(&self) -> usize {
        self.n
    }

    /// Rank of the local matrix (number of independent rows kept).
    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_left.len()
    }

    /// `|S_t|` for `t = 0..=n`.
    pub fn state_profile(&self) -> Vec<usize> {
        self.state_offset.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_width(&self) -> usize {
        self.state_profile().into_iter().max().unwrap_or(1)
    }

    /// States at depth `t` as packed partial syndromes of the kept rows.
    pub fn states_at(&self, t: usize) -> &[u64] {
        &self.states[self.state_offset[t]..self.state_offset[t + 1]]
    }

    /// `(left state, right state, label)` for every edge of section `t`.
    pub fn edges_at(&self, t: usize) -> impl Iterator<Item = (u64, u64, u8)> + '_ {
        (self.edge_offset[t]..self.edge_offset[t + 1]).map(move |e| {
            (
                self.states[self.edge_left[e] as usize],
                self.states[self.edge_right[e] as usize],
                self.edge_label[e],
            )
        })
    }

    /// Coset leader for a syndrome over all rows of `H_c` (`s[r]` for row `r`).
    pub fn coset_leader(&self, s: &[bool]) -> Result<Vec<u8>> {
        if s.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {} for a local matrix with {} rows",
                s.len(),
                self.rows
            )));
        }
        let packed = self
            .kept
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &r)| if s[r] { m | 1 << i } else { m });
        for &(r, combo) in &self.dropped {
            if ((packed & combo).count_ones() % 2 == 1) != s[r] {
                return Err(Error::InconsistentSyndrome);
            }
        }
        let mut u = BitVec::zeros(self.n);
        for (i, leader) in self.unit_leaders.iter().enumerate() {
            if packed >> i & 1 == 1 {
                u.xor_assign(leader);
            }
        }
        Ok(u.to_u8s())
    }

    /// Extrinsic LLRs of every position given the coset shift `u` and input LLRs.
    pub fn siso(&self, u: &[u8], incoming: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.n || incoming.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "SISO on {} sections got {} shift bits and {} inputs",
                self.n,
                u.len(),
                incoming.len()
            )));
        }
        let mut out = vec![0.0; self.n];
        let mut scratch = SisoScratch::default();
        self.siso_into(u, incoming, &mut out, &mut scratch);
        Ok(out)
    }

    /// Allocation-free [`Trellis::siso`]; lengths are the caller's responsibility.
    pub fn siso_into(&self, u: &[u8], incoming: &[f64], out: &mut [f64], scratch: &mut SisoScratch) {
        let ns = self.states.len();
        let alpha = &mut scratch.alpha;
        let beta = &mut scratch.beta;
        alpha.clear();
        alpha.resize(ns, f64::NEG_INFINITY);
        beta.clear();
        beta.resize(ns, f64::NEG_INFINITY);
        // Bit value carried by an edge is label ⊕ u_t; its metric is −bit·Γ_t.
        let metric = |e: usize, t: usize| -> f64 {
            if (self.edge_label[e] ^ u[t]) == 1 {
                -incoming[t]
            } else {
                0.0
            }
        };

        alpha[0] = 0.0;
        for t in 0..self.n {
            for e in self.edge_offset[t]..self.edge_offset[t + 1] {
                let (l, r) = (self.edge_left[e] as usize, self.edge_right[e] as usize);
                alpha[r] = maxstar(alpha[r], alpha[l] + metric(e, t));
            }
            normalize(&mut alpha[self.state_offset[t + 1]..self.state_offset[t + 2]]);
        }
        beta[ns - 1] = 0.0;
        for t in (0..self.n).rev() {
            for e in self.edge_offset[t]..self.edge_offset[t + 1] {
                let (l, r) = (self.edge_left[e] as usize, self.edge_right[e] as usize);
                beta[l] = maxstar(beta[l], beta[r] + metric(e, t));
            }
            normalize(&mut beta[self.state_offset[t]..self.state_offset[t + 1]]);
        }
        for t in 0..self.n {
            let (mut zero, mut one) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for e in self.edge_offset[t]..self.edge_offset[t + 1] {
                let m = alpha[self.edge_left[e] as usize] + beta[self.edge_right[e] as usize];
                if (self.edge_label[e] ^ u[t]) == 1 {
                    one = maxstar(one, m);
                } else {
                    zero = maxstar(zero, m);
                }
            }
            out[t] = clamp_llr(zero - one);
        }
    }
}

/// Reusable forward/backward buffers for [`Trellis::siso_into`].
#[derive(Clone, Debug, Default)]
pub struct SisoScratch {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

fn normalize(v: &mut [f64]) {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_finite() {
        v.iter_mut().for_each(|x| *x -= m);
    }
}

/// Clamps to `±LLR_INF`, mapping NaN (both hypotheses impossible) to 0.
#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-LLR_INF, LLR_INF)
    }
}

/// Builds the trellis of `h`; see [`Trellis::new`].
pub fn build_trellis(h: &BinaryMatrix) -> Result<Trellis> {
    Trellis::new(h)
}

/// One-shot SISO for a syndrome `s`: computes the coset leader and runs the trellis.
pub fn siso_decode(trellis: &Trellis, s: &[bool], incoming: &[f64]) -> Result<Vec<f64>> {
    let u = trellis.coset_leader(s)?;
    trellis.siso(&u, incoming)
}
