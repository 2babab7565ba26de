//! Syndrome ordered-statistics decoding of order 0 and 1.

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec};

const P_FLOOR: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct OsdSolution {
    pub bits: BitVec,
    /// `Σ_{i ∈ supp} log((1 − p_i)/p_i)` of the returned vector.
    pub cost: f64,
    /// Cost of the order-0 candidate, kept for comparison.
    pub order0_cost: f64,
}

/// Soft weight `log((1 − p)/p)` of setting a bit, with `p` clamped away from 0 and 1.
pub fn bit_cost(p: f64) -> f64 {
    let p = p.clamp(P_FLOOR, 1.0 - P_FLOOR);
    ((1.0 - p) / p).ln()
}

/// Solves `h·e = s` by OSD of the given order (0 or 1). `probs[i]` is the probability
/// that bit `i` is set; columns are ranked by it in decreasing order, ties by index.
pub fn osd(h: &BinaryMatrix, probs: &[f64], s: &BitVec, order: usize) -> Result<OsdSolution> {
    let n = h.cols();
    if probs.len() != n || s.len() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "OSD on a {}x{} system got {} probabilities and a syndrome of length {}",
            h.rows(),
            n,
            probs.len(),
            s.len()
        )));
    }
    if order > 1 {
        return Err(Error::InvalidParameter(format!("OSD order {order} is not supported")));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
    let w: Vec<f64> = perm.iter().map(|&c| bit_cost(probs[c])).collect();

    let mut aug = BinaryMatrix::zeros(h.rows(), 1);
    for r in s.ones() {
        aug.set(r, 0, true);
    }
    let aug = h.select_cols(&perm).hstack(&aug)?;
    let ech = aug.echelon_limited(n);
    let (red, pivots) = (&ech.reduced, &ech.pivots);
    let rank = pivots.len();
    if (rank..h.rows()).any(|r| red.get(r, n)) {
        return Err(Error::InconsistentSyndrome);
    }

    // Order 0: pivot variables take the reduced syndrome, the rest stay zero.
    let e0: Vec<bool> = (0..rank).map(|i| red.get(i, n)).collect();
    let order0_cost: f64 = (0..rank).filter(|&i| e0[i]).map(|i| w[pivots[i]]).sum();

    let mut best: Option<usize> = None;
    let mut best_cost = order0_cost;
    if order == 1 {
        let mut is_pivot = vec![false; n];
        pivots.iter().for_each(|&p| is_pivot[p] = true);
        for j in (0..n).filter(|&j| !is_pivot[j]) {
            let mut cost = order0_cost + w[j];
            for i in (0..rank).filter(|&i| red.get(i, j)) {
                cost += if e0[i] { -w[pivots[i]] } else { w[pivots[i]] };
            }
            if cost < best_cost {
                best_cost = cost;
                best = Some(j);
            }
        }
    }

    let mut bits = BitVec::zeros(n);
    for i in 0..rank {
        let flip = best.is_some_and(|j| red.get(i, j));
        if e0[i] != flip {
            bits.set(perm[pivots[i]], true);
        }
    }
    if let Some(j) = best {
        bits.set(perm[j], true);
    }
    Ok(OsdSolution {
        bits,
        cost: best_cost,
        order0_cost,
    })
}

/// Order-1 OSD; see [`osd`].
pub fn osd1(h: &BinaryMatrix, probs: &[f64], s: &BitVec) -> Result<BitVec> {
    osd(h, probs, s, 1).map(|sol| sol.bits)
}
