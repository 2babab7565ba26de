//! Scalar LLR primitives shared by the decoders.

use crate::error::{Error, Result};
use crate::trellis::{clamp_llr, LLR_INF};

/// Per-qubit channel LLRs `Λ_v^W = log(P(I)/P(W))` for `W ∈ {X, Y, Z}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelPriors {
    pub llrs: Vec<[f64; 3]>,
}

impl ChannelPriors {
    pub fn len(&self) -> usize {
        self.llrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llrs.is_empty()
    }
}

/// Depolarizing priors: every component equals `log((1 − ε)/(ε/3))`.
pub fn init_priors(epsilon: f64, n: usize) -> Result<ChannelPriors> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "depolarizing probability must lie in (0, 1), got {epsilon}"
        )));
    }
    let l = ((1.0 - epsilon) / (epsilon / 3.0)).ln();
    Ok(ChannelPriors {
        llrs: vec![[l; 3]; n],
    })
}

/// `log(1 + e^{-x})` without overflow.
#[inline]
fn softplus_neg(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Binary LLR that a qubit with quaternary LLRs `[Γ^X, Γ^Y, Γ^Z]` commutes with a
/// check of type `side` (0: X-type, commutes with I/X; 1: Z-type, commutes with I/Z):
/// `log((1 + e^{−Γ^{W_i}}) / (e^{−Γ^Y} + e^{−Γ^{W_ī}}))` with `W_0 = X`, `W_1 = Z`.
#[inline]
pub fn quaternary_to_binary(gamma: [f64; 3], side: usize) -> f64 {
    let (commuting, other) = if side == 0 { (gamma[0], gamma[2]) } else { (gamma[2], gamma[0]) };
    let y = gamma[1];
    let v = softplus_neg(commuting) + y.min(other) - (-(y - other).abs()).exp().ln_1p();
    clamp_llr(v)
}

/// Two-input box-plus `2·atanh(tanh(a/2)·tanh(b/2))`, in a form that stays exact for
/// large magnitudes.
#[inline]
pub fn boxplus2(a: f64, b: f64) -> f64 {
    let (a, b) = (clamp_llr(a), clamp_llr(b));
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Box-plus of a list; the empty list gives the neutral element `+LLR_INF`.
pub fn boxplus(values: &[f64]) -> f64 {
    values.iter().fold(LLR_INF, |acc, &v| boxplus2(acc, v))
}

/// Writes `(−1)^flip · ⊞_{j≠i} inputs[j]` into `out[i]` via prefix/suffix folds.
pub fn boxplus_extrinsic(inputs: &[f64], flip: bool, out: &mut [f64], scratch: &mut Vec<f64>) {
    let n = inputs.len();
    scratch.clear();
    scratch.resize(n + 1, LLR_INF);
    // scratch[i] = ⊞ of inputs[i..]
    for i in (0..n).rev() {
        scratch[i] = boxplus2(scratch[i + 1], inputs[i]);
    }
    let sign = if flip { -1.0 } else { 1.0 };
    let mut prefix = LLR_INF;
    for i in 0..n {
        out[i] = sign * boxplus2(prefix, scratch[i + 1]);
        prefix = boxplus2(prefix, inputs[i]);
    }
}
