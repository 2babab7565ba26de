//! Classical and CSS code constructions.

pub mod descriptor;
pub mod group;
pub mod product;
pub mod tanner;

pub use descriptor::{CodeDescriptor, GroupSpec, MatrixSpec};
pub use group::GroupTable;
pub use product::{build_gb, build_gb_from_exponents, build_hgp, build_lp};
pub use tanner::{build_quadripartite_qt, Corner, EdgeKey, QtMeta, Square, SquareComplex, Vertex};

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

/// Classical linear code given by a parity-check matrix; `k` is always recomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCode {
    pub h: BinaryMatrix,
    pub n: usize,
    pub k: usize,
}

impl ClassicalCode {
    pub fn new(h: BinaryMatrix) -> Self {
        let n = h.cols();
        let k = n - h.rank();
        Self { h, n, k }
    }
}

/// Parity-check matrix of the dual code: the RREF basis of `ker H` (`k` rows).
pub fn dual_pcm(code: &ClassicalCode) -> BinaryMatrix {
    code.h.kernel()
}

/// How a CSS code was constructed. Structured groupings and the cycle census need `Qt`.
#[derive(Clone, Debug, Default)]
pub enum CodeMeta {
    #[default]
    None,
    Qt(Box<QtMeta>),
    Hgp {
        a: BinaryMatrix,
        b: BinaryMatrix,
    },
    Lp {
        a: BinaryMatrix,
        b: BinaryMatrix,
        l: usize,
    },
    Gb {
        a: Vec<usize>,
        b: Vec<usize>,
        l: usize,
    },
}

/// CSS code: `h0` holds the X-type checks, `h1` the Z-type checks.
#[derive(Clone, Debug)]
pub struct CssCode {
    pub n: usize,
    pub k: usize,
    pub h0: BinaryMatrix,
    pub h1: BinaryMatrix,
    pub meta: CodeMeta,
}

impl CssCode {
    /// Validates orthogonality and computes `k = n − rank H0 − rank H1`.
    pub fn from_pcms(h0: BinaryMatrix, h1: BinaryMatrix) -> Result<Self> {
        if h0.cols() != h1.cols() {
            return Err(Error::DimensionMismatch(format!(
                "H0 has {} columns, H1 has {}",
                h0.cols(),
                h1.cols()
            )));
        }
        let prod = h0.mul(&h1.transpose())?;
        for x_row in 0..prod.rows() {
            if let Some(&z_row) = prod.row_support(x_row).first() {
                return Err(Error::NotOrthogonal { x_row, z_row });
            }
        }
        let n = h0.cols();
        let k = n - h0.rank() - h1.rank();
        Ok(Self {
            n,
            k,
            h0,
            h1,
            meta: CodeMeta::None,
        })
    }

    /// Check matrix of side 0 (X-type) or 1 (Z-type).
    pub fn pcm(&self, side: usize) -> &BinaryMatrix {
        match side {
            0 => &self.h0,
            1 => &self.h1,
            _ => panic!("check side must be 0 or 1, got {side}"),
        }
    }

    pub fn qt_meta(&self) -> Result<&QtMeta> {
        match &self.meta {
            CodeMeta::Qt(m) => Ok(m),
            _ => Err(Error::MissingMetadata),
        }
    }
}

/// Convenience alias for [`CssCode::from_pcms`].
pub fn css_from_pcms(h0: BinaryMatrix, h1: BinaryMatrix) -> Result<CssCode> {
    CssCode::from_pcms(h0, h1)
}

/// Largest `n` accepted by [`brute_force_distance`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Exhaustive minimum weight of `ker H_side ∖ rowspace H_other`.
///
/// Side 0 searches `ker H0 ∖ rowspace H1`, side 1 searches `ker H1 ∖ rowspace H0`.
/// Returns `None` when the set is empty (`k = 0`).
pub fn brute_force_distance(code: &CssCode, side: usize) -> Result<Option<usize>> {
    if code.n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n: code.n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if side > 1 {
        return Err(Error::InvalidParameter(format!("side must be 0 or 1, got {side}")));
    }
    let to_mask = |m: &BinaryMatrix, r: usize| -> u64 { m.row_words(r).first().copied().unwrap_or(0) };
    let kernel = code.pcm(side).kernel();
    let basis: Vec<u64> = (0..kernel.rows()).map(|r| to_mask(&kernel, r)).collect();
    let stab = code.pcm(1 - side).echelon();
    let reducer: Vec<(u64, u64)> = stab
        .pivots
        .iter()
        .enumerate()
        .map(|(r, &p)| (1u64 << p, to_mask(&stab.reduced, r)))
        .collect();
    let in_stabilizers = |mut v: u64| {
        for &(pivot, row) in &reducer {
            if v & pivot != 0 {
                v ^= row;
            }
        }
        v == 0
    };

    // Gray-code walk over all nonzero kernel elements.
    let mut best: Option<usize> = None;
    let mut v = 0u64;
    for step in 1u64..(1u64 << basis.len()) {
        v ^= basis[step.trailing_zeros() as usize];
        let w = v.count_ones() as usize;
        if best.is_some_and(|b| w >= b) {
            continue;
        }
        if !in_stabilizers(v) {
            best = Some(w);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_self_orthogonal_check() {
        let h = BinaryMatrix::from_u8_rows(&[[1, 1]]);
        let code = css_from_pcms(h.clone(), h).unwrap();
        assert_eq!((code.n, code.k), (2, 0));
        assert_eq!(brute_force_distance(&code, 0).unwrap(), None);
    }

    #[test]
    fn anticommuting_pair_is_rejected() {
        let h = BinaryMatrix::from_u8_rows(&[[1, 0]]);
        let err = css_from_pcms(h.clone(), h).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal { x_row: 0, z_row: 0 }));
        let err = css_from_pcms(BinaryMatrix::zeros(1, 2), BinaryMatrix::zeros(1, 3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn dual_of_small_codes() {
        let rep = ClassicalCode::new(BinaryMatrix::from_u8_rows(&[[1, 1]]));
        assert_eq!(dual_pcm(&rep), BinaryMatrix::from_u8_rows(&[[1, 1]]));
        let zero = ClassicalCode::new(BinaryMatrix::identity(4));
        assert_eq!(dual_pcm(&zero).shape(), (0, 4));
    }

    #[test]
    fn smallest_hgp_has_distance_two() {
        let r = BinaryMatrix::from_u8_rows(&[[1, 1]]);
        let code = build_hgp(&r, &r);
        assert_eq!((code.n, code.k), (5, 1));
        assert_eq!(brute_force_distance(&code, 0).unwrap(), Some(2));
        assert_eq!(brute_force_distance(&code, 1).unwrap(), Some(2));
    }

    #[test]
    fn distance_guard() {
        let big = BinaryMatrix::zeros(1, 25);
        let code = css_from_pcms(big.clone(), big).unwrap();
        assert!(matches!(brute_force_distance(&code, 0), Err(Error::TooLarge { .. })));
    }

    fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = BinaryMatrix> {
        proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
            let mut m = BinaryMatrix::zeros(rows, cols);
            for (i, b) in bits.into_iter().enumerate() {
                m.set(i / cols, i % cols, b);
            }
            m
        })
    }

    proptest! {
        #[test]
        fn dual_rows_are_in_kernel(h in matrix_strategy(3, 6)) {
            let code = ClassicalCode::new(h.clone());
            let d = dual_pcm(&code);
            prop_assert_eq!(d.rows(), code.k);
            prop_assert!(h.mul(&d.transpose()).unwrap().is_zero());
        }

        #[test]
        fn distance_is_positive_and_matches_weight_search(a in matrix_strategy(2, 3), b in matrix_strategy(2, 3)) {
            let code = build_hgp(&a, &b);
            for side in 0..2 {
                let d = brute_force_distance(&code, side).unwrap();
                prop_assert_eq!(d.is_none(), code.k == 0);
                if let Some(d) = d {
                    prop_assert!(d >= 1);
                }
            }
        }
    }
}
