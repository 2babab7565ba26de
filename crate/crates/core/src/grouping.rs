//! Partitions of check rows into generalized checks.
//!
//! A [`Grouping`] splits the rows of one check matrix into blocks; each block is decoded
//! as a single constraint on its joint column support. Structured groupings
//! ([`full_grouping`], [`partial_grouping`]) need quantum Tanner metadata; the greedy
//! overlap-maximizing grouping works on any matrix.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::CssCode;
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    /// 0 for the X-type matrix `H0`, 1 for `H1`.
    pub side: usize,
    pub blocks: Vec<Vec<usize>>,
    /// Each block's rows restricted to its support.
    pub local_pcms: Vec<BinaryMatrix>,
    /// Sorted column support of each block.
    pub supports: Vec<Vec<usize>>,
    /// Largest block size.
    pub r: usize,
}

impl Grouping {
    /// Validates that `blocks` partition the rows of `h` and derives supports and local matrices.
    pub fn from_blocks(h: &BinaryMatrix, side: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; h.rows()];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidGrouping("empty block".into()));
            }
            for &row in block {
                if row >= h.rows() {
                    return Err(Error::InvalidGrouping(format!(
                        "row {row} out of range for {} rows",
                        h.rows()
                    )));
                }
                if std::mem::replace(&mut seen[row], true) {
                    return Err(Error::InvalidGrouping(format!("row {row} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidGrouping(format!("row {missing} is not covered")));
        }
        let mut supports = Vec::with_capacity(blocks.len());
        let mut local_pcms = Vec::with_capacity(blocks.len());
        for block in &blocks {
            let support: BTreeSet<usize> = block.iter().flat_map(|&r| h.row_support(r)).collect();
            let support: Vec<usize> = support.into_iter().collect();
            local_pcms.push(h.select_rows(block).select_cols(&support));
            supports.push(support);
        }
        let r = blocks.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            side,
            blocks,
            local_pcms,
            supports,
            r,
        })
    }

    /// Every row on its own.
    pub fn trivial(h: &BinaryMatrix, side: usize) -> Self {
        Self::from_blocks(h, side, (0..h.rows()).map(|r| vec![r]).collect())
            .expect("singletons always partition")
    }

    /// Everything in one block.
    pub fn total(h: &BinaryMatrix, side: usize) -> Result<Self> {
        Self::from_blocks(h, side, vec![(0..h.rows()).collect()])
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `n_c`, the support size of block `c`.
    pub fn n_c(&self, c: usize) -> usize {
        self.supports[c].len()
    }

    /// `k_c = n_c − rank H_c`; blocks may be rank-deficient so the rank is recomputed.
    pub fn k_c(&self, c: usize) -> usize {
        self.n_c(c) - self.local_pcms[c].rank()
    }

    pub fn quotient_graph(&self, num_vars: usize) -> QuotientTannerGraph {
        QuotientTannerGraph {
            num_vars,
            adjacency: self.supports.clone(),
        }
    }
}

/// Bipartite graph between generalized checks and qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTannerGraph {
    pub num_vars: usize,
    /// Per check node, its sorted variable neighbourhood.
    pub adjacency: Vec<Vec<usize>>,
}

impl QuotientTannerGraph {
    pub fn num_checks(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// The ordinary Tanner graph of `h`.
    pub fn from_matrix(h: &BinaryMatrix) -> Self {
        Self {
            num_vars: h.cols(),
            adjacency: (0..h.rows()).map(|r| h.row_support(r)).collect(),
        }
    }

    /// Disjoint union on a shared variable set: checks of `self` then checks of `other`.
    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "graphs over different qubit sets");
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(other.adjacency.iter().cloned());
        Self {
            num_vars: self.num_vars,
            adjacency,
        }
    }
}

/// Check `c` is adjacent to `v` iff column `v` of `H_c` is nonzero.
pub fn quotient_tanner_graph(h: &BinaryMatrix, g: &Grouping) -> Result<QuotientTannerGraph> {
    let checked = Grouping::from_blocks(h, g.side, g.blocks.clone())?;
    Ok(checked.quotient_graph(h.cols()))
}

/// Which local-code factor to keep intact in a partial grouping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    A,
    B,
}

/// Rows of the local views: vertex `v` of a side owns rows `v·m_loc .. (v+1)·m_loc`.
fn per_vertex_blocks(code: &CssCode, side: usize, local_blocks: &[Vec<usize>]) -> Result<Grouping> {
    let meta = code.qt_meta()?;
    let m_loc = meta.local_rows(side);
    let vertices = meta.complex.vertices_per_side();
    let blocks = (0..vertices)
        .flat_map(|v| {
            local_blocks
                .iter()
                .map(move |lb| lb.iter().map(|&j| v * m_loc + j).collect::<Vec<_>>())
        })
        .collect();
    Grouping::from_blocks(code.pcm(side), side, blocks)
}

/// One block per vertex holding all of its `k_A·k_B` local checks.
pub fn full_grouping(code: &CssCode) -> Result<[Grouping; 2]> {
    let meta = code.qt_meta()?;
    let g = |side: usize| per_vertex_blocks(code, side, &[(0..meta.local_rows(side)).collect()]);
    Ok([g(0)?, g(1)?])
}

/// Combines, at every vertex, the local checks that share one row of a local factor.
///
/// Local rows of `H_A^⊥ ⊗ H_B^⊥` are indexed `p·k_B + q` and those of `H_A ⊗ H_B` are
/// indexed `p·k_A + q`. With axis `A`, side 1 merges the `k_A` rows sharing a row `p` of
/// `H_A` (local code `H_A ⊗ H_B` restricted to one `H_A` row) and side 0 merges the `k_A`
/// rows sharing a row `q` of `H_B^⊥`. Axis `B` is the mirror image with blocks of size `k_B`.
pub fn partial_grouping(code: &CssCode, axis: Axis) -> Result<[Grouping; 2]> {
    let meta = code.qt_meta()?;
    let (ka, kb) = (meta.k_a, meta.k_b);
    // side 0: k_A × k_B grid of (p, q); side 1: k_B × k_A grid.
    let (side0, side1): (Vec<Vec<usize>>, Vec<Vec<usize>>) = match axis {
        Axis::A => (
            (0..kb).map(|q| (0..ka).map(|p| p * kb + q).collect()).collect(),
            (0..kb).map(|p| (0..ka).map(|q| p * ka + q).collect()).collect(),
        ),
        Axis::B => (
            (0..ka).map(|p| (0..kb).map(|q| p * kb + q).collect()).collect(),
            (0..ka).map(|q| (0..kb).map(|p| p * ka + q).collect()).collect(),
        ),
    };
    Ok([per_vertex_blocks(code, 0, &side0)?, per_vertex_blocks(code, 1, &side1)?])
}

/// Block sizes for greedy grouping: as many blocks of `r` as possible, the rest of `r − 1`.
pub fn block_sizes(m: usize, r: usize) -> Result<Vec<usize>> {
    if r == 0 {
        return Err(Error::InvalidParameter("block size r must be at least 1".into()));
    }
    if r == 1 {
        return Ok(vec![1; m]);
    }
    let x = (0..=m / r)
        .rev()
        .find(|&x| (m - x * r) % (r - 1) == 0)
        .ok_or(Error::NoBlockDecomposition { rows: m, r })?;
    let y = (m - x * r) / (r - 1);
    let mut sizes = vec![r; x];
    sizes.extend(std::iter::repeat_n(r - 1, y));
    Ok(sizes)
}

/// Greedy check combining: each block starts at a uniformly random remaining row, then
/// repeatedly adds the remaining row with the largest integer overlap with the OR of
/// the block so far (ties go to the lowest row index).
pub fn greedy_grouping(h: &BinaryMatrix, side: usize, r: usize, seed: u64) -> Result<Grouping> {
    let sizes = block_sizes(h.rows(), r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining: Vec<usize> = (0..h.rows()).collect();
    let mut blocks = Vec::with_capacity(sizes.len());
    for b in sizes {
        let first = remaining.remove(rng.gen_range(0..remaining.len()));
        let mut acc = h.row(first);
        let mut block = vec![first];
        for _ in 1..b {
            let (pos, _) = remaining
                .iter()
                .enumerate()
                .map(|(pos, &row)| (pos, h.row_overlap_with(row, &acc)))
                // max_by_key keeps the last maximum; reverse to keep the first.
                .rev()
                .max_by_key(|&(_, overlap)| overlap)
                .expect("block sizes never exceed the remaining rows");
            let row = remaining.remove(pos);
            acc.or_assign(&h.row(row));
            block.push(row);
        }
        blocks.push(block);
    }
    Grouping::from_blocks(h, side, blocks)
}

/// Runs [`greedy_grouping`] on each side's local matrix once and replicates the pattern
/// across every vertex of that side.
pub fn unstructured_local_grouping(code: &CssCode, r: usize, seed: u64) -> Result<[Grouping; 2]> {
    let meta = code.qt_meta()?;
    let g = |side: usize| -> Result<Grouping> {
        let local = greedy_grouping(&meta.local[side], side, r, seed)?;
        per_vertex_blocks(code, side, &local.blocks)
    };
    Ok([g(0)?, g(1)?])
}

/// On-disk grouping: row-index blocks per side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingFile {
    pub side0: Vec<Vec<usize>>,
    pub side1: Vec<Vec<usize>>,
    /// Free-form description of how the grouping was produced (strategy, seed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
}

impl GroupingFile {
    pub fn from_groupings(g: &[Grouping; 2], origin: Option<String>) -> Self {
        Self {
            side0: g[0].blocks.clone(),
            side1: g[1].blocks.clone(),
            origin,
        }
    }

    pub fn into_groupings(self, code: &CssCode) -> Result<[Grouping; 2]> {
        Ok([
            Grouping::from_blocks(&code.h0, 0, self.side0)?,
            Grouping::from_blocks(&code.h1, 1, self.side1)?,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_hgp, build_quadripartite_qt, GroupTable};

    fn rep2() -> BinaryMatrix {
        BinaryMatrix::from_u8_rows(&[[1, 1]])
    }

    fn z5_toy() -> CssCode {
        build_quadripartite_qt(GroupTable::cyclic(5), vec![1, 4], vec![2, 3], rep2(), rep2()).unwrap()
    }

    /// Δ = 3 with a repetition code (k_A = 1) and a parity check (k_B = 2).
    fn rep_spc_code() -> CssCode {
        build_quadripartite_qt(
            GroupTable::cyclic(12),
            vec![1, 11, 6],
            vec![3, 9, 0],
            BinaryMatrix::from_u8_rows(&[[1, 1, 0], [0, 1, 1]]),
            BinaryMatrix::from_u8_rows(&[[1, 1, 1]]),
        )
        .unwrap()
    }

    #[test]
    fn from_blocks_validates_partition() {
        let h = BinaryMatrix::identity(3);
        assert!(Grouping::from_blocks(&h, 0, vec![vec![0, 1]]).is_err());
        assert!(Grouping::from_blocks(&h, 0, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Grouping::from_blocks(&h, 0, vec![vec![0, 1, 3], vec![2]]).is_err());
        let g = Grouping::from_blocks(&h, 0, vec![vec![2, 0], vec![1]]).unwrap();
        assert_eq!(g.supports, vec![vec![0, 2], vec![1]]);
        assert_eq!(g.local_pcms[0], BinaryMatrix::from_u8_rows(&[[0, 1], [1, 0]]));
        assert_eq!(g.r, 2);
    }

    #[test]
    fn trivial_and_total_quotients() {
        let h = BinaryMatrix::from_u8_rows(&[[1, 1, 0, 0], [0, 1, 1, 0]]);
        let g = Grouping::trivial(&h, 0);
        assert_eq!(quotient_tanner_graph(&h, &g).unwrap(), QuotientTannerGraph::from_matrix(&h));
        let t = Grouping::total(&h, 0).unwrap();
        assert_eq!(quotient_tanner_graph(&h, &t).unwrap().adjacency, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn full_grouping_on_toy_codes() {
        let code = z5_toy();
        let [g0, g1] = full_grouping(&code).unwrap();
        for g in [&g0, &g1] {
            assert_eq!(g.num_blocks(), 10);
            assert!(g.blocks.iter().all(|b| b.len() == 1));
            assert!(g.supports.iter().all(|s| s.len() == 4));
        }
        let code = rep_spc_code();
        let [g0, g1] = full_grouping(&code).unwrap();
        assert_eq!(g0.num_blocks(), 24);
        assert_eq!(g1.num_blocks(), 24);
        assert!(g0.blocks.iter().chain(&g1.blocks).all(|b| b.len() == 2));
        assert!(g0.supports.iter().chain(&g1.supports).all(|s| s.len() == 9));
    }

    #[test]
    fn partial_grouping_sizes_and_nesting() {
        let code = rep_spc_code();
        let full = full_grouping(&code).unwrap();
        for (axis, size) in [(Axis::A, 1), (Axis::B, 2)] {
            let partial = partial_grouping(&code, axis).unwrap();
            for side in 0..2 {
                assert!(partial[side].blocks.iter().all(|b| b.len() == size));
                for b in &partial[side].blocks {
                    let v = b[0] / 2;
                    assert!(full[side].blocks[v].iter().any(|r| b.contains(r)));
                    assert!(b.iter().all(|r| full[side].blocks[v].contains(r)));
                }
            }
        }
        // Side 1, axis B: one H_B row combined with the 2 rows of H_A gives support 3·3.
        let pb = partial_grouping(&code, Axis::B).unwrap();
        assert!(pb[1].supports.iter().all(|s| s.len() == 9));
    }

    #[test]
    fn structured_groupings_need_metadata() {
        let code = build_hgp(&rep2(), &rep2());
        assert!(matches!(full_grouping(&code), Err(Error::MissingMetadata)));
        assert!(matches!(partial_grouping(&code, Axis::A), Err(Error::MissingMetadata)));
    }

    #[test]
    fn block_size_multiset() {
        assert_eq!(block_sizes(5, 2).unwrap(), vec![2, 2, 1]);
        assert_eq!(block_sizes(6, 3).unwrap(), vec![3, 3]);
        assert_eq!(block_sizes(7, 3).unwrap(), vec![3, 2, 2]);
        assert_eq!(block_sizes(3, 1).unwrap(), vec![1, 1, 1]);
        assert!(matches!(block_sizes(1, 3), Err(Error::NoBlockDecomposition { rows: 1, r: 3 })));
        assert!(block_sizes(4, 0).is_err());
    }

    #[test]
    fn greedy_on_orthogonal_rows_breaks_ties_low() {
        let h = BinaryMatrix::identity(4);
        for seed in 0..20 {
            let g = greedy_grouping(&h, 0, 2, seed).unwrap();
            assert_eq!(g.num_blocks(), 2);
            let first = g.blocks[0][0];
            let lowest_other = (0..4).find(|&r| r != first).unwrap();
            assert_eq!(g.blocks[0][1], lowest_other);
        }
    }

    #[test]
    fn greedy_merges_duplicate_rows() {
        let h = BinaryMatrix::from_u8_rows(&[[1, 0, 0, 1], [0, 1, 1, 0], [1, 0, 0, 1], [0, 0, 1, 1]]);
        for seed in 0..50 {
            let g = greedy_grouping(&h, 0, 2, seed).unwrap();
            let starts_dup = g.blocks[0][0] == 0 || g.blocks[0][0] == 2;
            if starts_dup {
                let mut b = g.blocks[0].clone();
                b.sort();
                assert_eq!(b, vec![0, 2]);
            }
        }
    }

    #[test]
    fn greedy_is_deterministic() {
        let code = rep_spc_code();
        let a = greedy_grouping(&code.h1, 1, 3, 7).unwrap();
        let b = greedy_grouping(&code.h1, 1, 3, 7).unwrap();
        assert_eq!(a, b);
        let total: usize = a.blocks.iter().map(Vec::len).sum();
        assert_eq!(total, code.h1.rows());
    }

    #[test]
    fn unstructured_local_replicates_pattern() {
        let code = rep_spc_code();
        let [g0, _] = unstructured_local_grouping(&code, 2, 3).unwrap();
        assert_eq!(g0.num_blocks(), 24);
        let offset = g0.blocks[0][0] % 2;
        assert!(g0.blocks.iter().all(|b| b.len() == 2 && b[0] % 2 == offset));
    }

    #[test]
    fn grouping_file_roundtrip() {
        let code = z5_toy();
        let groups = full_grouping(&code).unwrap();
        let file = GroupingFile::from_groupings(&groups, Some("full".into()));
        let text = serde_json::to_string(&file).unwrap();
        let back: GroupingFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_groupings(&code).unwrap(), groups);
    }
}
