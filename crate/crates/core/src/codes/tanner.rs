//! Quadripartite left-right Cayley complexes and the quantum Tanner codes built on them.
//!
//! Qubits sit on squares `(g, a, b)` with corners `(g,00)`, `(ag,01)`, `(gb,10)`,
//! `(agb,11)`. Square `(g, a_i, b_j)` is column `g·Δ² + i·Δ + j`. Each corner sees
//! the square under a local label: `(a, b)` at `00`, `(a⁻¹, b)` at `01`,
//! `(a, b⁻¹)` at `10` and `(a⁻¹, b⁻¹)` at `11`; the label `(a_i, b_j)` is local
//! column `i·Δ + j` of the vertex's local parity-check matrix.
//!
//! Checks of `H0` live on `V0 = V00 ⊔ V11` with local matrix `H_A^⊥ ⊗ H_B^⊥`, checks
//! of `H1` on `V1 = V01 ⊔ V10` with local matrix `H_A ⊗ H_B`. Rows are vertex-major:
//! vertex `v` of side `i` owns rows `v·m_loc .. (v+1)·m_loc`, where side-0 vertices are
//! ordered `(g,00)` for all `g` then `(g,11)`, and side-1 vertices `(g,01)` then `(g,10)`.

use serde::Serialize;

use super::group::GroupTable;
use super::{dual_pcm, ClassicalCode, CodeMeta, CssCode};
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Corner {
    C00,
    C01,
    C10,
    C11,
}

impl Corner {
    /// Which check side (0 for X-type, 1 for Z-type) the corner's vertices belong to.
    pub fn side(self) -> usize {
        match self {
            Corner::C00 | Corner::C11 => 0,
            Corner::C01 | Corner::C10 => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub corner: Corner,
    pub g: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Square {
    pub g: usize,
    /// Index into the `A` list.
    pub a: usize,
    /// Index into the `B` list.
    pub b: usize,
}

/// Identity of an edge of the complex. `A`-edges join `(h, i0)` to `(a·h, i1)`,
/// `B`-edges join `(h, 0j)` to `(h·b, 1j)`; generator positions are list indices so
/// repeated generators give distinct (parallel) edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKey {
    A { from: usize, gen: usize, layer: u8 },
    B { from: usize, gen: usize, layer: u8 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareComplex {
    #[serde(skip)]
    group: GroupTable,
    a: Vec<usize>,
    b: Vec<usize>,
    #[serde(skip)]
    a_inv: Vec<usize>,
    #[serde(skip)]
    b_inv: Vec<usize>,
    delta: usize,
}

/// Pairs each position of `set` with a position holding the inverse element,
/// as an involution on positions; `None` if the multiset is not inverse-closed.
fn inverse_pairing(group: &GroupTable, set: &[usize]) -> std::result::Result<Vec<usize>, usize> {
    let mut pair = vec![usize::MAX; set.len()];
    for i in 0..set.len() {
        if pair[i] != usize::MAX {
            continue;
        }
        let target = group.inv(set[i]);
        let j = (i..set.len())
            .find(|&j| pair[j] == usize::MAX && set[j] == target)
            .ok_or(set[i])?;
        pair[i] = j;
        pair[j] = i;
    }
    Ok(pair)
}

impl SquareComplex {
    pub fn new(group: GroupTable, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidConstruction(format!(
                "|A| = {} differs from |B| = {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_empty() {
            return Err(Error::InvalidConstruction("empty generator sets".into()));
        }
        for &x in a.iter().chain(&b) {
            if x >= group.order() {
                return Err(Error::InvalidConstruction(format!(
                    "generator {x} is not an element of a group of order {}",
                    group.order()
                )));
            }
        }
        let a_inv = inverse_pairing(&group, &a)
            .map_err(|element| Error::NotInverseClosed { set: 'A', element })?;
        let b_inv = inverse_pairing(&group, &b)
            .map_err(|element| Error::NotInverseClosed { set: 'B', element })?;
        let delta = a.len();
        Ok(Self {
            group,
            a,
            b,
            a_inv,
            b_inv,
            delta,
        })
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Position of the inverse of `A[i]` under the fixed inverse pairing.
    pub fn a_inv_pos(&self, i: usize) -> usize {
        self.a_inv[i]
    }

    pub fn b_inv_pos(&self, j: usize) -> usize {
        self.b_inv[j]
    }

    pub fn num_squares(&self) -> usize {
        self.group.order() * self.delta * self.delta
    }

    /// Vertices per side, `|V_i| = 2|G|`.
    pub fn vertices_per_side(&self) -> usize {
        2 * self.group.order()
    }

    pub fn square_index(&self, sq: Square) -> usize {
        (sq.g * self.delta + sq.a) * self.delta + sq.b
    }

    pub fn square(&self, idx: usize) -> Square {
        let d2 = self.delta * self.delta;
        Square {
            g: idx / d2,
            a: (idx % d2) / self.delta,
            b: idx % self.delta,
        }
    }

    /// Corners of a square in the order `00, 01, 10, 11`.
    pub fn corners(&self, idx: usize) -> [Vertex; 4] {
        let Square { g, a, b } = self.square(idx);
        let grp = &self.group;
        let (a, b) = (self.a[a], self.b[b]);
        [
            Vertex { corner: Corner::C00, g },
            Vertex { corner: Corner::C01, g: grp.mul(a, g) },
            Vertex { corner: Corner::C10, g: grp.mul(g, b) },
            Vertex { corner: Corner::C11, g: grp.mul3(a, g, b) },
        ]
    }

    /// The four edges of a square as `(endpoint, endpoint, key)`.
    pub fn edges(&self, idx: usize) -> [(Vertex, Vertex, EdgeKey); 4] {
        let sq = self.square(idx);
        let [v00, v01, v10, v11] = self.corners(idx);
        [
            (v00, v01, EdgeKey::A { from: v00.g, gen: sq.a, layer: 0 }),
            (v10, v11, EdgeKey::A { from: v10.g, gen: sq.a, layer: 1 }),
            (v00, v10, EdgeKey::B { from: v00.g, gen: sq.b, layer: 0 }),
            (v01, v11, EdgeKey::B { from: v01.g, gen: sq.b, layer: 1 }),
        ]
    }

    /// Local column of square `idx` in the local view of its corner `corner`.
    pub fn local_column(&self, idx: usize, corner: Corner) -> usize {
        let Square { a, b, .. } = self.square(idx);
        let (la, lb) = match corner {
            Corner::C00 => (a, b),
            Corner::C01 => (self.a_inv[a], b),
            Corner::C10 => (a, self.b_inv[b]),
            Corner::C11 => (self.a_inv[a], self.b_inv[b]),
        };
        la * self.delta + lb
    }

    /// Index of a vertex among the `2|G|` vertices of its side.
    pub fn side_index(&self, v: Vertex) -> usize {
        let m = self.group.order();
        match v.corner {
            Corner::C00 | Corner::C01 => v.g,
            Corner::C11 | Corner::C10 => m + v.g,
        }
    }

    pub fn side_vertex(&self, side: usize, idx: usize) -> Vertex {
        let m = self.group.order();
        let corner = match (side, idx < m) {
            (0, true) => Corner::C00,
            (0, false) => Corner::C11,
            (_, true) => Corner::C01,
            (_, false) => Corner::C10,
        };
        Vertex { corner, g: idx % m }
    }

    /// Squares around `v`, indexed by local column.
    pub fn local_view(&self, v: Vertex) -> Vec<usize> {
        let grp = &self.group;
        let d = self.delta;
        let mut view = vec![usize::MAX; d * d];
        for ia in 0..d {
            for ib in 0..d {
                let (a, b) = (self.a[ia], self.b[ib]);
                let g = match v.corner {
                    Corner::C00 => v.g,
                    Corner::C01 => grp.mul(grp.inv(a), v.g),
                    Corner::C10 => grp.mul(v.g, grp.inv(b)),
                    Corner::C11 => grp.mul3(grp.inv(a), v.g, grp.inv(b)),
                };
                let idx = self.square_index(Square { g, a: ia, b: ib });
                view[self.local_column(idx, v.corner)] = idx;
            }
        }
        debug_assert!(view.iter().all(|&s| s != usize::MAX));
        view
    }
}

/// Construction record of a quadripartite quantum Tanner code.
#[derive(Clone, Debug)]
pub struct QtMeta {
    pub complex: SquareComplex,
    pub h_a: BinaryMatrix,
    pub h_b: BinaryMatrix,
    pub h_a_dual: BinaryMatrix,
    pub h_b_dual: BinaryMatrix,
    pub k_a: usize,
    pub k_b: usize,
    /// Local parity-check matrices `[H_A^⊥ ⊗ H_B^⊥, H_A ⊗ H_B]` for sides 0 and 1.
    pub local: [BinaryMatrix; 2],
    /// Per side, per vertex (in row order), the squares indexed by local column.
    pub views: [Vec<Vec<usize>>; 2],
}

impl QtMeta {
    /// Rows of the local matrix on `side`; each vertex owns this many consecutive rows.
    pub fn local_rows(&self, side: usize) -> usize {
        self.local[side].rows()
    }
}

/// Builds the quadripartite quantum Tanner code on `(G, A, B, C_A, C_B)`.
pub fn build_quadripartite_qt(
    group: GroupTable,
    a: Vec<usize>,
    b: Vec<usize>,
    h_a: BinaryMatrix,
    h_b: BinaryMatrix,
) -> Result<CssCode> {
    let complex = SquareComplex::new(group, a, b)?;
    let delta = complex.delta();
    if h_a.cols() != delta || h_b.cols() != delta {
        return Err(Error::InvalidConstruction(format!(
            "local codes have lengths {} and {}, expected Δ = {delta}",
            h_a.cols(),
            h_b.cols()
        )));
    }
    let code_a = ClassicalCode::new(h_a.clone());
    let code_b = ClassicalCode::new(h_b.clone());
    if code_a.k + code_b.k != delta {
        return Err(Error::InvalidConstruction(format!(
            "k_A + k_B = {} + {} must equal Δ = {delta}",
            code_a.k, code_b.k
        )));
    }
    let h_a_dual = dual_pcm(&code_a);
    let h_b_dual = dual_pcm(&code_b);
    let local = [h_a_dual.kron(&h_b_dual), h_a.kron(&h_b)];

    let n = complex.num_squares();
    let per_side = complex.vertices_per_side();
    let mut views: [Vec<Vec<usize>>; 2] = [Vec::new(), Vec::new()];
    let mut pcms = Vec::with_capacity(2);
    for side in 0..2 {
        let loc = &local[side];
        let mut h = BinaryMatrix::zeros(per_side * loc.rows(), n);
        for vi in 0..per_side {
            let view = complex.local_view(complex.side_vertex(side, vi));
            for r in 0..loc.rows() {
                for col in loc.row(r).ones() {
                    h.set(vi * loc.rows() + r, view[col], true);
                }
            }
            views[side].push(view);
        }
        pcms.push(h);
    }
    let h1 = pcms.pop().expect("two sides");
    let h0 = pcms.pop().expect("two sides");
    let mut code = CssCode::from_pcms(h0, h1)?;
    code.meta = CodeMeta::Qt(Box::new(QtMeta {
        complex,
        k_a: code_a.k,
        k_b: code_b.k,
        h_a,
        h_b,
        h_a_dual,
        h_b_dual,
        local,
        views,
    }));
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep2() -> BinaryMatrix {
        BinaryMatrix::from_u8_rows(&[[1, 1]])
    }

    #[test]
    fn z2_toy_code() {
        let code = build_quadripartite_qt(GroupTable::cyclic(2), vec![0, 1], vec![0, 1], rep2(), rep2())
            .unwrap();
        assert_eq!(code.n, 8);
        assert!(code.h0.mul(&code.h1.transpose()).unwrap().is_zero());
        assert_eq!(code.k, 8 - code.h0.rank() - code.h1.rank());
    }

    #[test]
    fn z5_toy_code() {
        let code = build_quadripartite_qt(GroupTable::cyclic(5), vec![1, 4], vec![2, 3], rep2(), rep2())
            .unwrap();
        assert_eq!(code.n, 20);
        assert_eq!(code.h0.rows(), 10);
        assert_eq!(code.h1.rows(), 10);
        // k >= |G|(Δ² − 4 k_A k_B) = 0
        assert_eq!(code.k, 20 - code.h0.rank() - code.h1.rank());
        for r in 0..code.h0.rows() {
            assert_eq!(code.h0.row_weight(r), 4);
        }
    }

    #[test]
    fn local_views_are_bijective() {
        let cx = SquareComplex::new(GroupTable::dihedral(3), vec![1, 2, 3], vec![4, 5, 2 + 2]).unwrap();
        for side in 0..2 {
            let mut seen = vec![0usize; cx.num_squares()];
            for vi in 0..cx.vertices_per_side() {
                let v = cx.side_vertex(side, vi);
                let view = cx.local_view(v);
                for (col, &sq) in view.iter().enumerate() {
                    assert_eq!(cx.local_column(sq, v.corner), col);
                    assert!(cx.corners(sq).contains(&v));
                    seen[sq] += 1;
                }
            }
            // every square has exactly two corners on each side
            assert!(seen.iter().all(|&c| c == 2));
        }
    }

    #[test]
    fn rejects_bad_generator_sets() {
        let g = GroupTable::cyclic(5);
        let err = build_quadripartite_qt(g.clone(), vec![1, 2], vec![2, 3], rep2(), rep2()).unwrap_err();
        assert!(matches!(err, Error::NotInverseClosed { set: 'A', element: 1 }));
        let err = build_quadripartite_qt(g.clone(), vec![1, 4], vec![2, 3, 0], rep2(), rep2()).unwrap_err();
        assert!(matches!(err, Error::InvalidConstruction(_)));
        let spc3 = BinaryMatrix::from_u8_rows(&[[1, 1, 1]]);
        let err = build_quadripartite_qt(g, vec![1, 4], vec![2, 3], rep2(), spc3).unwrap_err();
        assert!(matches!(err, Error::InvalidConstruction(_)));
        let i2 = BinaryMatrix::identity(2);
        let err =
            build_quadripartite_qt(GroupTable::cyclic(5), vec![1, 4], vec![2, 3], i2, rep2()).unwrap_err();
        assert!(matches!(err, Error::InvalidConstruction(_)));
    }
}
