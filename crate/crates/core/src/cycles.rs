//! 4-cycle counting, girth, the 2-TNC condition and the quantum Tanner cycle census.
//!
//! A 4-cycle is an unordered pair of variable nodes sharing an unordered pair of check
//! nodes, so a pair of checks overlapping in `w` variables contributes `C(w, 2)`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::codes::{CssCode, EdgeKey, GroupTable, Vertex};
use crate::error::Result;
use crate::gf2::{BinaryMatrix, BitVec};
use crate::grouping::{full_grouping, QuotientTannerGraph};

fn choose2(w: u64) -> u64 {
    w * w.saturating_sub(1) / 2
}

fn count_from_rows(rows: &[BitVec]) -> u64 {
    let mut total = 0;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            total += choose2(rows[i].and_count(&rows[j]) as u64);
        }
    }
    total
}

/// 4-cycles of the Tanner graph of `h`.
pub fn count_4cycles_matrix(h: &BinaryMatrix) -> u64 {
    let rows: Vec<BitVec> = (0..h.rows()).map(|r| h.row(r)).collect();
    count_from_rows(&rows)
}

/// 4-cycles of a (quotient) Tanner graph.
pub fn count_4cycles(g: &QuotientTannerGraph) -> u64 {
    let rows: Vec<BitVec> = g
        .adjacency
        .iter()
        .map(|adj| BitVec::from_ones(g.num_vars, adj))
        .collect();
    count_from_rows(&rows)
}

/// Shortest cycle of a multigraph given as an edge list; parallel edges are 2-cycles.
/// `None` for forests.
pub fn girth_of_edges(num_vertices: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_vertices];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; num_vertices];
    let mut parent_edge = vec![usize::MAX; num_vertices];
    let mut queue = VecDeque::new();
    for root in 0..num_vertices {
        dist.fill(usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            // Any cycle found from here is at least 2·dist[u] + 1 long.
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &(w, id) in &adj[u] {
                if id == parent_edge[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = id;
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        parent_edge[root] = usize::MAX;
    }
    best
}

/// Girth of a bipartite check/variable graph (checks are vertices `0..m`, variables follow).
pub fn girth(g: &QuotientTannerGraph) -> Option<usize> {
    let m = g.num_checks();
    let edges: Vec<(usize, usize)> = g
        .adjacency
        .iter()
        .enumerate()
        .flat_map(|(c, adj)| adj.iter().map(move |&v| (c, m + v)))
        .collect();
    girth_of_edges(m + g.num_vars, &edges)
}

/// Pair `(a, b) ≠ (a′, b′)` of generator positions with `a·g·b = a′·g·b′`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TncWitness {
    pub g: usize,
    pub a: usize,
    pub b: usize,
    pub a_prime: usize,
    pub b_prime: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TncVerdict {
    pub holds: bool,
    pub witness: Option<TncWitness>,
}

/// Checks the 2-step total no-conjugacy condition. Generators are compared by list
/// position, so a repeated generator is always a violation.
pub fn check_2tnc(group: &GroupTable, a: &[usize], b: &[usize]) -> TncVerdict {
    let mut first_pair: HashMap<usize, (usize, usize)> = HashMap::new();
    for g in 0..group.order() {
        first_pair.clear();
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let x = group.mul3(ai, g, bj);
                if let Some(&(i0, j0)) = first_pair.get(&x) {
                    return TncVerdict {
                        holds: false,
                        witness: Some(TncWitness {
                            g,
                            a: a[i0],
                            b: b[j0],
                            a_prime: ai,
                            b_prime: bj,
                        }),
                    };
                }
                first_pair.insert(x, (i, j));
            }
        }
    }
    TncVerdict {
        holds: true,
        witness: None,
    }
}

/// 4-cycle counts per class of the combined square graph: parallel edges of the
/// same-side graphs, parallel edges of the complex, and squares sharing an edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub parallel_same_side: u64,
    pub parallel_complex: u64,
    pub shared_edge: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusLevel {
    /// One generalized check per vertex of the complex.
    Full,
    /// Every local check on its own.
    Ungrouped,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SideCensus {
    /// Same-type 4-cycles of this side's graph.
    pub total: u64,
    /// Cycles inside single local views (`t·|V_i|`); zero at the full level.
    pub local: u64,
    /// Cycles through parallel edges of this side's square graph.
    pub parallel: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub level: CensusLevel,
    pub sides: [SideCensus; 2],
    /// Cycles between an X-check and a Z-check on the joint graph.
    pub cross: u64,
    pub total_4cycles: u64,
    pub by_class: ClassCounts,
    /// Girth of each side's graph at this level.
    pub girth: [Option<usize>; 2],
}

/// Column inner products of a local matrix, indexed `[i·cols + j]`.
fn column_overlaps(l: &BinaryMatrix) -> Vec<u64> {
    let t = l.transpose();
    let cols: Vec<BitVec> = (0..t.rows()).map(|c| t.row(c)).collect();
    let n = cols.len();
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = cols[i].and_count(&cols[j]) as u64;
        }
    }
    out
}

/// Classifies the 4-cycles of a quantum Tanner code, either on the fully grouped
/// square graph or on the ungrouped Tanner graphs of `H0`, `H1` and their union.
pub fn qt_cycle_census(code: &CssCode, level: CensusLevel) -> Result<CycleCensus> {
    let meta = code.qt_meta()?;
    let cx = &meta.complex;
    let per_side = cx.vertices_per_side();
    let global = |v: Vertex| v.corner.side() * per_side + cx.side_index(v);

    // Every pair of vertices sharing a square, with the squares and (for cross pairs)
    // the complex edge through which the square joins them.
    let mut pairs: HashMap<(usize, usize), Vec<(usize, Option<EdgeKey>)>> = HashMap::new();
    let mut add = |u: usize, w: usize, sq: usize, key: Option<EdgeKey>| {
        pairs.entry((u.min(w), u.max(w))).or_default().push((sq, key));
    };
    for sq in 0..cx.num_squares() {
        let [v00, v01, v10, v11] = cx.corners(sq);
        add(global(v00), global(v11), sq, None);
        add(global(v01), global(v10), sq, None);
        for (u, w, key) in cx.edges(sq) {
            add(global(u), global(w), sq, Some(key));
        }
    }

    let overlaps = [column_overlaps(&meta.local[0]), column_overlaps(&meta.local[1])];
    let d2 = cx.delta() * cx.delta();
    // Number of 4-cycles through squares p, q at the two shared vertices u, w.
    let weight = |u: usize, w: usize, p: usize, q: usize| -> u64 {
        match level {
            CensusLevel::Full => 1,
            CensusLevel::Ungrouped => [u, w]
                .iter()
                .map(|&x| {
                    let side = x / per_side;
                    let v = cx.side_vertex(side, x % per_side);
                    let (cp, cq) = (cx.local_column(p, v.corner), cx.local_column(q, v.corner));
                    overlaps[side][cp * d2 + cq]
                })
                .product(),
        }
    };

    let mut sides = [SideCensus::default(); 2];
    let mut classes = ClassCounts::default();
    for (&(u, w), squares) in &pairs {
        let (su, sw) = (u / per_side, w / per_side);
        for i in 0..squares.len() {
            for j in i + 1..squares.len() {
                let (p, kp) = squares[i];
                let (q, kq) = squares[j];
                let c = weight(u, w, p, q);
                if su == sw {
                    sides[su].parallel += c;
                    classes.parallel_same_side += c;
                } else if kp == kq {
                    classes.shared_edge += c;
                } else {
                    classes.parallel_complex += c;
                }
            }
        }
    }

    let mut girth = [None, None];
    match level {
        CensusLevel::Full => {
            let groups = full_grouping(code)?;
            for side in 0..2 {
                girth[side] = self::girth(&groups[side].quotient_graph(code.n));
            }
        }
        CensusLevel::Ungrouped => {
            for side in 0..2 {
                sides[side].local = count_4cycles_matrix(&meta.local[side]) * per_side as u64;
                girth[side] = self::girth(&QuotientTannerGraph::from_matrix(code.pcm(side)));
            }
        }
    }
    for s in &mut sides {
        s.total = s.local + s.parallel;
    }
    let cross = classes.parallel_complex + classes.shared_edge;
    Ok(CycleCensus {
        level,
        sides,
        cross,
        total_4cycles: sides[0].total + sides[1].total + cross,
        by_class: classes,
        girth,
    })
}

/// Same-type 4-cycles of the hypergraph product of `a` and `b`:
/// `(t_a·n_b + t_b·m_a, t_b·n_a + t_a·m_b)`.
pub fn hgp_cycle_count(a: &BinaryMatrix, b: &BinaryMatrix) -> (u64, u64) {
    let (ta, tb) = (count_4cycles_matrix(a), count_4cycles_matrix(b));
    let (ma, na) = (a.rows() as u64, a.cols() as u64);
    let (mb, nb) = (b.rows() as u64, b.cols() as u64);
    (ta * nb + tb * ma, tb * na + ta * mb)
}
