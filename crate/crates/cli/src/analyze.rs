//! Structural report: cycle census, girth, 2-TNC verdict and trellis statistics.

use anyhow::Result;
use qldpc_core::cycles::{check_2tnc, count_4cycles, girth, qt_cycle_census, CensusLevel, CycleCensus, TncVerdict};
use qldpc_core::trellis::edge_count_bound;
use qldpc_core::{CssCode, Grouping, Trellis};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct RowWeights {
    pub rows: usize,
    pub avg: f64,
    pub min: usize,
    pub max: usize,
}

impl RowWeights {
    pub fn of(weights: &[usize]) -> Self {
        let rows = weights.len();
        Self {
            rows,
            avg: if rows == 0 { 0.0 } else { weights.iter().sum::<usize>() as f64 / rows as f64 },
            min: weights.iter().copied().min().unwrap_or(0),
            max: weights.iter().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeSummary {
    pub name: Option<String>,
    pub n: usize,
    pub k: usize,
    pub row_weight: [RowWeights; 2],
    pub row_weight_all: RowWeights,
}

impl CodeSummary {
    pub fn new(code: &CssCode, name: Option<String>) -> Self {
        let w = |side: usize| -> Vec<usize> {
            let h = code.pcm(side);
            (0..h.rows()).map(|r| h.row_weight(r)).collect()
        };
        let (w0, w1) = (w(0), w(1));
        let all: Vec<usize> = w0.iter().chain(&w1).copied().collect();
        Self {
            name,
            n: code.n,
            k: code.k,
            row_weight: [RowWeights::of(&w0), RowWeights::of(&w1)],
            row_weight_all: RowWeights::of(&all),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockStats {
    pub rows: usize,
    pub n_c: usize,
    pub k_c: usize,
    /// Edges of the minimal trellis; `None` when it could not be built.
    pub trellis_edges: Option<usize>,
    pub max_width: Option<usize>,
    /// Bound at the block code's dimension `k_c`.
    pub bound: u64,
    /// Bound evaluated at the dual dimension `n_c − k_c` (the tabulated convention).
    pub bound_dual: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideReport {
    pub num_blocks: usize,
    pub r: usize,
    pub avg_n_c: f64,
    pub avg_trellis_edges: Option<f64>,
    pub avg_bound: f64,
    pub avg_bound_dual: f64,
    pub four_cycles: u64,
    pub girth: Option<usize>,
    pub blocks: Vec<BlockStats>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub ungrouped: CycleCensus,
    pub full: CycleCensus,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub code: CodeSummary,
    pub grouping: String,
    pub sides: [SideReport; 2],
    /// 4-cycles of the joint quotient graph (both check types).
    pub four_cycles: u64,
    pub girth: Option<usize>,
    pub tnc: Option<TncVerdict>,
    pub census: Option<Census>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0, 0usize);
    for x in xs {
        s += x;
        c += 1;
    }
    if c == 0 {
        0.0
    } else {
        s / c as f64
    }
}

fn side_report(code: &CssCode, g: &Grouping) -> SideReport {
    let blocks: Vec<BlockStats> = (0..g.num_blocks())
        .map(|c| {
            let (n_c, k_c) = (g.n_c(c), g.k_c(c));
            let trellis = Trellis::new(&g.local_pcms[c]).ok();
            BlockStats {
                rows: g.blocks[c].len(),
                n_c,
                k_c,
                trellis_edges: trellis.as_ref().map(Trellis::num_edges),
                max_width: trellis.as_ref().map(Trellis::max_width),
                bound: edge_count_bound(n_c, k_c),
                bound_dual: edge_count_bound(n_c, n_c - k_c),
            }
        })
        .collect();
    let qg = g.quotient_graph(code.n);
    let all_built = blocks.iter().all(|b| b.trellis_edges.is_some());
    SideReport {
        num_blocks: g.num_blocks(),
        r: g.r,
        avg_n_c: mean(blocks.iter().map(|b| b.n_c as f64)),
        avg_trellis_edges: all_built.then(|| mean(blocks.iter().map(|b| b.trellis_edges.unwrap() as f64))),
        avg_bound: mean(blocks.iter().map(|b| b.bound as f64)),
        avg_bound_dual: mean(blocks.iter().map(|b| b.bound_dual as f64)),
        four_cycles: count_4cycles(&qg),
        girth: girth(&qg),
        blocks,
    }
}

pub fn analyze(code: &CssCode, name: Option<String>, groupings: &[Grouping; 2], label: &str) -> Result<AnalysisReport> {
    let joint = groupings[0].quotient_graph(code.n).union(&groupings[1].quotient_graph(code.n));
    let (tnc, census) = match code.qt_meta() {
        Ok(meta) => {
            let cx = &meta.complex;
            let tnc = check_2tnc(cx.group(), cx.a(), cx.b());
            let census = Census {
                ungrouped: qt_cycle_census(code, CensusLevel::Ungrouped)?,
                full: qt_cycle_census(code, CensusLevel::Full)?,
            };
            (Some(tnc), Some(census))
        }
        Err(_) => (None, None),
    };
    Ok(AnalysisReport {
        code: CodeSummary::new(code, name),
        grouping: label.to_owned(),
        sides: [side_report(code, &groupings[0]), side_report(code, &groupings[1])],
        four_cycles: count_4cycles(&joint),
        girth: girth(&joint),
        tnc,
        census,
    })
}
