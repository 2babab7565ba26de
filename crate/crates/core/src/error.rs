use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index ({row}, {col}) out of bounds for {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("X-check {x_row} and Z-check {z_row} anticommute (H0·H1ᵀ ≠ 0)")]
    NotOrthogonal { x_row: usize, z_row: usize },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("generator set {set} is not inverse-closed: element {element} has no matching inverse")]
    NotInverseClosed { set: char, element: usize },

    #[error("invalid code construction: {0}")]
    InvalidConstruction(String),

    #[error("blocks ({a_row}, {a_col}) of A and ({b_row}, {b_col}) of B do not commute")]
    NonCommutingBlocks {
        a_row: usize,
        a_col: usize,
        b_row: usize,
        b_col: usize,
    },

    #[error("code has no quantum Tanner metadata")]
    MissingMetadata,

    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),

    #[error("no block-size decomposition of {rows} rows into sizes {r} and {r_minus}", r_minus = .r - 1)]
    NoBlockDecomposition { rows: usize, r: usize },

    #[error("local check matrix has an all-zero column at position {0}")]
    ZeroColumn(usize),

    #[error("local check has rank {0}, more than the supported 64 trellis syndrome bits")]
    TrellisTooWide(usize),

    #[error("syndrome is inconsistent with the parity-check matrix")]
    InconsistentSyndrome,

    #[error("exhaustive search limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
