use std::fmt;

use super::bitvec::{words_for, BitVec, WORD_BITS};
use crate::error::{Error, Result};

/// Dense bit-packed matrix over GF(2), row-major with one word-aligned stride per row.
///
/// Padding bits beyond `cols` are kept zero so popcount inner products are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: BinaryMatrix,
    /// `pivots[i]` is the pivot column of row `i` of `reduced`; rows past `pivots.len()` are zero.
    pub pivots: Vec<usize>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Builds a matrix from 0/1 byte rows. Panics on ragged input.
    pub fn from_u8_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let bitrows: Vec<BitVec> = rows.iter().map(|r| BitVec::from_u8s(r.as_ref())).collect();
        Self::from_rows(cols, &bitrows).expect("ragged rows")
    }

    /// Parses the dense ASCII grid format: one row per line, `0`/`1` characters,
    /// column 0 leftmost. Blank lines and `#` comments are skipped.
    pub fn parse_dense(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut cols = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = BitVec::zeros(0);
            for ch in line.chars().filter(|c| !c.is_whitespace()) {
                match ch {
                    '0' => row.push(false),
                    '1' => row.push(true),
                    other => {
                        return Err(Error::Parse(format!(
                            "line {}: unexpected character {other:?}",
                            ln + 1
                        )))
                    }
                }
            }
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Error::Parse(format!(
                        "line {}: row length {} differs from {c}",
                        ln + 1,
                        row.len()
                    )))
                }
                _ => {}
            }
            rows.push(row);
        }
        Self::from_rows(cols.unwrap_or(0), &rows)
    }

    pub fn to_dense_string(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// `l`×`l` circulant whose row `i` is `coefficients` cyclically shifted right by `i`.
    pub fn circulant(coefficients: &BitVec) -> Self {
        let l = coefficients.len();
        let mut m = Self::zeros(l, l);
        for i in 0..l {
            for j in coefficients.ones() {
                m.set(i, (i + j) % l, true);
            }
        }
        m
    }

    /// Circulant of the polynomial `sum x^e` over `exponents`, reduced mod `x^l - 1`.
    pub fn circulant_from_exponents(l: usize, exponents: &[usize]) -> Self {
        let mut coeffs = BitVec::zeros(l);
        for &e in exponents {
            coeffs.flip(e % l);
        }
        Self::circulant(&coeffs)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    fn check_bounds(&self, r: usize, c: usize) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.check_bounds(r, c);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn try_get(&self, r: usize, c: usize) -> Result<bool> {
        if r < self.rows && c < self.cols {
            Ok(self.get(r, c))
        } else {
            Err(Error::IndexOutOfBounds {
                row: r,
                col: c,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.check_bounds(r, c);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.check_bounds(r, c);
        self.data[r * self.stride + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        assert!(r < self.rows, "row {r} out of bounds for {} rows", self.rows);
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        assert!(r < self.rows, "row {r} out of bounds for {} rows", self.rows);
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn col(&self, c: usize) -> BitVec {
        BitVec::from_bits((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).ones().collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Integer (not GF(2)) inner product of rows `i` and `j`.
    pub fn row_overlap(&self, i: usize, j: usize) -> usize {
        self.row_words(i)
            .iter()
            .zip(self.row_words(j))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Integer inner product of row `r` with an arbitrary vector.
    pub fn row_overlap_with(&self, r: usize, v: &BitVec) -> usize {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.row_words(r)
            .iter()
            .zip(v.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert!(src != dst);
        let stride = self.stride;
        let (s, d) = (src * stride, dst * stride);
        for k in 0..stride {
            let w = self.data[s + k];
            self.data[d + k] ^= w;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// GF(2) product `self · other`.
    pub fn mul(&self, other: &BinaryMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row(r).ones() {
                let (src, stride) = (k * other.stride, other.stride);
                let dst = r * out.stride;
                for w in 0..stride {
                    out.data[dst + w] ^= other.data[src + w];
                }
            }
        }
        Ok(out)
    }

    /// `self · vᵀ` over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(BitVec::from_bits(
            (0..self.rows).map(|r| self.row_overlap_with(r, v) % 2 == 1),
        ))
    }

    pub fn hstack(&self, other: &BinaryMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                out.set(r, c, true);
            }
            for c in other.row(r).ones() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &BinaryMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Block-diagonal `[self 0; 0 other]`.
    pub fn block_diag(&self, other: &BinaryMatrix) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                out.set(r, c, true);
            }
        }
        for r in 0..other.rows {
            for c in other.row(r).ones() {
                out.set(self.rows + r, self.cols + c, true);
            }
        }
        out
    }

    /// Kronecker product: entry `((i,k),(j,l))` is `self[i,j] · other[k,l]`.
    pub fn kron(&self, other: &BinaryMatrix) -> Self {
        let (mb, nb) = other.shape();
        let mut out = Self::zeros(self.rows * mb, self.cols * nb);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                for k in 0..mb {
                    for l in other.row(k).ones() {
                        out.set(i * mb + k, j * nb + l, true);
                    }
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    /// Sub-block `[r0, r0+h) × [c0, c0+w)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let rows: Vec<usize> = (r0..r0 + h).collect();
        let cols: Vec<usize> = (c0..c0 + w).collect();
        self.select_rows(&rows).select_cols(&cols)
    }

    /// Writes `src` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, src: &BinaryMatrix) {
        for r in 0..src.rows {
            for c in src.row(r).ones() {
                self.set(r0 + r, c0 + c, true);
            }
        }
    }

    /// Reduced row-echelon form, pivoting leftmost-first with row swaps.
    pub fn echelon(&self) -> Echelon {
        self.echelon_limited(self.cols)
    }

    /// Row reduction that only pivots on the first `pivot_cols` columns; the
    /// remaining columns are carried along (used for augmented systems).
    pub(crate) fn echelon_limited(&self, pivot_cols: usize) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..pivot_cols {
            if row == m.rows {
                break;
            }
            let (wi, bit) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
            let Some(p) = (row..m.rows).find(|&r| m.data[r * m.stride + wi] & bit != 0) else {
                continue;
            };
            m.swap_rows(p, row);
            for r in 0..m.rows {
                if r != row && m.data[r * m.stride + wi] & bit != 0 {
                    m.xor_row_into(row, r);
                }
            }
            pivots.push(c);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; cheaper than full reduction.
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let (wi, bit) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
            let Some(p) = (rank..m.rows).find(|&r| m.data[r * m.stride + wi] & bit != 0) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in rank + 1..m.rows {
                if m.data[r * m.stride + wi] & bit != 0 {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// True iff `v` is a GF(2) combination of the rows of `self`.
    pub fn rowspace_contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let extended = self.vstack(&Self::from_rows(self.cols, std::slice::from_ref(v))?)?;
        Ok(extended.rank() == self.rank())
    }

    /// Some `u` with `self · uᵀ = s`, or `None` when the system is inconsistent.
    pub fn solve(&self, s: &BitVec) -> Result<Option<BitVec>> {
        if s.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {} against {} rows",
                s.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                aug.set(r, c, true);
            }
            if s.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let ech = aug.echelon_limited(self.cols);
        let rank = ech.pivots.len();
        if (rank..self.rows).any(|r| ech.reduced.get(r, self.cols)) {
            return Ok(None);
        }
        let mut u = BitVec::zeros(self.cols);
        for (i, &p) in ech.pivots.iter().enumerate() {
            if ech.reduced.get(i, self.cols) {
                u.set(p, true);
            }
        }
        Ok(Some(u))
    }

    /// Basis of `{x : self · xᵀ = 0}` as the rows of a matrix in reduced row-echelon form.
    pub fn kernel(&self) -> Self {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(f, true);
            for (i, &p) in ech.pivots.iter().enumerate() {
                if ech.reduced.get(i, f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        let k = Self::from_rows(self.cols, &basis).expect("kernel rows have matching length");
        let ech = k.echelon();
        ech.reduced.select_rows(&(0..ech.pivots.len()).collect::<Vec<_>>())
    }

    /// Indices of a maximal set of linearly independent rows, chosen greedily in row order.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut kept = Vec::new();
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot bit, reduced row)
        for r in 0..self.rows {
            let mut w = self.row_words(r).to_vec();
            for (p, b) in &basis {
                if (w[p / WORD_BITS] >> (p % WORD_BITS)) & 1 == 1 {
                    for (x, y) in w.iter_mut().zip(b) {
                        *x ^= y;
                    }
                }
            }
            if let Some(p) = first_one(&w) {
                basis.push((p, w));
                kept.push(r);
            }
        }
        kept
    }

    #[cfg(test)]
    pub(crate) fn padding_is_clear(&self) -> bool {
        if self.cols % WORD_BITS == 0 {
            return true;
        }
        let mask = !super::bitvec::tail_mask(self.cols);
        (0..self.rows).all(|r| self.data[r * self.stride + self.stride - 1] & mask == 0)
    }
}

fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}
