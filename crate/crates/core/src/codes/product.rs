//! Hypergraph-product, lifted-product and generalized-bicycle codes.

use super::{CodeMeta, CssCode};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec};

/// Hypergraph product: `H0 = [A⊗I_{n_b} | I_{m_a}⊗Bᵀ]`, `H1 = [I_{n_a}⊗B | Aᵀ⊗I_{m_b}]`.
pub fn build_hgp(a: &BinaryMatrix, b: &BinaryMatrix) -> CssCode {
    let (ma, na) = a.shape();
    let (mb, nb) = b.shape();
    let h0 = a
        .kron(&BinaryMatrix::identity(nb))
        .hstack(&BinaryMatrix::identity(ma).kron(&b.transpose()))
        .expect("row counts agree by construction");
    let h1 = BinaryMatrix::identity(na)
        .kron(b)
        .hstack(&a.transpose().kron(&BinaryMatrix::identity(mb)))
        .expect("row counts agree by construction");
    let mut code = CssCode::from_pcms(h0, h1).expect("hypergraph products are always orthogonal");
    code.meta = CodeMeta::Hgp {
        a: a.clone(),
        b: b.clone(),
    };
    code
}

/// Block-level Kronecker product of matrices tiled by `l×l` blocks: block
/// `(i1·r2 + i2, j1·c2 + j2)` of the result is `X_{i1 j1} · Y_{i2 j2}`.
fn block_kron(x: &BinaryMatrix, y: &BinaryMatrix, l: usize) -> BinaryMatrix {
    let (r1, c1) = (x.rows() / l, x.cols() / l);
    let (r2, c2) = (y.rows() / l, y.cols() / l);
    let xb: Vec<BinaryMatrix> = (0..r1 * c1).map(|i| x.block((i / c1) * l, (i % c1) * l, l, l)).collect();
    let yb: Vec<BinaryMatrix> = (0..r2 * c2).map(|i| y.block((i / c2) * l, (i % c2) * l, l, l)).collect();
    let mut out = BinaryMatrix::zeros(r1 * r2 * l, c1 * c2 * l);
    for i1 in 0..r1 {
        for j1 in 0..c1 {
            let xa = &xb[i1 * c1 + j1];
            if xa.is_zero() {
                continue;
            }
            for i2 in 0..r2 {
                for j2 in 0..c2 {
                    let yb = &yb[i2 * c2 + j2];
                    if yb.is_zero() {
                        continue;
                    }
                    let p = xa.mul(yb).expect("square blocks");
                    out.paste((i1 * r2 + i2) * l, (j1 * c2 + j2) * l, &p);
                }
            }
        }
    }
    out
}

fn block_identity(blocks: usize, l: usize) -> BinaryMatrix {
    BinaryMatrix::identity(blocks * l)
}

/// Lifted product of two matrices tiled by `l×l` blocks. The transposes act on the
/// full matrix, so the transpose is also taken inside the blocks. At `l = 1` this is
/// exactly [`build_hgp`].
pub fn build_lp(a: &BinaryMatrix, b: &BinaryMatrix, l: usize) -> Result<CssCode> {
    if l == 0 {
        return Err(Error::InvalidParameter("lift size must be positive".into()));
    }
    for (name, m) in [("A", a), ("B", b)] {
        if m.rows() % l != 0 || m.cols() % l != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, not a multiple of the lift size {l}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let (ma, na) = (a.rows() / l, a.cols() / l);
    let (mb, nb) = (b.rows() / l, b.cols() / l);

    // Orthogonality needs every block of A to commute with every transposed block of B.
    for ar in 0..ma {
        for ac in 0..na {
            let x = a.block(ar * l, ac * l, l, l);
            for br in 0..mb {
                for bc in 0..nb {
                    let y = b.block(br * l, bc * l, l, l).transpose();
                    if x.mul(&y)? != y.mul(&x)? {
                        return Err(Error::NonCommutingBlocks {
                            a_row: ar,
                            a_col: ac,
                            b_row: br,
                            b_col: bc,
                        });
                    }
                }
            }
        }
    }

    let h0 = block_kron(a, &block_identity(nb, l), l)
        .hstack(&block_kron(&block_identity(ma, l), &b.transpose(), l))?;
    let h1 = block_kron(&block_identity(na, l), b, l)
        .hstack(&block_kron(&a.transpose(), &block_identity(mb, l), l))?;
    let mut code = CssCode::from_pcms(h0, h1)?;
    code.meta = CodeMeta::Lp {
        a: a.clone(),
        b: b.clone(),
        l,
    };
    Ok(code)
}

/// Generalized bicycle code `H0 = [A B]`, `H1 = [Bᵀ Aᵀ]` with circulants `A`, `B`.
pub fn build_gb(a_coeffs: &BitVec, b_coeffs: &BitVec) -> Result<CssCode> {
    if a_coeffs.len() != b_coeffs.len() || a_coeffs.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "circulant coefficient lengths {} and {}",
            a_coeffs.len(),
            b_coeffs.len()
        )));
    }
    let l = a_coeffs.len();
    let a = BinaryMatrix::circulant(a_coeffs);
    let b = BinaryMatrix::circulant(b_coeffs);
    let h0 = a.hstack(&b)?;
    let h1 = b.transpose().hstack(&a.transpose())?;
    let mut code = CssCode::from_pcms(h0, h1)?;
    code.meta = CodeMeta::Gb {
        a: a_coeffs.ones().collect(),
        b: b_coeffs.ones().collect(),
        l,
    };
    Ok(code)
}

/// [`build_gb`] with polynomials given as exponent lists, e.g. `1 + x + x³` as `[0, 1, 3]`.
/// Repeated exponents cancel in pairs.
pub fn build_gb_from_exponents(l: usize, a: &[usize], b: &[usize]) -> Result<CssCode> {
    let poly = |exps: &[usize]| -> Result<BitVec> {
        if l == 0 {
            return Err(Error::InvalidParameter("circulant size must be positive".into()));
        }
        let mut v = BitVec::zeros(l);
        for &e in exps {
            v.flip(e % l);
        }
        Ok(v)
    };
    build_gb(&poly(a)?, &poly(b)?)
}
