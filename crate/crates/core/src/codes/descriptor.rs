//! JSON code descriptors.
//!
//! ```json
//! {"type": "qt", "name": "z5-toy", "group": {"cyclic": 5}, "a": [1, 4], "b": [2, 3],
//!  "h_a": {"dense": ["11"]}, "h_b": {"dense": ["11"]}}
//! ```
//!
//! Matrices are `{"dense": ["0110", ...]}`, `{"alist": "path"}` (relative to the
//! descriptor file), `{"identity": n}`, `{"circulant": {"l": 7, "exponents": [0, 1, 3]}}`
//! or `{"lifted": {"l": 7, "blocks": [[[0, 1], []], ...]}}` where each block lists the
//! exponents of a circulant. Groups are `{"cyclic": m}`, `{"dihedral": m}` (order `2m`),
//! `{"product": [g1, g2, ...]}` or `{"table": [[...], ...]}`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::group::GroupTable;
use super::{build_gb_from_exponents, build_hgp, build_lp, build_quadripartite_qt, CssCode};
use crate::error::{Error, Result};
use crate::gf2::{io, BinaryMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Product(Vec<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupTable> {
        match self {
            GroupSpec::Cyclic(0) | GroupSpec::Dihedral(0) => {
                Err(Error::InvalidGroup("order parameter must be positive".into()))
            }
            GroupSpec::Cyclic(m) => Ok(GroupTable::cyclic(*m)),
            GroupSpec::Dihedral(m) => Ok(GroupTable::dihedral(*m)),
            GroupSpec::Product(factors) => {
                let mut iter = factors.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| Error::InvalidGroup("empty direct product".into()))?
                    .build()?;
                iter.try_fold(first, |acc, f| Ok(acc.direct_product(&f.build()?)))
            }
            GroupSpec::Table(t) => GroupTable::from_table(t.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circulant {
    pub l: usize,
    pub exponents: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lifted {
    pub l: usize,
    pub blocks: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixSpec {
    Dense(Vec<String>),
    Alist(PathBuf),
    Identity(usize),
    Circulant(Circulant),
    Lifted(Lifted),
}

impl MatrixSpec {
    pub fn dense(m: &BinaryMatrix) -> Self {
        MatrixSpec::Dense(m.to_dense_string().lines().map(str::to_owned).collect())
    }

    pub fn build(&self, base_dir: &Path) -> Result<BinaryMatrix> {
        match self {
            MatrixSpec::Dense(rows) => BinaryMatrix::parse_dense(&rows.join("\n")),
            MatrixSpec::Alist(p) => io::read_alist(base_dir.join(p)),
            MatrixSpec::Identity(n) => Ok(BinaryMatrix::identity(*n)),
            MatrixSpec::Circulant(c) => circulant(c.l, &c.exponents),
            MatrixSpec::Lifted(lifted) => {
                let l = lifted.l;
                let rows = lifted.blocks.len();
                let cols = lifted.blocks.first().map_or(0, Vec::len);
                if lifted.blocks.iter().any(|r| r.len() != cols) {
                    return Err(Error::Parse("lifted matrix rows have different block counts".into()));
                }
                let mut m = BinaryMatrix::zeros(rows * l, cols * l);
                for (i, row) in lifted.blocks.iter().enumerate() {
                    for (j, exps) in row.iter().enumerate() {
                        m.paste(i * l, j * l, &circulant(l, exps)?);
                    }
                }
                Ok(m)
            }
        }
    }

    /// Lift size implied by this matrix description, if any.
    fn lift(&self) -> Option<usize> {
        match self {
            MatrixSpec::Circulant(c) => Some(c.l),
            MatrixSpec::Lifted(l) => Some(l.l),
            _ => None,
        }
    }
}

fn circulant(l: usize, exponents: &[usize]) -> Result<BinaryMatrix> {
    if l == 0 {
        return Err(Error::InvalidParameter("circulant size must be positive".into()));
    }
    let mut m = BinaryMatrix::zeros(l, l);
    for &e in exponents {
        for r in 0..l {
            m.flip(r, (r + e) % l);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodeDescriptor {
    Qt {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        group: GroupSpec,
        a: Vec<usize>,
        b: Vec<usize>,
        h_a: MatrixSpec,
        h_b: MatrixSpec,
    },
    Hgp {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        a: MatrixSpec,
        b: MatrixSpec,
    },
    Lp {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        /// Lift size; defaults to the lift of `a` when it is a circulant or lifted spec.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        l: Option<usize>,
        a: MatrixSpec,
        b: MatrixSpec,
    },
    Gb {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        l: usize,
        a: Vec<usize>,
        b: Vec<usize>,
    },
    Css {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        h0: MatrixSpec,
        h1: MatrixSpec,
    },
}

impl CodeDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Self, PathBuf)> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, base))
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            CodeDescriptor::Qt { name, .. }
            | CodeDescriptor::Hgp { name, .. }
            | CodeDescriptor::Lp { name, .. }
            | CodeDescriptor::Gb { name, .. }
            | CodeDescriptor::Css { name, .. } => name.as_deref(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CodeDescriptor::Qt { .. } => "qt",
            CodeDescriptor::Hgp { .. } => "hgp",
            CodeDescriptor::Lp { .. } => "lp",
            CodeDescriptor::Gb { .. } => "gb",
            CodeDescriptor::Css { .. } => "css",
        }
    }

    /// Builds the code; relative alist paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<CssCode> {
        match self {
            CodeDescriptor::Qt {
                group, a, b, h_a, h_b, ..
            } => build_quadripartite_qt(
                group.build()?,
                a.clone(),
                b.clone(),
                h_a.build(base_dir)?,
                h_b.build(base_dir)?,
            ),
            CodeDescriptor::Hgp { a, b, .. } => Ok(build_hgp(&a.build(base_dir)?, &b.build(base_dir)?)),
            CodeDescriptor::Lp { l, a, b, .. } => {
                let l = l.or_else(|| a.lift()).or_else(|| b.lift()).unwrap_or(1);
                build_lp(&a.build(base_dir)?, &b.build(base_dir)?, l)
            }
            CodeDescriptor::Gb { l, a, b, .. } => build_gb_from_exponents(*l, a, b),
            CodeDescriptor::Css { h0, h1, .. } => CssCode::from_pcms(h0.build(base_dir)?, h1.build(base_dir)?),
        }
    }
}
