use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupTableRepr", into = "GroupTableRepr")]
pub struct GroupTable {
    order: usize,
    product: Vec<usize>,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupTableRepr {
    product: Vec<Vec<usize>>,
}

impl TryFrom<GroupTableRepr> for GroupTable {
    type Error = Error;
    fn try_from(r: GroupTableRepr) -> Result<Self> {
        GroupTable::from_table(r.product)
    }
}

impl From<GroupTable> for GroupTableRepr {
    fn from(g: GroupTable) -> Self {
        GroupTableRepr {
            product: (0..g.order)
                .map(|a| (0..g.order).map(|b| g.mul(a, b)).collect())
                .collect(),
        }
    }
}

/// Tables up to this order get a full associativity check; larger ones are sampled.
const FULL_CHECK_ORDER: usize = 256;
const SAMPLED_TRIPLES: usize = 20_000;

impl GroupTable {
    /// Validates and wraps a multiplication table (`table[a][b]` = index of `a·b`).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut product = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {a} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidGroup(format!("entry {bad} out of range in row {a}")));
            }
            product.extend_from_slice(row);
        }
        for x in 0..order {
            if product[x] != x || product[x * order] != x {
                return Err(Error::InvalidGroup(format!(
                    "element 0 is not the identity (fails at {x})"
                )));
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            let inv = (0..order).find(|&b| product[a * order + b] == 0);
            match inv {
                Some(b) if product[b * order + a] == 0 => inverse[a] = b,
                _ => return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse"))),
            }
        }
        let g = Self {
            order,
            product,
            inverse,
        };
        g.check_associative()?;
        Ok(g)
    }

    fn check_associative(&self) -> Result<()> {
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        if self.order <= FULL_CHECK_ORDER {
            for a in 0..self.order {
                for b in 0..self.order {
                    for c in 0..self.order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (
                    rng.gen_range(0..self.order),
                    rng.gen_range(0..self.order),
                    rng.gen_range(0..self.order),
                );
                check(a, b, c)?;
            }
        }
        Ok(())
    }

    /// Cyclic group ℤ_m; element `i` is the residue `i`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m > 0, "cyclic group of order 0");
        let product = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        let inverse = (0..m).map(|a| (m - a) % m).collect();
        Self {
            order: m,
            product,
            inverse,
        }
    }

    /// Dihedral group of order `2m`; element `i + m·j` is `r^i s^j` with `s r s = r⁻¹`.
    pub fn dihedral(m: usize) -> Self {
        assert!(m > 0, "dihedral group with m = 0");
        let order = 2 * m;
        let mut product = vec![0; order * order];
        for x in 0..order {
            let (i, j) = (x % m, x / m);
            for y in 0..order {
                let (k, l) = (y % m, y / m);
                let rot = if j == 0 { (i + k) % m } else { (i + m - k) % m };
                product[x * order + y] = rot + m * ((j + l) % 2);
            }
        }
        let inverse = (0..order)
            .map(|x| {
                let (i, j) = (x % m, x / m);
                if j == 0 {
                    (m - i) % m
                } else {
                    x
                }
            })
            .collect();
        Self {
            order,
            product,
            inverse,
        }
    }

    /// Direct product; element `(x, y)` has index `x·|other| + y`.
    pub fn direct_product(&self, other: &GroupTable) -> Self {
        let (p, q) = (self.order, other.order);
        let order = p * q;
        let mut product = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                let x = self.mul(a / q, b / q);
                let y = other.mul(a % q, b % q);
                product[a * order + b] = x * q + y;
            }
        }
        let inverse = (0..order)
            .map(|a| self.inv(a / q) * q + other.inv(a % q))
            .collect();
        Self {
            order,
            product,
            inverse,
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn mul3(&self, a: usize, b: usize, c: usize) -> usize {
        self.mul(self.mul(a, b), c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_pass_validation() {
        for g in [
            GroupTable::cyclic(7),
            GroupTable::dihedral(5),
            GroupTable::cyclic(2).direct_product(&GroupTable::dihedral(3)),
        ] {
            let table: Vec<Vec<usize>> = (0..g.order())
                .map(|a| (0..g.order()).map(|b| g.mul(a, b)).collect())
                .collect();
            let rebuilt = GroupTable::from_table(table).unwrap();
            assert_eq!(rebuilt, g);
        }
    }

    #[test]
    fn dihedral_is_nonabelian() {
        let g = GroupTable::dihedral(3);
        assert_ne!(g.mul(1, 3), g.mul(3, 1));
        assert_eq!(g.mul(3, 3), 0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(GroupTable::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        // Latin square with identity but not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(GroupTable::from_table(loop5).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = GroupTable::dihedral(4);
        let text = serde_json::to_string(&g).unwrap();
        let back: GroupTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
