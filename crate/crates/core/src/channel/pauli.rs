use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gf2::BitVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Index into `[X, Y, Z]` LLR triples; `None` for the identity.
    pub fn llr_index(self) -> Option<usize> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(0),
            Pauli::Y => Some(1),
            Pauli::Z => Some(2),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Pauli string in symplectic form, phase dropped: X ↦ (1,0), Z ↦ (0,1), Y ↦ (1,1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliError {
    pub x: BitVec,
    pub z: BitVec,
}

impl PauliError {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts differ in length");
        Self { x, z }
    }

    pub fn from_paulis(ps: &[Pauli]) -> Self {
        let mut e = Self::identity(ps.len());
        for (v, &p) in ps.iter().enumerate() {
            e.set(v, p);
        }
        e
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn get(&self, v: usize) -> Pauli {
        Pauli::from_bits(self.x.get(v), self.z.get(v))
    }

    pub fn set(&mut self, v: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(v, x);
        self.z.set(v, z);
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        let mut support = self.x.clone();
        support.or_assign(&self.z);
        support.weight()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Product up to phase (componentwise symplectic sum).
    pub fn mul(&self, other: &PauliError) -> PauliError {
        let mut out = self.clone();
        out.x.xor_assign(&other.x);
        out.z.xor_assign(&other.z);
        out
    }

    pub fn paulis(&self) -> Vec<Pauli> {
        (0..self.len()).map(|v| self.get(v)).collect()
    }
}

impl fmt::Display for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.paulis() {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliError({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_roundtrip() {
        let ps = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let e = PauliError::from_paulis(&ps);
        assert_eq!(e.paulis(), ps);
        assert_eq!(e.weight(), 3);
        assert_eq!(e.to_string(), "IXYZ");
        let xz = PauliError::from_paulis(&[Pauli::X, Pauli::X, Pauli::Z, Pauli::Z]);
        assert_eq!(e.mul(&xz).to_string(), "XIXI");
        assert!(e.mul(&e).is_identity());
    }
}
