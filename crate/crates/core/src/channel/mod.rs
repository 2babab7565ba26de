//! Depolarizing noise, syndromes, logical-failure classification and the Monte
//! Carlo harness.

mod montecarlo;
mod pauli;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use montecarlo::{run_monte_carlo, run_point, trial_rng, wilson_interval, LerRow, TrialBudget, WILSON_Z};
pub use pauli::{Pauli, PauliError};

use crate::codes::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec};

/// I.i.d. depolarizing noise: each qubit is X, Y or Z with probability `ε/3` each.
pub fn sample_depolarizing<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> PauliError {
    let mut e = PauliError::identity(n);
    for v in 0..n {
        let u: f64 = rng.gen();
        if u < epsilon {
            let k = ((3.0 * u / epsilon) as usize).min(2);
            e.set(v, [Pauli::X, Pauli::Y, Pauli::Z][k]);
        }
    }
    e
}

/// `s = (H0·z, H1·x)`.
pub fn syndrome(code: &CssCode, e: &PauliError) -> Result<BitVec> {
    if e.len() != code.n {
        return Err(Error::DimensionMismatch(format!(
            "error on {} qubits for a code of length {}",
            e.len(),
            code.n
        )));
    }
    Ok(code.h0.mul_vec(&e.z)?.concat(&code.h1.mul_vec(&e.x)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Success,
    LogicalFailure,
    ConvergenceFailure,
}

impl TrialOutcome {
    pub fn is_failure(self) -> bool {
        self != TrialOutcome::Success
    }
}

/// Membership test against a fixed row space, using a reduced echelon basis.
#[derive(Clone, Debug)]
pub struct RowspaceTester {
    reduced: BinaryMatrix,
    pivots: Vec<usize>,
}

impl RowspaceTester {
    pub fn new(h: &BinaryMatrix) -> Self {
        let ech = h.echelon();
        Self {
            reduced: ech.reduced,
            pivots: ech.pivots,
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                v.xor_assign(&self.reduced.row(i));
            }
        }
        v.is_zero()
    }
}

/// Precomputed stabilizer-membership tests for a code.
#[derive(Clone, Debug)]
pub struct Classifier {
    x_stabilizers: RowspaceTester,
    z_stabilizers: RowspaceTester,
}

impl Classifier {
    pub fn new(code: &CssCode) -> Self {
        Self {
            x_stabilizers: RowspaceTester::new(&code.h0),
            z_stabilizers: RowspaceTester::new(&code.h1),
        }
    }

    /// Success iff the residual `e·ê` is a stabilizer.
    pub fn classify(&self, e: &PauliError, estimate: &PauliError, converged: bool) -> TrialOutcome {
        if !converged {
            return TrialOutcome::ConvergenceFailure;
        }
        let r = e.mul(estimate);
        if self.x_stabilizers.contains(&r.x) && self.z_stabilizers.contains(&r.z) {
            TrialOutcome::Success
        } else {
            TrialOutcome::LogicalFailure
        }
    }
}

pub fn classify_outcome(code: &CssCode, e: &PauliError, estimate: &PauliError, converged: bool) -> TrialOutcome {
    Classifier::new(code).classify(e, estimate, converged)
}
