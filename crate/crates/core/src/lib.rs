//! Quantum LDPC toolkit: CSS code constructions, check grouping, cycle analysis,
//! trellis-based generalized belief propagation and depolarizing-channel simulation.

pub mod channel;
pub mod codes;
pub mod cycles;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod grouping;
pub mod trellis;

pub use codes::{
    brute_force_distance, build_gb, build_gb_from_exponents, build_hgp, build_lp, build_quadripartite_qt,
    css_from_pcms, dual_pcm, ClassicalCode, CodeDescriptor, CodeMeta, CssCode, GroupTable, QtMeta,
    SquareComplex,
};
pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BitVec};
pub use channel::{classify_outcome, run_monte_carlo, sample_depolarizing, syndrome, LerRow, Pauli, PauliError, TrialBudget, TrialOutcome};
pub use decode::{ChannelPriors, DecodeOutcome, Decoder, DecoderConfig, DecoderKind, OsdMode, RelayParams, Stage};
pub use grouping::{Axis, Grouping};
pub use trellis::Trellis;
