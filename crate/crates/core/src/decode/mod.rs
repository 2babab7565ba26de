//! Quaternary BP decoders: MBP₄, generalized GMBP₄ with trellis check nodes, the
//! hybrid schedule, OSD-1 post-processing and Relay-BP₄.

mod bp;
mod llr;
mod osd;
mod relay;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use bp::{
    gmbp4_decode, hard_decision, hard_decision_qubit, hybrid_decode, mbp4_decode, pauli_probabilities, BpGraph,
    DecodeOutcome, OsdSystem, Stage,
};
pub use llr::{boxplus, boxplus2, boxplus_extrinsic, init_priors, quaternary_to_binary, ChannelPriors};
pub use osd::{bit_cost, osd, osd1, OsdSolution};
pub use relay::{relay_bp4, relay_bp4_traced, soft_weight, RelayLeg, RelayParams, RelayTrace};

use crate::codes::CssCode;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::grouping::Grouping;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Mbp4,
    Gmbp4,
    Hybrid,
    Relay,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Mbp4 => "mbp4",
            DecoderKind::Gmbp4 => "gmbp4",
            DecoderKind::Hybrid => "hybrid",
            DecoderKind::Relay => "relay",
        }
    }

    /// Stage reported when the first BP pass converges.
    pub fn first_stage(self) -> Stage {
        match self {
            DecoderKind::Mbp4 | DecoderKind::Hybrid => Stage::Mbp4,
            DecoderKind::Gmbp4 => Stage::Gmbp4,
            DecoderKind::Relay => Stage::Relay,
        }
    }

    pub fn needs_grouping(self) -> bool {
        matches!(self, DecoderKind::Gmbp4 | DecoderKind::Hybrid)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OsdMode {
    #[default]
    None,
    Osd1,
}

impl OsdMode {
    pub fn name(self) -> &'static str {
        match self {
            OsdMode::None => "none",
            OsdMode::Osd1 => "osd1",
        }
    }
}

fn default_alpha() -> f64 {
    1.6
}

fn default_t_max() -> usize {
    6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderConfig {
    pub decoder: DecoderKind,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_t_max")]
    pub t_max: usize,
    #[serde(default)]
    pub osd: OsdMode,
    /// Seed the hybrid's second stage with the first stage's posteriors.
    #[serde(default)]
    pub warm_start: bool,
    #[serde(default)]
    pub relay: RelayParams,
}

impl DecoderConfig {
    pub fn new(decoder: DecoderKind) -> Self {
        Self {
            decoder,
            alpha: default_alpha(),
            t_max: default_t_max(),
            osd: OsdMode::None,
            warm_start: false,
            relay: RelayParams::default(),
        }
    }

    pub fn with_osd(mut self, osd: OsdMode) -> Self {
        self.osd = osd;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.decoder == DecoderKind::Relay {
            self.relay.validate()?;
        }
        Ok(())
    }
}

/// A decoder with its graphs and trellises prebuilt; immutable and shareable across threads.
#[derive(Clone, Debug)]
pub struct Decoder {
    config: DecoderConfig,
    trivial: BpGraph,
    generalized: Option<BpGraph>,
    osd: Option<OsdSystem>,
}

impl Decoder {
    /// `groupings` is required for GMBP₄ and the hybrid, ignored otherwise.
    pub fn new(code: &CssCode, groupings: Option<&[Grouping; 2]>, config: DecoderConfig) -> Result<Self> {
        config.validate()?;
        let generalized = if config.decoder.needs_grouping() {
            let g = groupings.ok_or_else(|| {
                Error::InvalidParameter(format!("decoder {} needs a grouping", config.decoder.name()))
            })?;
            Some(BpGraph::generalized(code, g)?)
        } else {
            None
        };
        let osd = (config.osd == OsdMode::Osd1).then(|| OsdSystem::new(code));
        Ok(Self {
            config,
            trivial: BpGraph::trivial(code),
            generalized,
            osd,
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn syndrome_len(&self) -> usize {
        self.trivial.syndrome_len()
    }

    /// Re-checks an estimate against a syndrome.
    pub fn satisfies(&self, e: &crate::channel::PauliError, s: &BitVec) -> bool {
        self.trivial.syndrome_of(e) == *s
    }

    /// `rng` is consumed only by Relay-BP₄.
    pub fn decode<R: Rng + ?Sized>(&self, s: &BitVec, priors: &ChannelPriors, rng: &mut R) -> Result<DecodeOutcome> {
        let c = &self.config;
        let osd = self.osd.as_ref();
        match c.decoder {
            DecoderKind::Mbp4 => mbp4_decode(&self.trivial, s, priors, c.alpha, c.t_max, osd),
            DecoderKind::Gmbp4 => gmbp4_decode(self.generalized.as_ref().unwrap(), s, priors, c.alpha, c.t_max, osd),
            DecoderKind::Hybrid => hybrid_decode(
                &self.trivial,
                self.generalized.as_ref().unwrap(),
                s,
                priors,
                c.alpha,
                c.t_max,
                osd,
                c.warm_start,
            ),
            DecoderKind::Relay => relay_bp4(&self.trivial, s, priors, &c.relay, osd, rng),
        }
    }
}
