use serde::{Deserialize, Serialize};

use super::NetsimError;
use crate::build::BranchingVector;

fn default_bsm_success() -> f64 {
    0.5
}

fn default_loss_db_per_km() -> f64 {
    0.2
}

/// A linear chain: two end nodes, `hops` repeater-graph-state sources between
/// them and `hops + 1` analyzers, one per link.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub hops: usize,
    pub arms: usize,
    pub branching: BranchingVector,
    /// Per-photon survival probability on one source-to-analyzer channel.
    /// Mutually exclusive with `length_km`; 1.0 when neither is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survival: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_km: Option<f64>,
    #[serde(default = "default_loss_db_per_km")]
    pub loss_db_per_km: f64,
    /// Probability that a photon readout is reported flipped.
    #[serde(default)]
    pub measurement_error: f64,
    #[serde(default = "default_bsm_success")]
    pub bsm_success: f64,
    /// One-way classical delay per link in microseconds. Reported only.
    #[serde(default)]
    pub latency_us: f64,
    #[serde(default)]
    pub seed: u64,
    /// Majority vote over children for indirect Z. Defaults to on exactly
    /// when `measurement_error > 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub majority_indirect: Option<bool>,
}

impl ChainConfig {
    pub fn new(hops: usize, arms: usize, branching: BranchingVector) -> Self {
        Self {
            hops,
            arms,
            branching,
            survival: None,
            length_km: None,
            loss_db_per_km: default_loss_db_per_km(),
            measurement_error: 0.0,
            bsm_success: default_bsm_success(),
            latency_us: 0.0,
            seed: 0,
            majority_indirect: None,
        }
    }

    pub fn with_survival(mut self, p: f64) -> Self {
        self.survival = Some(p);
        self.length_km = None;
        self
    }

    pub fn validate(&self) -> Result<(), NetsimError> {
        let bad = |msg: String| Err(NetsimError::Config(msg));
        if self.arms == 0 {
            return bad("arms must be at least 1".into());
        }
        let prob = |name: &str, p: f64| -> Result<(), NetsimError> {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(NetsimError::Config(format!("{name} must lie in [0, 1], got {p}")))
            }
        };
        if self.survival.is_some() && self.length_km.is_some() {
            return bad("give either survival or length_km, not both".into());
        }
        if let Some(p) = self.survival {
            prob("survival", p)?;
        }
        if let Some(l) = self.length_km {
            if !(l >= 0.0 && l.is_finite()) {
                return bad(format!("length_km must be a finite non-negative number, got {l}"));
            }
        }
        if !(self.loss_db_per_km >= 0.0 && self.loss_db_per_km.is_finite()) {
            return bad(format!("loss_db_per_km must be a finite non-negative number, got {}", self.loss_db_per_km));
        }
        prob("measurement_error", self.measurement_error)?;
        prob("bsm_success", self.bsm_success)?;
        if !(self.latency_us >= 0.0 && self.latency_us.is_finite()) {
            return bad(format!("latency_us must be a finite non-negative number, got {}", self.latency_us));
        }
        Ok(())
    }

    pub fn survival_probability(&self) -> f64 {
        match (self.survival, self.length_km) {
            (Some(p), _) => p,
            (None, Some(l)) => 10f64.powf(-l * self.loss_db_per_km / 10.0),
            (None, None) => 1.0,
        }
    }

    pub fn majority(&self) -> bool {
        self.majority_indirect.unwrap_or(self.measurement_error > 0.0)
    }

    pub fn num_analyzers(&self) -> usize {
        self.hops + 1
    }

    pub fn num_halves(&self) -> usize {
        2 * self.hops + 2
    }
}
