use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability that a client's model is sent to each peer evaluator, as a function of its bid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ThreshFn {
    /// The same probability for every bid.
    Constant { value: f64 },
    /// `min(slope * b, 1)`.
    Linear { slope: f64 },
    /// `low` below `cutoff`, `high` at or above it.
    Step { cutoff: f64, low: f64, high: f64 },
}

impl ThreshFn {
    pub const ZERO: ThreshFn = ThreshFn::Constant { value: 0.0 };

    pub fn eval(&self, bid: f64) -> f64 {
        match *self {
            ThreshFn::Constant { value } => value,
            ThreshFn::Linear { slope } => (slope * bid).min(1.0),
            ThreshFn::Step { cutoff, low, high } => {
                if bid >= cutoff {
                    high
                } else {
                    low
                }
            }
        }
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        let prob = |v: f64, name: &str| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::config(
                    format!("{field}.{name}"),
                    format!("probability {v} outside [0, 1]"),
                ))
            }
        };
        match *self {
            ThreshFn::Constant { value } => prob(value, "value"),
            ThreshFn::Linear { slope } => {
                if slope.is_finite() && slope >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::config(
                        format!("{field}.slope"),
                        "slope must be finite and non-negative",
                    ))
                }
            }
            ThreshFn::Step { cutoff, low, high } => {
                if !cutoff.is_finite() {
                    return Err(Error::config(format!("{field}.cutoff"), "cutoff must be finite"));
                }
                prob(low, "low")?;
                prob(high, "high")?;
                if low > high {
                    return Err(Error::config(field, "step must be non-decreasing (low <= high)"));
                }
                Ok(())
            }
        }
    }
}

/// Money charged for a report that deviates from the consensus by `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PunishFn {
    Zero,
    /// `scale * |d|`.
    Absolute {
        scale: f64,
    },
    /// `scale * d^2`.
    Squared {
        scale: f64,
    },
}

impl PunishFn {
    pub fn eval(&self, deviation: f64) -> f64 {
        match *self {
            PunishFn::Zero => 0.0,
            PunishFn::Absolute { scale } => scale * deviation.abs(),
            PunishFn::Squared { scale } => scale * deviation * deviation,
        }
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        match *self {
            PunishFn::Zero => Ok(()),
            PunishFn::Absolute { scale } | PunishFn::Squared { scale } => {
                if scale.is_finite() && scale >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::config(
                        format!("{field}.scale"),
                        "scale must be finite and non-negative",
                    ))
                }
            }
        }
    }
}

/// How a client's aggregate model quality is derived from the models it received.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggrFn {
    /// Best-model selection.
    #[default]
    Max,
    /// Data-share weighted mean, a stand-in for federated averaging.
    WeightedMean,
}

impl AggrFn {
    /// `members` holds `(quality, data_share)` pairs; never empty in practice since every
    /// client receives its own model.
    pub fn aggregate(&self, members: &[(f64, f64)]) -> f64 {
        match self {
            AggrFn::Max => members.iter().map(|&(q, _)| q).fold(0.0, f64::max),
            AggrFn::WeightedMean => {
                let total: f64 = members.iter().map(|&(_, w)| w).sum();
                if total <= 0.0 {
                    return 0.0;
                }
                members.iter().map(|&(q, w)| q * w).sum::<f64>() / total
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingMode {
    /// Any permutation, fixed points included; a fixed point always loses.
    #[default]
    UniformPermutation,
    /// Permutations without fixed points.
    Derangement,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaymentRule {
    /// Winner pays `b_peer * (best - s_peer)`.
    #[default]
    PeerGain,
    /// Winner pays `b_peer * (best - s_own)`.
    OwnGain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismConfig {
    pub num_clients: usize,
    pub num_rounds: usize,
    #[serde(default = "default_thresh")]
    pub thresh_fn: ThreshFn,
    #[serde(default = "default_punish")]
    pub punish_fn: PunishFn,
    #[serde(default)]
    pub aggr_fn: AggrFn,
    #[serde(default)]
    pub matching_mode: MatchingMode,
    #[serde(default)]
    pub payment_rule: PaymentRule,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_thresh() -> ThreshFn {
    ThreshFn::ZERO
}

fn default_punish() -> PunishFn {
    PunishFn::Zero
}

impl MechanismConfig {
    pub fn new(num_clients: usize, num_rounds: usize) -> Self {
        MechanismConfig {
            num_clients,
            num_rounds,
            thresh_fn: ThreshFn::ZERO,
            punish_fn: PunishFn::Zero,
            aggr_fn: AggrFn::Max,
            matching_mode: MatchingMode::UniformPermutation,
            payment_rule: PaymentRule::PeerGain,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_clients < 2 {
            return Err(Error::config(
                "mechanism.num_clients",
                "at least 2 clients are required",
            ));
        }
        if self.num_rounds < 1 {
            return Err(Error::config("mechanism.num_rounds", "at least 1 round is required"));
        }
        self.thresh_fn.validate("mechanism.thresh_fn")?;
        self.punish_fn.validate("mechanism.punish_fn")?;
        Ok(())
    }
}
