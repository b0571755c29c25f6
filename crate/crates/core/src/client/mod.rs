//! Synthetic federated-learning clients.
//!
//! A client is summarized by its valuation per unit of score, the share of the training data
//! it holds, and the current quality of its model. Training moves quality geometrically toward
//! a data-dependent ceiling; bids and peer-evaluation reports follow configurable strategies.

mod sweep;

pub use sweep::{deviation_sweep, SweepPoint};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;

/// Quality dynamics of local training: `q <- q + rate * (ceiling(share) - q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearningCurve {
    #[serde(default = "LearningCurve::default_rate")]
    pub rate: f64,
    #[serde(default = "LearningCurve::default_base")]
    pub ceiling_base: f64,
    #[serde(default = "LearningCurve::default_slope")]
    pub ceiling_slope: f64,
}

impl Default for LearningCurve {
    fn default() -> Self {
        LearningCurve {
            rate: Self::default_rate(),
            ceiling_base: Self::default_base(),
            ceiling_slope: Self::default_slope(),
        }
    }
}

impl LearningCurve {
    fn default_rate() -> f64 {
        0.4
    }
    fn default_base() -> f64 {
        0.6
    }
    fn default_slope() -> f64 {
        0.35
    }

    /// Attainable quality with the given data share; non-decreasing in the share.
    pub fn ceiling(&self, data_share: f64) -> f64 {
        (self.ceiling_base + self.ceiling_slope * data_share).clamp(0.0, 1.0)
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        if !(self.rate > 0.0 && self.rate <= 1.0) {
            return Err(Error::config(format!("{field}.rate"), "rate must lie in (0, 1]"));
        }
        if !(self.ceiling_base >= 0.0 && self.ceiling_base <= 1.0) {
            return Err(Error::config(format!("{field}.ceiling_base"), "must lie in [0, 1]"));
        }
        if !(self.ceiling_slope >= 0.0 && self.ceiling_base + self.ceiling_slope <= 1.0) {
            return Err(Error::config(
                format!("{field}.ceiling_slope"),
                "must be non-negative with ceiling_base + ceiling_slope <= 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BidStrategy {
    #[default]
    Truthful,
    Fixed {
        bid: f64,
    },
    /// Bid `factor * valuation`.
    Shaded {
        factor: f64,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EvalStrategy {
    #[default]
    Truthful,
    /// Adds uniform noise on `[-sigma, sigma]`.
    Noisy { sigma: f64 },
    /// Adds a constant offset.
    Adversarial { offset: f64 },
}

impl EvalStrategy {
    /// Score reported for a model of quality `true_score`. `noise` is a draw from `[-1, 1)`
    /// supplied by the caller so that every strategy consumes randomness identically.
    pub fn report(&self, true_score: f64, noise: f64) -> f64 {
        let raw = match *self {
            EvalStrategy::Truthful => return true_score,
            EvalStrategy::Noisy { sigma } => true_score + sigma * noise,
            EvalStrategy::Adversarial { offset } => true_score + offset,
        };
        raw.clamp(0.0, 1.0)
    }

    pub fn is_truthful(&self) -> bool {
        matches!(self, EvalStrategy::Truthful)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientState {
    pub valuation: f64,
    pub data_share: f64,
    pub quality: f64,
    pub curve: LearningCurve,
    pub bid_strategy: BidStrategy,
    pub eval_strategy: EvalStrategy,
    pub cumulative_utility: Money,
}

impl ClientState {
    pub fn new(valuation: f64, data_share: f64) -> Self {
        ClientState {
            valuation,
            data_share,
            quality: 0.0,
            curve: LearningCurve::default(),
            bid_strategy: BidStrategy::Truthful,
            eval_strategy: EvalStrategy::Truthful,
            cumulative_utility: Money::ZERO,
        }
    }

    pub fn with_quality(mut self, quality: f64) -> Self {
        self.quality = quality;
        self
    }

    pub fn with_bid_strategy(mut self, strategy: BidStrategy) -> Self {
        self.bid_strategy = strategy;
        self
    }

    pub fn with_eval_strategy(mut self, strategy: EvalStrategy) -> Self {
        self.eval_strategy = strategy;
        self
    }

    pub fn with_curve(mut self, curve: LearningCurve) -> Self {
        self.curve = curve;
        self
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        if !(self.valuation.is_finite() && self.valuation >= 0.0) {
            return Err(Error::config(
                format!("{field}.valuation"),
                "must be finite and non-negative",
            ));
        }
        if !(self.data_share > 0.0 && self.data_share <= 1.0) {
            return Err(Error::config(format!("{field}.data_share"), "must lie in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.quality) {
            return Err(Error::config(format!("{field}.initial_quality"), "must lie in [0, 1]"));
        }
        if let EvalStrategy::Noisy { sigma } = self.eval_strategy {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::config(
                    format!("{field}.eval_strategy.sigma"),
                    "must be non-negative",
                ));
            }
        }
        self.curve.validate(&format!("{field}.curve"))
    }
}

/// One local training step. Never lowers quality, so a model obtained by transfer that is
/// already above the local ceiling is kept as is.
pub fn train_step(state: &ClientState) -> f64 {
    let ceiling = state.curve.ceiling(state.data_share);
    let next = state.quality + state.curve.rate * (ceiling - state.quality);
    next.max(state.quality)
}

pub fn emit_bid(state: &ClientState) -> f64 {
    let bid = match state.bid_strategy {
        BidStrategy::Truthful => state.valuation,
        BidStrategy::Fixed { bid } => bid,
        BidStrategy::Shaded { factor } => factor * state.valuation,
    };
    if bid < 0.0 || bid.is_nan() {
        log::warn!("bid {bid} from strategy {:?} clamped to 0", state.bid_strategy);
        0.0
    } else {
        bid
    }
}

/// Per-round utility `valuation * quality - transfer`.
pub fn round_utility(valuation: f64, quality: f64, transfer: Money) -> Money {
    Money::from_f64(valuation * quality) - transfer
}
