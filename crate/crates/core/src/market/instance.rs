use serde::{Deserialize, Serialize};

use super::{GainFunction, SetFunction};
use crate::error::{Error, Result};
use crate::money::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "side", content = "index", rename_all = "snake_case")]
pub enum Agent {
    Seller(usize),
    Buyer(usize),
}

/// Leakage edge: whatever `from` holds becomes available to buyer `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeakageEdge {
    pub from: Agent,
    pub to: usize,
}

/// Two-sided market: sellers contribute data at a cost, buyers pay for model quality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketInstance {
    pub seller_costs: Vec<f64>,
    pub buyer_values: Vec<f64>,
    pub gain: GainFunction,
    #[serde(default)]
    pub edges: Vec<LeakageEdge>,
}

impl MarketInstance {
    pub fn new(seller_costs: Vec<f64>, buyer_values: Vec<f64>, gain: GainFunction) -> Self {
        MarketInstance {
            seller_costs,
            buyer_values,
            gain,
            edges: Vec::new(),
        }
    }

    pub fn sellers(&self) -> usize {
        self.seller_costs.len()
    }

    pub fn buyers(&self) -> usize {
        self.buyer_values.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .seller_costs
            .iter()
            .chain(&self.buyer_values)
            .any(|v| !(v.is_finite() && *v >= 0.0))
        {
            return Err(Error::InvalidInstance("types must be finite and non-negative".into()));
        }
        self.gain.validate(self.sellers())?;
        for e in &self.edges {
            let ok = e.to < self.buyers()
                && match e.from {
                    Agent::Seller(s) => s < self.sellers(),
                    Agent::Buyer(b) => b < self.buyers(),
                };
            if !ok {
                return Err(Error::InvalidInstance(format!(
                    "edge {e:?} references an unknown agent"
                )));
            }
        }
        Ok(())
    }

    pub fn gain_of(&self, participating: &[bool]) -> f64 {
        self.gain.eval(&indices(participating))
    }
}

pub(crate) fn indices(flags: &[bool]) -> Vec<usize> {
    flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
}

/// Outcome of a two-sided mechanism. Buyer transfers are paid in, seller transfers paid out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub participating: Vec<bool>,
    pub qualities: Vec<f64>,
    pub buyer_transfers: Vec<Money>,
    pub seller_transfers: Vec<Money>,
}

impl Allocation {
    pub fn empty(instance: &MarketInstance) -> Self {
        Allocation {
            participating: vec![false; instance.sellers()],
            qualities: vec![0.0; instance.buyers()],
            buyer_transfers: vec![Money::ZERO; instance.buyers()],
            seller_transfers: vec![Money::ZERO; instance.sellers()],
        }
    }

    pub fn revenue(&self) -> Money {
        self.buyer_transfers.iter().sum::<Money>() - self.seller_transfers.iter().sum::<Money>()
    }
}
