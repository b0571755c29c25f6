use serde::{Deserialize, Serialize};

use super::{Agent, Allocation, MarketInstance, SetFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum Violation {
    /// `q_buyer > g(A)`.
    QualityCap { buyer: usize, quality: f64, cap: f64 },
    /// Leaking buyer-to-buyer edge with `q_from > q_to`.
    BuyerEdge { from: usize, to: usize },
    /// Participating seller whose own contribution `g({seller})` exceeds the buyer's quality.
    SellerEdge {
        seller: usize,
        buyer: usize,
        seller_gain: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

pub fn check_feasibility(instance: &MarketInstance, allocation: &Allocation) -> Result<FeasibilityReport> {
    instance.validate()?;
    if allocation.participating.len() != instance.sellers() || allocation.qualities.len() != instance.buyers() {
        return Err(Error::InvalidInput(format!(
            "allocation is {}x{} but instance has {} sellers and {} buyers",
            allocation.participating.len(),
            allocation.qualities.len(),
            instance.sellers(),
            instance.buyers()
        )));
    }

    let cap = instance.gain_of(&allocation.participating);
    let mut violations = Vec::new();
    for (buyer, &q) in allocation.qualities.iter().enumerate() {
        if q > cap {
            violations.push(Violation::QualityCap { buyer, quality: q, cap });
        }
    }
    for edge in &instance.edges {
        match edge.from {
            Agent::Buyer(from) => {
                if allocation.qualities[from] > allocation.qualities[edge.to] {
                    violations.push(Violation::BuyerEdge { from, to: edge.to });
                }
            }
            Agent::Seller(seller) => {
                if allocation.participating[seller] {
                    let seller_gain = instance.gain.eval(&[seller]);
                    if seller_gain > allocation.qualities[edge.to] {
                        violations.push(Violation::SellerEdge {
                            seller,
                            buyer: edge.to,
                            seller_gain,
                        });
                    }
                }
            }
        }
    }
    Ok(FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
    })
}
