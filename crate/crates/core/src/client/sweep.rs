use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BidStrategy;
use crate::error::{Error, Result};
use crate::mechanism::{run_simulation, MechanismConfig, Scenario};
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub bid: f64,
    pub cumulative_utility: Money,
    pub total_transfers: Money,
    pub wins: u32,
}

/// Replays the whole simulation once per grid bid, with `deviator` bidding that amount and
/// everything else (including the seed) unchanged.
pub fn deviation_sweep(
    config: &MechanismConfig,
    scenario: &Scenario,
    deviator: usize,
    grid: &[f64],
) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("bid grid is empty".into()));
    }
    if deviator >= scenario.clients.len() {
        return Err(Error::InvalidInput(format!(
            "deviator {deviator} out of range for {} clients",
            scenario.clients.len()
        )));
    }
    grid.par_iter()
        .map(|&bid| {
            let mut s = scenario.clone();
            s.clients[deviator].bid_strategy = BidStrategy::Fixed { bid };
            let res = run_simulation(config, &s)?;
            Ok(SweepPoint {
                bid,
                cumulative_utility: res.final_clients[deviator].cumulative_utility,
                total_transfers: res.ledger.transfers[deviator],
                wins: res.ledger.wins[deviator],
            })
        })
        .collect()
}
