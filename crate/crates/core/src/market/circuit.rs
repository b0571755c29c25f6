use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitOutcome {
    /// `successor[i]` is the agent `i` is compared against.
    pub successor: Vec<usize>,
    pub winners: Vec<usize>,
    pub payments: Vec<Money>,
}

impl CircuitOutcome {
    pub fn revenue(&self) -> Money {
        self.payments.iter().sum()
    }
}

pub(crate) fn check_bids(bids: &[f64]) -> Result<()> {
    match bids.iter().position(|b| !(b.is_finite() && *b >= 0.0)) {
        Some(i) => Err(Error::InvalidInput(format!(
            "bid {} of agent {i} is not finite and non-negative",
            bids[i]
        ))),
        None => Ok(()),
    }
}

/// Places all agents on a uniformly random cycle. An agent whose bid strictly exceeds its
/// successor's gets the good and pays the successor's bid.
pub fn circuit_auction<R: Rng + ?Sized>(bids: &[f64], rng: &mut R) -> Result<CircuitOutcome> {
    let n = bids.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "circuit auction needs at least 2 agents, got {n}"
        )));
    }
    check_bids(bids)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut successor = vec![0; n];
    for (pos, &agent) in order.iter().enumerate() {
        successor[agent] = order[(pos + 1) % n];
    }
    Ok(settle_circuit(bids, successor))
}

/// Settles a circuit auction for a given successor map.
pub fn settle_circuit(bids: &[f64], successor: Vec<usize>) -> CircuitOutcome {
    let mut winners = Vec::new();
    let mut payments = vec![Money::ZERO; bids.len()];
    for (i, &next) in successor.iter().enumerate() {
        if bids[i] > bids[next] {
            winners.push(i);
            payments[i] = Money::from_f64(bids[next]);
        }
    }
    CircuitOutcome {
        successor,
        winners,
        payments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn equal_bids_sell_nothing() {
        let out = circuit_auction(&[0.4; 6], &mut seeded(1)).unwrap();
        assert!(out.winners.is_empty());
        assert_eq!(out.revenue(), Money::ZERO);
    }

    #[test]
    fn two_agent_cycle() {
        let out = circuit_auction(&[3.0, 1.0], &mut seeded(8)).unwrap();
        assert_eq!(out.successor, vec![1, 0]);
        assert_eq!(out.winners, vec![0]);
        assert_eq!(out.payments, vec![Money::from_f64(1.0), Money::ZERO]);
        assert_eq!(out.revenue(), Money::from_f64(1.0));
    }

    #[test]
    fn successor_map_is_a_single_cycle() {
        let out = circuit_auction(&[0.5; 9], &mut seeded(77)).unwrap();
        let mut at = 0;
        for step in 1..=9 {
            at = out.successor[at];
            assert_eq!(at == 0, step == 9);
        }
    }

    #[test]
    fn needs_two_agents() {
        assert!(circuit_auction(&[1.0], &mut seeded(0)).is_err());
        assert!(circuit_auction(&[1.0, -2.0], &mut seeded(0)).is_err());
    }
}
