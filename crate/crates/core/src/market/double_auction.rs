use rand::Rng;
use serde::{Deserialize, Serialize};

use super::club_good::median_split;
use super::{circuit_auction, Allocation, CircuitOutcome, MarketInstance};
use crate::error::{Error, Result};
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SellerSelection {
    pub candidates: Vec<usize>,
    pub accepted: Vec<usize>,
    /// Amount paid to each accepted seller; absent when nobody is accepted.
    pub price: Option<f64>,
}

/// Procurement mirror of the club-good rule, run on negated costs: a fair coin picks the
/// candidate sellers, the costlier half including the median is rejected, and the cheaper half
/// is paid the median cost.
pub fn select_sellers<R: Rng + ?Sized>(costs: &[f64], rng: &mut R) -> SellerSelection {
    let candidates: Vec<usize> = (0..costs.len()).filter(|_| rng.random_bool(0.5)).collect();
    let negated: Vec<f64> = costs.iter().map(|c| -c).collect();
    let (accepted, price_setter) = median_split(&negated, &candidates);
    SellerSelection {
        candidates,
        accepted,
        price: price_setter.map(|p| costs[p]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleAuctionOutcome {
    pub allocation: Allocation,
    pub revenue: Money,
    pub buyers: CircuitOutcome,
    pub sellers: SellerSelection,
}

/// Two-stage mechanism without leakage: a circuit auction decides which buyers are served and
/// at what unit price, the seller stage decides who contributes, and served buyers receive the
/// full gain `g(A)` paying their unit price times `g(A)`.
///
/// The buyer stage draws from `rng` first, then the seller stage.
pub fn run_double_auction<R: Rng + ?Sized>(instance: &MarketInstance, rng: &mut R) -> Result<DoubleAuctionOutcome> {
    instance.validate()?;
    if !instance.edges.is_empty() {
        return Err(Error::UnsupportedScope(
            "the double auction requires an empty leakage graph".into(),
        ));
    }
    if instance.buyers() < 2 {
        return Err(Error::DegenerateMarket(format!(
            "{} buyer(s); the forward stage needs at least 2",
            instance.buyers()
        )));
    }

    let buyers = circuit_auction(&instance.buyer_values, rng)?;
    let sellers = select_sellers(&instance.seller_costs, rng);

    let mut allocation = Allocation::empty(instance);
    for &s in &sellers.accepted {
        allocation.participating[s] = true;
        allocation.seller_transfers[s] = Money::from_f64(sellers.price.unwrap_or(0.0));
    }
    let gain = instance.gain_of(&allocation.participating);
    if gain > 0.0 {
        for &b in &buyers.winners {
            allocation.qualities[b] = gain;
            let unit_price = instance.buyer_values[buyers.successor[b]];
            allocation.buyer_transfers[b] = Money::from_f64(gain * unit_price);
        }
    }
    Ok(DoubleAuctionOutcome {
        revenue: allocation.revenue(),
        allocation,
        buyers,
        sellers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{check_feasibility, circuit_auction, Agent, GainFunction, LeakageEdge};
    use crate::rng::seeded;

    #[test]
    fn no_supply_means_no_sale() {
        let inst = MarketInstance::new(vec![], vec![1.0, 2.0, 3.0], GainFunction::constant(1.0));
        let out = run_double_auction(&inst, &mut seeded(1)).unwrap();
        assert!(out.allocation.qualities.iter().all(|&q| q == 0.0));
        assert!(out.allocation.buyer_transfers.iter().all(|t| t.is_zero()));
        assert_eq!(out.revenue, Money::ZERO);
    }

    #[test]
    fn single_buyer_is_degenerate() {
        let inst = MarketInstance::new(vec![0.0], vec![1.0], GainFunction::constant(1.0));
        assert!(matches!(
            run_double_auction(&inst, &mut seeded(1)),
            Err(Error::DegenerateMarket(_))
        ));
    }

    #[test]
    fn leakage_is_out_of_scope() {
        let mut inst = MarketInstance::new(vec![0.0], vec![1.0, 2.0], GainFunction::constant(1.0));
        inst.edges.push(LeakageEdge {
            from: Agent::Buyer(0),
            to: 1,
        });
        assert!(matches!(
            run_double_auction(&inst, &mut seeded(1)),
            Err(Error::UnsupportedScope(_))
        ));
    }

    #[test]
    fn free_supply_with_unit_gain_reproduces_circuit_revenue() {
        let buyers = vec![1.0, 2.0, 3.0, 4.0];
        let inst = MarketInstance::new(vec![0.0; 6], buyers.clone(), GainFunction::constant(1.0));
        let mut checked = 0;
        for seed in 0..50 {
            let expected = circuit_auction(&buyers, &mut seeded(seed)).unwrap().revenue();
            let out = run_double_auction(&inst, &mut seeded(seed)).unwrap();
            if out.sellers.accepted.is_empty() {
                assert_eq!(out.revenue, Money::ZERO);
            } else {
                assert_eq!(out.revenue, expected);
                checked += 1;
            }
            assert!(check_feasibility(&inst, &out.allocation).unwrap().feasible);
        }
        assert!(checked > 20);
    }

    #[test]
    fn accepted_sellers_are_paid_at_least_their_cost() {
        let costs = [0.4, 0.1, 0.9, 0.3, 0.6, 0.2, 0.8];
        for seed in 0..50 {
            let sel = select_sellers(&costs, &mut seeded(seed));
            for &s in &sel.accepted {
                assert!(sel.price.unwrap() >= costs[s]);
            }
        }
    }
}
