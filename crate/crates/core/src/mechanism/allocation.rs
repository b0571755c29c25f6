use serde::{Deserialize, Serialize};

use super::{Matching, PaymentRule};
use crate::error::{Error, Result};
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationDecision {
    pub winners: Vec<bool>,
    /// Auction part of each client's transfer; zero for losers.
    pub auction_payments: Vec<Money>,
}

impl AllocationDecision {
    pub fn winner_indices(&self) -> Vec<usize> {
        self.winners
            .iter()
            .enumerate()
            .filter(|(_, &w)| w)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Value a client places on receiving the best model, as reported: `bid * (best - score)`.
pub fn reported_gain(bid: f64, score: f64, best_score: f64) -> f64 {
    bid * (best_score - score)
}

/// Client `i` wins iff `b_i (ŝ - s_i) > b_π(i) (ŝ - s_π(i))`. Ties lose, and so does any
/// client matched to itself.
pub fn allocation_decision(
    bids: &[f64],
    scores: &[f64],
    best_score: f64,
    matching: &Matching,
    rule: PaymentRule,
) -> Result<AllocationDecision> {
    let k = bids.len();
    if scores.len() != k || matching.len() != k {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {k} bids, {} scores, matching over {}",
            scores.len(),
            matching.len()
        )));
    }
    if let Some((i, b)) = bids.iter().enumerate().find(|(_, b)| !(b.is_finite() && **b >= 0.0)) {
        return Err(Error::InvalidInput(format!(
            "bid {b} of client {i} is not finite and non-negative"
        )));
    }

    let mut winners = vec![false; k];
    let mut auction_payments = vec![Money::ZERO; k];
    for i in 0..k {
        let peer = matching.peer(i);
        let own = reported_gain(bids[i], scores[i], best_score);
        let rival = reported_gain(bids[peer], scores[peer], best_score);
        if own > rival {
            winners[i] = true;
            auction_payments[i] = Money::from_f64(match rule {
                PaymentRule::PeerGain => rival,
                PaymentRule::OwnGain => reported_gain(bids[peer], scores[i], best_score),
            });
        }
    }
    Ok(AllocationDecision {
        winners,
        auction_payments,
    })
}

/// `t_i = auction_payment_i + p_i` for winners and `t_i = p_i` otherwise.
pub fn settle_round(decision: &AllocationDecision, punishments: &[Money]) -> Result<Vec<Money>> {
    if punishments.len() != decision.winners.len() {
        return Err(Error::InvalidInput(format!(
            "{} punishments for {} clients",
            punishments.len(),
            decision.winners.len()
        )));
    }
    Ok(decision
        .winners
        .iter()
        .zip(&decision.auction_payments)
        .zip(punishments)
        .map(|((&won, &pay), &p)| if won { pay + p } else { p })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[usize]) -> Matching {
        Matching::new(p.to_vec()).unwrap()
    }

    #[test]
    fn three_client_example() {
        let d = allocation_decision(
            &[0.1, 0.5, 0.6],
            &[0.9, 0.7, 0.8],
            0.95,
            &m(&[1, 2, 0]),
            PaymentRule::PeerGain,
        )
        .unwrap();
        assert_eq!(d.winner_indices(), vec![1, 2]);
        // oracle: 0.6 * (0.95 - 0.8) and 0.1 * (0.95 - 0.9)
        assert_eq!(
            d.auction_payments,
            vec![Money::ZERO, Money::from_f64(0.09), Money::from_f64(0.005)]
        );
        let t = settle_round(&d, &[Money::ZERO; 3]).unwrap();
        assert_eq!(t, d.auction_payments);
    }

    #[test]
    fn own_gain_variant_charges_peer_bid_on_own_gap() {
        let d = allocation_decision(
            &[0.1, 0.5, 0.6],
            &[0.9, 0.7, 0.8],
            0.95,
            &m(&[1, 2, 0]),
            PaymentRule::OwnGain,
        )
        .unwrap();
        assert_eq!(d.winner_indices(), vec![1, 2]);
        assert_eq!(d.auction_payments[1], Money::from_f64(0.6 * (0.95 - 0.7)));
        assert_eq!(d.auction_payments[2], Money::from_f64(0.1 * (0.95 - 0.8)));
    }

    #[test]
    fn saturated_scores_mean_no_winners() {
        let d = allocation_decision(&[0.3, 0.9, 0.2], &[0.8; 3], 0.8, &m(&[2, 0, 1]), PaymentRule::PeerGain).unwrap();
        assert!(d.winner_indices().is_empty());
        assert!(d.auction_payments.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn ties_lose() {
        let d = allocation_decision(&[0.5, 0.5], &[0.3, 0.3], 0.9, &m(&[1, 0]), PaymentRule::PeerGain).unwrap();
        assert!(d.winner_indices().is_empty());
    }

    #[test]
    fn fixed_point_loses() {
        let d = allocation_decision(&[1.0, 0.0], &[0.1, 0.1], 0.9, &m(&[0, 1]), PaymentRule::PeerGain).unwrap();
        assert!(d.winner_indices().is_empty());
    }

    #[test]
    fn length_mismatch_and_bad_bids() {
        assert!(allocation_decision(&[0.1], &[0.1, 0.2], 0.5, &m(&[1, 0]), PaymentRule::PeerGain).is_err());
        assert!(allocation_decision(&[-0.1, 0.2], &[0.1, 0.2], 0.5, &m(&[1, 0]), PaymentRule::PeerGain).is_err());
    }

    #[test]
    fn losers_pay_only_punishments() {
        let d = AllocationDecision {
            winners: vec![false; 3],
            auction_payments: vec![Money::ZERO; 3],
        };
        let p: Vec<Money> = [0.1, 0.2, 0.3].into_iter().map(Money::from_f64).collect();
        assert_eq!(settle_round(&d, &p).unwrap(), p);

        let all = AllocationDecision {
            winners: vec![true; 3],
            auction_payments: vec![Money::ZERO; 3],
        };
        assert_eq!(settle_round(&all, &[Money::ZERO; 3]).unwrap(), vec![Money::ZERO; 3]);
    }
}
