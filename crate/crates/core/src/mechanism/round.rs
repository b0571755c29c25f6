use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{allocation_decision, draw_matching, reported_gain, settle_round, Matching, MechanismConfig};
use crate::client::{emit_bid, round_utility, train_step, ClientState};
use crate::error::{Error, Result};
use crate::fed_eval::{fed_eval, EvaluationAssignment, ScoreReports};
use crate::money::Money;
use crate::rng::seeded;

/// Everything decided in one federated round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub round: usize,
    pub bids: Vec<f64>,
    pub assignment: EvaluationAssignment,
    pub reports: ScoreReports,
    /// Consensus score of each client's model, after training.
    pub scores: Vec<f64>,
    pub aggregate_scores: Vec<f64>,
    pub best_score: f64,
    pub best_owner: usize,
    /// Quality of the model handed to winners.
    pub transferred_quality: f64,
    pub matching: Matching,
    pub winners: Vec<usize>,
    pub auction_payments: Vec<Money>,
    pub punishments: Vec<Money>,
    pub transfers: Vec<Money>,
    /// Model quality at the end of the round.
    pub qualities: Vec<f64>,
    pub utilities: Vec<Money>,
}

impl RoundOutcome {
    pub fn is_winner(&self, client: usize) -> bool {
        self.winners.binary_search(&client).is_ok()
    }

    pub fn revenue(&self) -> Money {
        self.transfers.iter().sum()
    }

    /// Recomputes the winner set from the stored bids, scores and matching.
    pub fn recompute_winners(&self) -> Vec<usize> {
        (0..self.bids.len())
            .filter(|&i| {
                let peer = self.matching.peer(i);
                reported_gain(self.bids[i], self.scores[i], self.best_score)
                    > reported_gain(self.bids[peer], self.scores[peer], self.best_score)
            })
            .collect()
    }
}

/// Runs one round of the protocol in place: train, bid, evaluate, match, allocate, settle,
/// hand the best model to winners, and book utilities.
///
/// Exactly two `u64` draws are taken from `rng`; they seed the evaluation and matching
/// streams, so the parent stream advances identically whatever the bids are.
pub fn run_round<R: Rng + ?Sized>(
    clients: &mut [ClientState],
    config: &MechanismConfig,
    round: usize,
    rng: &mut R,
) -> Result<RoundOutcome> {
    let k = clients.len();
    if k != config.num_clients {
        return Err(Error::config(
            "mechanism.num_clients",
            format!("configured for {} clients, state has {k}", config.num_clients),
        ));
    }
    let eval_seed: u64 = rng.random();
    let match_seed: u64 = rng.random();

    for c in clients.iter_mut() {
        c.quality = train_step(c);
    }
    let bids: Vec<f64> = clients.iter().map(emit_bid).collect();

    let eval = fed_eval(clients, &bids, config, &mut seeded(eval_seed))?;
    let matching = draw_matching(k, config.matching_mode, &mut seeded(match_seed))?;
    let consensus = &eval.consensus;
    let decision = allocation_decision(
        &bids,
        &consensus.scores,
        consensus.best_score,
        &matching,
        config.payment_rule,
    )?;
    let transfers = settle_round(&decision, &eval.punishments)?;

    let transferred_quality = eval.aggregate_qualities[consensus.best_owner];
    let winners = decision.winner_indices();
    for &w in &winners {
        clients[w].quality = clients[w].quality.max(transferred_quality);
    }

    let utilities: Vec<Money> = clients
        .iter_mut()
        .zip(&transfers)
        .map(|(c, &t)| {
            let u = round_utility(c.valuation, c.quality, t);
            c.cumulative_utility += u;
            u
        })
        .collect();

    Ok(RoundOutcome {
        round,
        bids,
        scores: consensus.scores.clone(),
        aggregate_scores: consensus.aggregate_scores.clone(),
        best_score: consensus.best_score,
        best_owner: consensus.best_owner,
        transferred_quality,
        matching,
        winners,
        auction_payments: decision.auction_payments,
        punishments: eval.punishments,
        transfers,
        qualities: clients.iter().map(|c| c.quality).collect(),
        utilities,
        assignment: eval.assignment,
        reports: eval.reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn three_clients() -> Vec<ClientState> {
        [(0.1, 0.5), (0.5, 0.4), (0.6, 0.1)]
            .into_iter()
            .map(|(v, s)| ClientState::new(v, s))
            .collect()
    }

    #[test]
    fn free_round_only_self_evaluates_and_never_punishes() {
        let mut clients = three_clients();
        let cfg = MechanismConfig::new(3, 1);
        let out = run_round(&mut clients, &cfg, 0, &mut seeded(1)).unwrap();
        assert_eq!(out.punishments, vec![Money::ZERO; 3]);
        assert_eq!(out.assignment, EvaluationAssignment::identity(3));
        assert_eq!(out.bids, vec![0.1, 0.5, 0.6]);
        assert_eq!(out.recompute_winners(), out.winners);
    }

    #[test]
    fn identical_seed_identical_outcome() {
        let cfg = MechanismConfig::new(3, 1);
        let mut a = three_clients();
        let mut b = three_clients();
        let oa = run_round(&mut a, &cfg, 0, &mut seeded(42)).unwrap();
        let ob = run_round(&mut b, &cfg, 0, &mut seeded(42)).unwrap();
        assert_eq!(oa, ob);
        assert_eq!(a, b);
    }

    #[test]
    fn saturated_market_has_no_sale() {
        let mut clients: Vec<_> = three_clients()
            .into_iter()
            .map(|c| {
                c.with_quality(0.9).with_curve(crate::client::LearningCurve {
                    rate: 0.5,
                    ceiling_base: 0.9,
                    ceiling_slope: 0.0,
                })
            })
            .collect();
        let cfg = MechanismConfig::new(3, 1);
        let out = run_round(&mut clients, &cfg, 0, &mut seeded(3)).unwrap();
        assert!(out.winners.is_empty());
        assert_eq!(out.revenue(), Money::ZERO);
    }

    #[test]
    fn client_count_must_match_config() {
        let mut clients = three_clients();
        assert!(run_round(&mut clients, &MechanismConfig::new(4, 1), 0, &mut seeded(0)).is_err());
    }
}
