//! Bid-driven peer evaluation.
//!
//! Each round the server decides which peers see which models (higher bids mean more
//! exposure), collects scores, takes per-model medians, and punishes evaluators in
//! proportion to how far their reports sit from the medians.

mod assignment;
mod consensus;
mod punish;
mod reports;

pub use assignment::{assign_evaluators, EvaluationAssignment};
pub use consensus::{median, median_consensus, ConsensusResult};
pub use punish::compute_punishments;
pub use reports::{aggregate_qualities, synthesize_reports, ScoreReports};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::client::ClientState;
use crate::error::{Error, Result};
use crate::mechanism::MechanismConfig;
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FedEvalOutcome {
    pub assignment: EvaluationAssignment,
    pub reports: ScoreReports,
    pub consensus: ConsensusResult,
    pub punishments: Vec<Money>,
    /// True quality of each client's aggregate model.
    pub aggregate_qualities: Vec<f64>,
}

/// One full evaluation pass over the current client models.
pub fn fed_eval<R: Rng + ?Sized>(
    clients: &[ClientState],
    bids: &[f64],
    config: &MechanismConfig,
    rng: &mut R,
) -> Result<FedEvalOutcome> {
    if bids.len() != clients.len() {
        return Err(Error::InvalidInput(format!(
            "{} bids for {} clients",
            bids.len(),
            clients.len()
        )));
    }
    let qualities: Vec<f64> = clients.iter().map(|c| c.quality).collect();
    let shares: Vec<f64> = clients.iter().map(|c| c.data_share).collect();
    let strategies: Vec<_> = clients.iter().map(|c| c.eval_strategy).collect();

    let assignment = assign_evaluators(bids, |b| config.thresh_fn.eval(b), rng)?;
    let aggregate = aggregate_qualities(&assignment, &qualities, &shares, config.aggr_fn);
    let reports = synthesize_reports(&assignment, &qualities, &aggregate, &strategies, rng);
    let consensus = median_consensus(&reports, &assignment)?;
    let punishments = compute_punishments(&reports, &consensus, &assignment, |d| config.punish_fn.eval(d))?;
    Ok(FedEvalOutcome {
        assignment,
        reports,
        consensus,
        punishments,
        aggregate_qualities: aggregate,
    })
}
