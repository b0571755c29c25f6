//! The per-round auction: every client is compared against a randomly matched peer and wins
//! the best available model when its reported gain strictly exceeds the peer's.

mod allocation;
mod config;
mod ledger;
mod matching;
mod round;
mod simulation;

pub use allocation::{allocation_decision, reported_gain, settle_round, AllocationDecision};
pub use config::{AggrFn, MatchingMode, MechanismConfig, PaymentRule, PunishFn, ThreshFn};
pub use ledger::Ledger;
pub use matching::{draw_matching, Matching};
pub use round::{run_round, RoundOutcome};
pub use simulation::{run_simulation, Scenario, SimulationResult};
