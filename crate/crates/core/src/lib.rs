//! Auction-based payments for federated-learning model markets.
//!
//! Clients bid for access to the best model trained in a federation. Every round, peers score
//! each other's models, the server takes medians, matches each client with a random peer, and
//! hands the best model to clients whose reported gain beats their peer's, charging the peer's
//! gain. The crate simulates that protocol with synthetic learning curves and ships the
//! surrounding mechanism-design toolkit: the circuit auction and its single-price benchmark,
//! threshold payments, a VCG baseline, a club-good mechanism, and leakage-graph feasibility.
//!
//! The `harness` module and the `fedmarket` binary run configured experiments and write
//! JSON and CSV results.

pub mod client;
pub mod error;
pub mod fed_eval;
pub mod harness;
pub mod market;
pub mod mechanism;
pub mod money;
pub mod rng;

pub use error::{Error, Result};
pub use money::Money;
