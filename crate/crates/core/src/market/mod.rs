//! Two-sided data market and the auction primitives built on it: leakage feasibility,
//! extremal allocations, threshold payments, the circuit auction, the single-price revenue
//! benchmark, the VCG baseline, and the club-good mechanism with an exhaustive optimum.

mod benchmark;
mod circuit;
mod club_good;
mod double_auction;
mod extremal;
mod feasibility;
mod gain;
mod instance;
mod threshold;
mod vcg;

pub use benchmark::{
    alpha_beta_filter, auction_by_name, measure_competitiveness, opt_single_price, summarize, CircuitAuction,
    CompetitivenessReport, DigitalGoodsAuction, InstanceResult, OraclePostedPrice, SinglePrice, ValueSampler,
    VcgAuction,
};
pub use circuit::{circuit_auction, settle_circuit, CircuitOutcome};
pub use club_good::{
    club_good_bruteforce, club_good_mechanism, club_good_with_candidates, ClubGoodOptimum, ClubGoodOutcome,
    BRUTE_FORCE_MAX_AGENTS,
};
pub use double_auction::{run_double_auction, select_sellers, DoubleAuctionOutcome, SellerSelection};
pub use extremal::extremalize;
pub use feasibility::{check_feasibility, FeasibilityReport, Violation};
pub use gain::{GainFunction, SetFunction};
pub use instance::{Agent, Allocation, LeakageEdge, MarketInstance};
pub use threshold::{agent_threshold, threshold_payment, Threshold, THRESHOLD_TOLERANCE};
pub use vcg::{vcg_digital_good, VcgOutcome};
