//! Two-sided data market: sellers with costs contribute to a coverage gain function, buyers
//! are served by a circuit auction, and the allocation is checked against the feasibility
//! constraints before and after being made extremal.

use fedmarket::market::{check_feasibility, extremalize, run_double_auction, GainFunction, MarketInstance};
use fedmarket::rng::seeded;

fn main() -> fedmarket::Result<()> {
    let instance = MarketInstance::new(
        vec![0.05, 0.2, 0.1, 0.4],
        vec![0.9, 0.3, 0.6, 0.75, 0.2],
        GainFunction::WeightedCoverage {
            weights: vec![0.3, 0.25, 0.2, 0.15, 0.1],
            covers: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]],
        },
    );
    for seed in 0..5 {
        let out = run_double_auction(&instance, &mut seeded(seed))?;
        let alloc = &out.allocation;
        let feasible = check_feasibility(&instance, alloc)?.feasible;
        let extremal = extremalize(&instance, alloc)?;
        println!(
            "seed {seed}: sellers {:?} paid {:?} each, buyers served {:?}, revenue {}, feasible {feasible}, extremal revenue {}",
            out.sellers.accepted,
            out.sellers.price,
            out.buyers.winners,
            out.revenue,
            extremal.revenue()
        );
    }
    Ok(())
}
