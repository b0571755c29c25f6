//! Circuit auction on i.i.d. uniform values: each agent faces the next one on a random cycle
//! and, if it bids more, buys at that agent's bid. Compares its revenue with the best single
//! posted price.

use fedmarket::market::{circuit_auction, measure_competitiveness, opt_single_price, CircuitAuction, ValueSampler};
use fedmarket::rng::seeded;

fn main() -> fedmarket::Result<()> {
    let bids = [0.9, 0.2, 0.65, 0.4, 0.8];
    let out = circuit_auction(&bids, &mut seeded(1))?;
    println!("bids {bids:?}");
    for (i, &next) in out.successor.iter().enumerate() {
        let verdict = if out.winners.contains(&i) {
            format!("wins, pays {}", out.payments[i])
        } else {
            "loses".into()
        };
        println!("  agent {i} vs agent {next}: {verdict}");
    }
    let opt = opt_single_price(&bids);
    println!(
        "revenue {}  best single price {:.2} -> {}",
        out.revenue(),
        opt.price,
        opt.revenue
    );

    let sampler = ValueSampler::Uniform { low: 0.0, high: 1.0 };
    for agents in [10, 100, 1000] {
        let rep = measure_competitiveness(&CircuitAuction, &sampler, agents, 2000, None, 7)?;
        println!(
            "n={agents:>4}: revenue per agent {:.4} (1/6 = {:.4}), OPT/revenue {:.3}, worst {:.3}",
            rep.mean_revenue / agents as f64,
            1.0 / 6.0,
            rep.ratio_of_means.unwrap_or(f64::NAN),
            rep.worst_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
