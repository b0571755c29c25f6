//! Is overbidding profitable? Client 2 (valuation 0.6) replays the six-round game with each
//! fixed bid on a grid while everyone else stays truthful; averaged over 200 seeds.

use fedmarket::client::deviation_sweep;
use fedmarket::harness::{parse_config, MNIST_LIKE_SCENARIO};
use std::path::Path;

const GRID: [f64; 7] = [0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0];
const SEEDS: u64 = 200;

fn main() -> fedmarket::Result<()> {
    let config = parse_config(MNIST_LIKE_SCENARIO, Path::new("paper_mnist_like.toml"))?;
    let scenario = config.scenario();
    let mut utility = [0.0; GRID.len()];
    let mut paid = [0.0; GRID.len()];
    let mut wins = [0u32; GRID.len()];
    for seed in 0..SEEDS {
        let points = deviation_sweep(&config.mechanism_for(seed)?, &scenario, 2, &GRID)?;
        for (j, p) in points.iter().enumerate() {
            utility[j] += p.cumulative_utility.to_f64() / SEEDS as f64;
            paid[j] += p.total_transfers.to_f64() / SEEDS as f64;
            wins[j] += p.wins;
        }
    }
    println!("{:>5} {:>12} {:>12} {:>10}", "bid", "utility", "paid", "wins/run");
    for (j, b) in GRID.iter().enumerate() {
        println!(
            "{b:>5.1} {:>12.6} {:>12.6} {:>10.3}",
            utility[j],
            paid[j],
            wins[j] as f64 / SEEDS as f64
        );
    }
    Ok(())
}
