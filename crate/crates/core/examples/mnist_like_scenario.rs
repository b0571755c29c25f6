//! Three clients with valuations 0.1, 0.5 and 0.6 and data shares 0.5, 0.4 and 0.1 play six
//! rounds with free evaluation and no punishment. Prints each client's quality trajectory and
//! what it paid.
//!
//!     cargo run --example mnist_like_scenario -- [seed]

use fedmarket::harness::{parse_config, MNIST_LIKE_SCENARIO};
use fedmarket::mechanism::run_simulation;
use std::path::Path;

fn main() -> fedmarket::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let config = parse_config(MNIST_LIKE_SCENARIO, Path::new("paper_mnist_like.toml"))?;
    let result = run_simulation(&config.mechanism_for(seed)?, &config.scenario())?;

    println!("seed {seed}");
    println!(
        "{:>5}  {:>22}  {:>22}  {:>22}",
        "round", "client 0", "client 1", "client 2"
    );
    for r in &result.rounds {
        let cells: Vec<String> = (0..3)
            .map(|i| {
                let mark = if r.is_winner(i) { "*" } else { " " };
                format!("q={:.4}{mark} t={}", r.qualities[i], r.transfers[i])
            })
            .collect();
        println!("{:>5}  {:>22}  {:>22}  {:>22}", r.round, cells[0], cells[1], cells[2]);
    }
    println!("(* = received the best model that round)");
    for (i, c) in result.final_clients.iter().enumerate() {
        println!(
            "client {i}: valuation {:.1}, wins {}, paid {}, utility {}",
            c.valuation, result.ledger.wins[i], result.ledger.transfers[i], c.cumulative_utility
        );
    }
    println!("server revenue {}", result.ledger.revenue);
    Ok(())
}
