//! Club-good mechanism versus the exhaustive optimum on random instances with a concave
//! production cost.

use fedmarket::market::{club_good_bruteforce, club_good_mechanism};
use fedmarket::rng::seeded;
use rand::Rng;

fn main() -> fedmarket::Result<()> {
    let mut rng = seeded(2024);
    let mut ratios = Vec::new();
    let mut empty = 0;
    for _ in 0..300 {
        let n = rng.random_range(4..=12);
        let bids: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let fixed = rng.random_range(0.0..1.0);
        let cost = move |a: &[usize]| {
            if a.is_empty() {
                0.0
            } else {
                fixed + 0.1 * (a.len() as f64).sqrt()
            }
        };
        let mech = club_good_mechanism(&bids, &cost, &mut rng)?;
        let opt = club_good_bruteforce(&bids, &cost)?;
        assert!(mech.surplus <= opt.surplus);
        if mech.surplus.to_f64() > 0.0 {
            ratios.push(opt.surplus.to_f64() / mech.surplus.to_f64());
        } else {
            empty += 1;
        }
    }
    ratios.sort_by(f64::total_cmp);
    let q = |p: f64| ratios[((ratios.len() - 1) as f64 * p) as usize];
    println!("instances with positive mechanism surplus: {}", ratios.len());
    println!(
        "optimum/mechanism: median {:.3}, p90 {:.3}, max {:.3}",
        q(0.5),
        q(0.9),
        q(1.0)
    );
    println!("instances where the mechanism earned nothing: {empty}");
    Ok(())
}
