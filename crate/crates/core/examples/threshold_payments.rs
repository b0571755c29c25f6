//! Threshold payments for a monotone allocation rule: a winner pays the lowest report at which
//! it would still win. Shows that no misreport on a grid beats telling the truth.

use fedmarket::market::{agent_threshold, Threshold};

fn main() -> fedmarket::Result<()> {
    // Agent wins when its report clears a cutoff that depends on the others.
    let rule = |profile: &[f64], i: usize| {
        let others: f64 = profile
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v)
            .sum();
        profile[i] >= 0.25 * others
    };
    let values = [0.3, 0.7, 0.5, 0.1];
    for i in 0..values.len() {
        let t = agent_threshold(rule, i, &values, 0.0, 2.0)?;
        let utility_at = |report: f64| {
            let mut p = values.to_vec();
            p[i] = report;
            match (rule(&p, i), t) {
                (true, Threshold::At(price)) => values[i] - price,
                _ => 0.0,
            }
        };
        let best = (0..=50)
            .map(|k| utility_at(k as f64 * 0.04))
            .fold(f64::NEG_INFINITY, f64::max);
        println!(
            "agent {i}: value {:.2}, threshold {t:?}, truthful utility {:.4}, best grid utility {:.4}",
            values[i],
            utility_at(values[i]),
            best
        );
    }
    Ok(())
}
