//! Median peer evaluation against adversaries: five evaluators score one model of quality 0.5,
//! some of them inflating their report by 0.4.

use fedmarket::client::EvalStrategy;
use fedmarket::fed_eval::{compute_punishments, median_consensus, synthesize_reports, EvaluationAssignment};
use fedmarket::rng::seeded;

fn main() -> fedmarket::Result<()> {
    let m = 5;
    let quality = 0.5;
    let assignment = EvaluationAssignment::full(m);
    let qualities = vec![quality; m];
    for adversaries in 0..=m {
        let strategies: Vec<EvalStrategy> = (0..m)
            .map(|j| {
                if j < adversaries {
                    EvalStrategy::Adversarial { offset: 0.4 }
                } else {
                    EvalStrategy::Noisy { sigma: 0.02 }
                }
            })
            .collect();
        let reports = synthesize_reports(&assignment, &qualities, &qualities, &strategies, &mut seeded(3));
        let consensus = median_consensus(&reports, &assignment)?;
        let punish = |d: f64| d.abs();
        let fines = compute_punishments(&reports, &consensus, &assignment, punish)?;
        println!(
            "{adversaries} adversaries: consensus {:.4} (error {:.4}), fines {:?}",
            consensus.scores[0],
            (consensus.scores[0] - quality).abs(),
            fines.iter().map(|f| f.to_string()).collect::<Vec<_>>()
        );
    }
    Ok(())
}
