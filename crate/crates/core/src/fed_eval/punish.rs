use super::{ConsensusResult, EvaluationAssignment, ScoreReports};
use crate::error::{Error, Result};
use crate::money::Money;

/// Charges every evaluator `punish(d)` for each of its reports that deviates from the
/// consensus by `d`, over both individual and aggregate scores.
pub fn compute_punishments<F>(
    reports: &ScoreReports,
    consensus: &ConsensusResult,
    assignment: &EvaluationAssignment,
    punish: F,
) -> Result<Vec<Money>>
where
    F: Fn(f64) -> f64,
{
    if punish(0.0) != 0.0 {
        return Err(Error::config("mechanism.punish_fn", "Punish(0) must equal 0"));
    }
    let charge = |d: f64| -> Result<Money> {
        let p = punish(d);
        if p.is_finite() && p >= 0.0 {
            Ok(Money::from_f64(p))
        } else {
            Err(Error::config(
                "mechanism.punish_fn",
                format!("Punish({d}) = {p} is not a non-negative amount"),
            ))
        }
    };

    let k = assignment.len();
    let mut out = vec![Money::ZERO; k];
    for (evaluator, total) in out.iter_mut().enumerate() {
        for model in assignment.models_received_by(evaluator) {
            if let Some(s) = reports.individual[model][evaluator] {
                *total += charge(s - consensus.scores[model])?;
            }
            if let Some(s) = reports.aggregated[model][evaluator] {
                *total += charge(s - consensus.aggregate_scores[model])?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fed_eval::median_consensus;

    fn reports_with(individual: Vec<Vec<Option<f64>>>) -> ScoreReports {
        let aggregated = individual.clone();
        ScoreReports { individual, aggregated }
    }

    #[test]
    fn zero_punishment_yields_zero() {
        let r = reports_with(vec![vec![Some(0.1), Some(0.9)], vec![Some(0.3), Some(0.4)]]);
        let a = EvaluationAssignment::full(2);
        let c = median_consensus(&r, &a).unwrap();
        assert_eq!(compute_punishments(&r, &c, &a, |_| 0.0).unwrap(), vec![Money::ZERO; 2]);
    }

    #[test]
    fn single_deviator_pays_its_deviation() {
        let mut individual = vec![vec![Some(0.5); 3]; 3];
        individual[0][2] = Some(0.7);
        let r = ScoreReports {
            individual,
            aggregated: vec![vec![Some(0.6); 3]; 3],
        };
        let a = EvaluationAssignment::full(3);
        let c = median_consensus(&r, &a).unwrap();
        assert_eq!(c.scores[0], 0.5);
        let p = compute_punishments(&r, &c, &a, f64::abs).unwrap();
        assert_eq!(p, vec![Money::ZERO, Money::ZERO, Money::from_f64(0.2)]);
    }

    #[test]
    fn nonzero_at_zero_is_rejected() {
        let r = reports_with(vec![vec![Some(0.5)]]);
        let a = EvaluationAssignment::identity(1);
        let c = median_consensus(&r, &a).unwrap();
        assert!(matches!(
            compute_punishments(&r, &c, &a, |d| d.abs() + 0.1),
            Err(Error::InvalidConfig { .. })
        ));
    }
}
