use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EvaluationAssignment;
use crate::client::EvalStrategy;
use crate::mechanism::AggrFn;

/// Raw peer scores, indexed `[model][evaluator]`. An entry is present exactly where the
/// assignment is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReports {
    /// `s_i^j`: evaluator `j`'s score of client `i`'s own model.
    pub individual: Vec<Vec<Option<f64>>>,
    /// `ŝ_i^j`: evaluator `j`'s score of client `i`'s aggregate model.
    pub aggregated: Vec<Vec<Option<f64>>>,
}

impl ScoreReports {
    pub fn len(&self) -> usize {
        self.individual.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individual.is_empty()
    }
}

/// True quality of each client's aggregate, built from the models it received.
pub fn aggregate_qualities(
    assignment: &EvaluationAssignment,
    qualities: &[f64],
    data_shares: &[f64],
    aggr: AggrFn,
) -> Vec<f64> {
    (0..assignment.len())
        .map(|owner| {
            let members: Vec<(f64, f64)> = assignment
                .models_received_by(owner)
                .map(|m| (qualities[m], data_shares[m]))
                .collect();
            aggr.aggregate(&members)
        })
        .collect()
}

/// Simulates what every evaluator reports, given the true model qualities.
///
/// Two noise draws are taken for every `(model, evaluator)` cell whether or not it is
/// assigned, so the generator advances by the same amount for any assignment.
pub fn synthesize_reports<R: Rng + ?Sized>(
    assignment: &EvaluationAssignment,
    qualities: &[f64],
    aggregate: &[f64],
    strategies: &[EvalStrategy],
    rng: &mut R,
) -> ScoreReports {
    let k = assignment.len();
    let mut individual = vec![vec![None; k]; k];
    let mut aggregated = vec![vec![None; k]; k];
    for model in 0..k {
        for evaluator in 0..k {
            let n1: f64 = rng.random_range(-1.0..1.0);
            let n2: f64 = rng.random_range(-1.0..1.0);
            if assignment.get(model, evaluator) {
                let strategy = strategies[evaluator];
                individual[model][evaluator] = Some(strategy.report(qualities[model], n1));
                aggregated[model][evaluator] = Some(strategy.report(aggregate[model], n2));
            }
        }
    }
    ScoreReports { individual, aggregated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn truthful_reports_equal_qualities() {
        let q = [0.3, 0.5, 0.9];
        let a = EvaluationAssignment::full(3);
        let agg = aggregate_qualities(&a, &q, &[1.0; 3], AggrFn::Max);
        let r = synthesize_reports(&a, &q, &agg, &[EvalStrategy::Truthful; 3], &mut seeded(3));
        for evaluator in 0..3 {
            let column: Vec<f64> = (0..3).map(|m| r.individual[m][evaluator].unwrap()).collect();
            assert_eq!(column, q);
        }
    }

    #[test]
    fn adversary_shifts_only_its_own_report() {
        let q = [0.5, 0.5, 0.5];
        let a = EvaluationAssignment::full(3);
        let agg = aggregate_qualities(&a, &q, &[1.0; 3], AggrFn::Max);
        let strategies = [
            EvalStrategy::Truthful,
            EvalStrategy::Adversarial { offset: 0.4 },
            EvalStrategy::Truthful,
        ];
        let r = synthesize_reports(&a, &q, &agg, &strategies, &mut seeded(3));
        assert_eq!(r.individual[0], vec![Some(0.5), Some(0.9), Some(0.5)]);
    }

    #[test]
    fn max_aggregate_over_full_assignment() {
        let q = [0.3, 0.5, 0.9];
        let a = EvaluationAssignment::full(3);
        let agg = aggregate_qualities(&a, &q, &[0.5, 0.4, 0.1], AggrFn::Max);
        let r = synthesize_reports(&a, &q, &agg, &[EvalStrategy::Truthful; 3], &mut seeded(3));
        for row in &r.aggregated {
            assert!(row.iter().all(|&s| s == Some(0.9)));
        }
    }

    #[test]
    fn absent_exactly_where_unassigned() {
        let a = EvaluationAssignment::from_rows(&[vec![true, false], vec![true, true]]).unwrap();
        let q = [0.2, 0.7];
        let agg = aggregate_qualities(&a, &q, &[0.5, 0.5], AggrFn::Max);
        // client 0 received {0, 1}; client 1 received {1}.
        assert_eq!(agg, vec![0.7, 0.7]);
        let r = synthesize_reports(&a, &q, &agg, &[EvalStrategy::Noisy { sigma: 0.3 }; 2], &mut seeded(9));
        assert!(r.individual[0][1].is_none() && r.aggregated[0][1].is_none());
        for m in 0..2 {
            for e in 0..2 {
                if let Some(v) = r.individual[m][e] {
                    assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }
}
