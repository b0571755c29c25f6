use serde::{Deserialize, Serialize};

use super::{EvaluationAssignment, ScoreReports};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusResult {
    /// Median score of each client's own model.
    pub scores: Vec<f64>,
    /// Median score of each client's aggregate model.
    pub aggregate_scores: Vec<f64>,
    /// Largest aggregate score.
    pub best_score: f64,
    /// Lowest client index attaining `best_score`.
    pub best_owner: usize,
}

/// Median of a non-empty sample; the mean of the two middle values for even counts.
pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

fn column_median(
    matrix: &[Vec<Option<f64>>],
    assignment: &EvaluationAssignment,
    model: usize,
    what: &str,
) -> Result<f64> {
    let mut sample: Vec<f64> = assignment
        .evaluators_of(model)
        .filter_map(|j| matrix[model][j])
        .collect();
    median(&mut sample).ok_or_else(|| Error::Invariant(format!("no {what} reports for model {model}")))
}

pub fn median_consensus(reports: &ScoreReports, assignment: &EvaluationAssignment) -> Result<ConsensusResult> {
    let k = assignment.len();
    if reports.individual.len() != k || reports.aggregated.len() != k {
        return Err(Error::InvalidInput(format!(
            "reports cover {} models, assignment {k}",
            reports.individual.len()
        )));
    }
    let scores = (0..k)
        .map(|i| column_median(&reports.individual, assignment, i, "individual"))
        .collect::<Result<Vec<_>>>()?;
    let aggregate_scores = (0..k)
        .map(|i| column_median(&reports.aggregated, assignment, i, "aggregate"))
        .collect::<Result<Vec<_>>>()?;

    let mut best_owner = 0;
    for (i, &s) in aggregate_scores.iter().enumerate() {
        if s > aggregate_scores[best_owner] {
            best_owner = i;
        }
    }
    let best_score = aggregate_scores.get(best_owner).copied().unwrap_or(0.0);
    Ok(ConsensusResult {
        scores,
        aggregate_scores,
        best_score,
        best_owner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_and_even_medians() {
        assert_eq!(median(&mut [0.9, 0.3, 0.5]), Some(0.5));
        assert_eq!(median(&mut [0.6, 0.4]), Some(0.5));
        assert_eq!(median(&mut []), None);
    }

    #[test]
    fn two_outliers_among_five() {
        assert_eq!(median(&mut [1.0, 0.7, 0.7, 1.0, 0.7]), Some(0.7));
    }

    #[test]
    fn ties_for_best_go_to_lowest_index() {
        let reports = ScoreReports {
            individual: vec![vec![Some(0.2), None], vec![None, Some(0.4)]],
            aggregated: vec![vec![Some(0.8), None], vec![None, Some(0.8)]],
        };
        let c = median_consensus(&reports, &EvaluationAssignment::identity(2)).unwrap();
        assert_eq!(c.best_owner, 0);
        assert_eq!(c.best_score, 0.8);
        assert_eq!(c.scores, vec![0.2, 0.4]);
    }
}
