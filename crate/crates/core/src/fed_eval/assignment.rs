use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Who evaluates whose model. Entry `(i, j)` is set when client `j` receives model `i`.
///
/// The diagonal is always set. Sender and receiver sets are derived from the matrix on demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct EvaluationAssignment {
    k: usize,
    cells: Vec<bool>,
}

impl EvaluationAssignment {
    pub fn identity(k: usize) -> Self {
        let mut cells = vec![false; k * k];
        for i in 0..k {
            cells[i * k + i] = true;
        }
        EvaluationAssignment { k, cells }
    }

    pub fn full(k: usize) -> Self {
        EvaluationAssignment {
            k,
            cells: vec![true; k * k],
        }
    }

    /// Builds an assignment from rows; diagonal entries are forced on.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let k = rows.len();
        let mut cells = Vec::with_capacity(k * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidInput(format!(
                    "assignment row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            cells.extend(row.iter().enumerate().map(|(j, &a)| a || i == j));
        }
        Ok(EvaluationAssignment { k, cells })
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn get(&self, model: usize, evaluator: usize) -> bool {
        self.cells[model * self.k + evaluator]
    }

    /// `W_{i->}`: clients that receive and score model `i` (always includes `i`).
    pub fn evaluators_of(&self, model: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(move |&j| self.get(model, j))
    }

    /// `W_{->j}`: models that client `j` receives (always includes its own).
    pub fn models_received_by(&self, evaluator: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(move |&i| self.get(i, evaluator))
    }
}

impl TryFrom<Vec<Vec<u8>>> for EvaluationAssignment {
    type Error = String;

    fn try_from(rows: Vec<Vec<u8>>) -> std::result::Result<Self, String> {
        let k = rows.len();
        let mut cells = Vec::with_capacity(k * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(format!("assignment row {i} is not of length {k}"));
            }
            for (j, &v) in row.iter().enumerate() {
                match (v, i == j) {
                    (1, _) => cells.push(true),
                    (0, false) => cells.push(false),
                    (0, true) => return Err(format!("diagonal entry ({i},{i}) must be 1")),
                    _ => return Err(format!("entry ({i},{j}) must be 0 or 1")),
                }
            }
        }
        Ok(EvaluationAssignment { k, cells })
    }
}

impl From<EvaluationAssignment> for Vec<Vec<u8>> {
    fn from(a: EvaluationAssignment) -> Self {
        a.cells
            .chunks(a.k.max(1))
            .take(a.k)
            .map(|r| r.iter().map(|&b| b as u8).collect())
            .collect()
    }
}

/// Draws `a_ij ~ Bernoulli(thresh(b_i))` for `i != j`, with `a_ii = 1`.
///
/// One uniform is drawn per off-diagonal cell in row-major order and compared against the
/// success probability, whatever that probability is. Under a fixed generator state, raising
/// a bid under a non-decreasing `thresh` therefore only adds evaluators.
pub fn assign_evaluators<R, F>(bids: &[f64], thresh: F, rng: &mut R) -> Result<EvaluationAssignment>
where
    R: Rng + ?Sized,
    F: Fn(f64) -> f64,
{
    let k = bids.len();
    let probs = bids
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let p = thresh(b);
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                Err(Error::config(
                    "mechanism.thresh_fn",
                    format!("Thresh({b}) = {p} for client {i} lies outside [0, 1]"),
                ))
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cells = vec![false; k * k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                cells[i * k + j] = true;
            } else {
                let u: f64 = rng.random();
                cells[i * k + j] = u < probs[i];
            }
        }
    }
    Ok(EvaluationAssignment { k, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn zero_threshold_gives_identity() {
        let a = assign_evaluators(&[0.1, 0.5, 0.6], |_| 0.0, &mut seeded(1)).unwrap();
        assert_eq!(a, EvaluationAssignment::identity(3));
    }

    #[test]
    fn unit_threshold_gives_full_matrix() {
        let a = assign_evaluators(&[0.1, 0.5, 0.6, 0.0], |_| 1.0, &mut seeded(1)).unwrap();
        assert_eq!(a, EvaluationAssignment::full(4));
    }

    #[test]
    fn out_of_range_threshold_is_a_config_error() {
        let err = assign_evaluators(&[0.5, 2.0], |b| b, &mut seeded(1)).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { .. }));
    }

    #[test]
    fn derived_sets_match_matrix() {
        let a = EvaluationAssignment::from_rows(&[
            vec![false, true, false],
            vec![false, false, false],
            vec![true, true, false],
        ])
        .unwrap();
        assert_eq!(a.evaluators_of(0).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(a.evaluators_of(2).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(a.models_received_by(1).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(a.models_received_by(0).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn serializes_as_zero_one_rows() {
        let a = EvaluationAssignment::from_rows(&[vec![true, true], vec![false, true]]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[[1,1],[0,1]]");
        assert_eq!(serde_json::from_str::<EvaluationAssignment>(&json).unwrap(), a);
        assert!(serde_json::from_str::<EvaluationAssignment>("[[0,1],[0,1]]").is_err());
    }
}
