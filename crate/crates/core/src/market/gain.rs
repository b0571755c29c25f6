use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real-valued function of a set of agents, given as sorted distinct indices.
pub trait SetFunction {
    fn eval(&self, set: &[usize]) -> f64;
}

impl<F: Fn(&[usize]) -> f64> SetFunction for F {
    fn eval(&self, set: &[usize]) -> f64 {
        self(set)
    }
}

/// Model quality produced by a set of participating sellers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GainFunction {
    /// `g(A) = marginals[0] + ... + marginals[|A|-1]`; marginals past the end count as 0.
    ConcaveOfCardinality { marginals: Vec<f64> },
    /// `g(A)` is the total weight of universe elements covered by some seller in `A`.
    WeightedCoverage { weights: Vec<f64>, covers: Vec<Vec<usize>> },
}

impl GainFunction {
    /// `g(A) = c` for every non-empty `A`.
    pub fn constant(value: f64) -> Self {
        GainFunction::ConcaveOfCardinality { marginals: vec![value] }
    }

    pub fn validate(&self, sellers: usize) -> Result<()> {
        match self {
            GainFunction::ConcaveOfCardinality { marginals } => {
                if marginals.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
                    return Err(Error::InvalidInstance(
                        "marginals must be finite and non-negative".into(),
                    ));
                }
                if marginals.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::InvalidInstance("marginals must be non-increasing".into()));
                }
            }
            GainFunction::WeightedCoverage { weights, covers } => {
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(Error::InvalidInstance(
                        "coverage weights must be finite and non-negative".into(),
                    ));
                }
                if covers.len() != sellers {
                    return Err(Error::InvalidInstance(format!(
                        "{} coverage sets for {sellers} sellers",
                        covers.len()
                    )));
                }
                if let Some(e) = covers.iter().flatten().find(|&&e| e >= weights.len()) {
                    return Err(Error::InvalidInstance(format!("coverage element {e} outside universe")));
                }
            }
        }
        Ok(())
    }
}

impl SetFunction for GainFunction {
    fn eval(&self, set: &[usize]) -> f64 {
        match self {
            GainFunction::ConcaveOfCardinality { marginals } => {
                marginals.iter().take(set.len()).fold(0.0, |a, m| a + m)
            }
            GainFunction::WeightedCoverage { weights, covers } => {
                let mut covered = vec![false; weights.len()];
                for &s in set {
                    for &e in &covers[s] {
                        covered[e] = true;
                    }
                }
                covered
                    .iter()
                    .zip(weights)
                    .filter(|(c, _)| **c)
                    .fold(0.0, |a, (_, w)| a + w)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
        (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
    }

    #[test]
    fn empty_set_has_zero_gain() {
        assert_eq!(GainFunction::constant(0.7).eval(&[]), 0.0);
        let cov = GainFunction::WeightedCoverage {
            weights: vec![1.0, 2.0],
            covers: vec![vec![0], vec![0, 1]],
        };
        assert_eq!(cov.eval(&[]), 0.0);
        assert_eq!(cov.eval(&[0]), 1.0);
        assert_eq!(cov.eval(&[0, 1]), 3.0);
    }

    #[test]
    fn validation() {
        let bad = GainFunction::ConcaveOfCardinality {
            marginals: vec![0.1, 0.3],
        };
        assert!(bad.validate(2).is_err());
        let cov = GainFunction::WeightedCoverage {
            weights: vec![1.0],
            covers: vec![vec![1]],
        };
        assert!(cov.validate(1).is_err());
    }

    proptest! {
        // Brute-force check of monotonicity and submodularity over all pairs A ⊆ B.
        #[test]
        fn coverage_is_monotone_submodular(
            weights in proptest::collection::vec(0.0f64..5.0, 1..6),
            raw in proptest::collection::vec(proptest::collection::vec(0usize..6, 0..4), 1..5),
        ) {
            let u = weights.len();
            let covers: Vec<Vec<usize>> = raw.into_iter().map(|c| c.into_iter().map(|e| e % u).collect()).collect();
            let n = covers.len();
            let g = GainFunction::WeightedCoverage { weights, covers };
            for a in subsets(n) {
                for b in subsets(n) {
                    if !a.iter().all(|x| b.contains(x)) { continue; }
                    prop_assert!(g.eval(&a) <= g.eval(&b) + 1e-12);
                    for x in 0..n {
                        if b.contains(&x) { continue; }
                        let mut ax = a.clone(); ax.push(x); ax.sort();
                        let mut bx = b.clone(); bx.push(x); bx.sort();
                        prop_assert!(g.eval(&ax) - g.eval(&a) + 1e-9 >= g.eval(&bx) - g.eval(&b));
                    }
                }
            }
        }
    }
}
