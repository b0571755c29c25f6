use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute bisection tolerance for threshold searches.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

/// Number of evenly spaced probes used to detect a non-monotone rule.
const MONOTONICITY_PROBES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Threshold {
    /// Smallest winning report, within [`THRESHOLD_TOLERANCE`].
    At(f64),
    /// The agent loses everywhere in the searched interval.
    Never,
}

impl Threshold {
    pub fn value(self) -> Option<f64> {
        match self {
            Threshold::At(v) => Some(v),
            Threshold::Never => None,
        }
    }
}

/// Infimum of the winning reports of a monotone single-parameter rule over `[low, high]`.
///
/// `wins(r)` must be an up-set in `r`. The returned value is a winning report at most
/// [`THRESHOLD_TOLERANCE`] above the true infimum.
pub fn threshold_payment<F>(wins: F, low: f64, high: f64) -> Result<Threshold>
where
    F: Fn(f64) -> bool,
{
    if !(low.is_finite() && high.is_finite() && low <= high) {
        return Err(Error::Search(format!("[{low}, {high}] is not a search interval")));
    }
    let win_low = wins(low);
    let win_high = wins(high);
    if win_low && !win_high {
        return Err(Error::ContractViolation(format!("wins at {low} but loses at {high}")));
    }
    let mut last_win: Option<f64> = None;
    for step in 0..=MONOTONICITY_PROBES {
        let r = low + (high - low) * step as f64 / MONOTONICITY_PROBES as f64;
        match (wins(r), last_win) {
            (true, None) => last_win = Some(r),
            (false, Some(w)) => {
                return Err(Error::ContractViolation(format!("wins at {w} but loses at {r}")));
            }
            _ => {}
        }
    }
    if win_low {
        return Ok(Threshold::At(low));
    }
    if !win_high {
        return Ok(Threshold::Never);
    }

    let (mut lo, mut hi) = (low, high);
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if wins(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold::At(hi))
}

/// Threshold of `agent` in `profile`, replacing only that agent's report.
pub fn agent_threshold<F>(rule: F, agent: usize, profile: &[f64], low: f64, high: f64) -> Result<Threshold>
where
    F: Fn(&[f64], usize) -> bool,
{
    if agent >= profile.len() {
        return Err(Error::InvalidInput(format!(
            "agent {agent} not in a profile of {}",
            profile.len()
        )));
    }
    let mut scratch = profile.to_vec();
    let cell = std::cell::RefCell::new(&mut scratch);
    threshold_payment(
        |r| {
            let mut p = cell.borrow_mut();
            p[agent] = r;
            rule(&p, agent)
        },
        low,
        high,
    )
}
