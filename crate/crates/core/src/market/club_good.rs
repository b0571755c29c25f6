//! Selling a jointly produced good whose cost depends on who is served.
//!
//! The sampling mechanism flips a fair coin per agent to form a candidate pool, ranks the pool
//! by bid, drops the lower half together with the median, and charges the rest the median bid.
//! For even pools the median is the lower of the two middle bids.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::check_bids;
use super::SetFunction;
use crate::error::{Error, Result};
use crate::money::Money;

/// Largest population the exhaustive optimum accepts.
pub const BRUTE_FORCE_MAX_AGENTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClubGoodOutcome {
    pub candidates: Vec<usize>,
    pub winners: Vec<usize>,
    /// Price charged to every winner; absent when nobody wins.
    pub price: Option<f64>,
    pub payments: Vec<Money>,
    /// Collected payments minus the cost of serving the winners.
    pub surplus: Money,
}

/// Splits a candidate pool ranked ascending by `(key, index)`. Returns the accepted agents and
/// the agent whose key sets the price: the one at 1-indexed rank `ceil(c / 2)`.
pub(crate) fn median_split(keys: &[f64], candidates: &[usize]) -> (Vec<usize>, Option<usize>) {
    let c = candidates.len();
    if c <= 1 {
        return (Vec::new(), None);
    }
    let mut ranked = candidates.to_vec();
    ranked.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    let cut = c.div_ceil(2);
    let mut accepted = ranked[cut..].to_vec();
    accepted.sort_unstable();
    (accepted, Some(ranked[cut - 1]))
}

pub fn club_good_with_candidates<G: SetFunction + ?Sized>(
    bids: &[f64],
    candidates: &[usize],
    cost: &G,
) -> Result<ClubGoodOutcome> {
    check_bids(bids)?;
    if let Some(&c) = candidates.iter().find(|&&c| c >= bids.len()) {
        return Err(Error::InvalidInput(format!("candidate {c} out of range")));
    }
    let (winners, price_setter) = median_split(bids, candidates);
    let price = price_setter.map(|p| bids[p]);
    let mut payments = vec![Money::ZERO; bids.len()];
    if let Some(p) = price {
        for &w in &winners {
            payments[w] = Money::from_f64(p);
        }
    }
    let surplus = payments.iter().sum::<Money>() - Money::from_f64(cost.eval(&winners));
    Ok(ClubGoodOutcome {
        candidates: candidates.to_vec(),
        winners,
        price,
        payments,
        surplus,
    })
}

/// Draws the candidate pool with one fair coin per agent, in index order, then settles.
pub fn club_good_mechanism<G, R>(bids: &[f64], cost: &G, rng: &mut R) -> Result<ClubGoodOutcome>
where
    G: SetFunction + ?Sized,
    R: Rng + ?Sized,
{
    let candidates: Vec<usize> = (0..bids.len()).filter(|_| rng.random_bool(0.5)).collect();
    club_good_with_candidates(bids, &candidates, cost)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClubGoodOptimum {
    pub surplus: Money,
    pub winners: Vec<usize>,
}

/// Exhaustive optimum of `sum_{i in A} b_i - g(A)` with every winner charged its full bid.
/// Ties keep the first set in mask order.
pub fn club_good_bruteforce<G: SetFunction + ?Sized>(bids: &[f64], cost: &G) -> Result<ClubGoodOptimum> {
    let n = bids.len();
    if n > BRUTE_FORCE_MAX_AGENTS {
        return Err(Error::SizeLimit {
            n,
            max: BRUTE_FORCE_MAX_AGENTS,
        });
    }
    check_bids(bids)?;
    let worth: Vec<Money> = bids.iter().map(|&b| Money::from_f64(b)).collect();
    let mut best: Option<ClubGoodOptimum> = None;
    let mut set = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        set.clear();
        set.extend((0..n).filter(|i| mask >> i & 1 == 1));
        let surplus = set.iter().map(|&i| worth[i]).sum::<Money>() - Money::from_f64(cost.eval(&set));
        if best.as_ref().is_none_or(|b| surplus > b.surplus) {
            best = Some(ClubGoodOptimum {
                surplus,
                winners: set.clone(),
            });
        }
    }
    Ok(best.expect("the empty set is always enumerated"))
}
