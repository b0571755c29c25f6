use serde::{Deserialize, Serialize};

use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VcgOutcome {
    pub allocated: Vec<bool>,
    pub payments: Vec<Money>,
}

/// Welfare-maximizing allocation of a freely replicable good: every participant is served.
fn efficient_allocation(participants: &[bool]) -> Vec<bool> {
    participants.to_vec()
}

fn welfare_of_others(worth: &[Money], served: &[bool], excluded: usize) -> Money {
    worth
        .iter()
        .zip(served)
        .enumerate()
        .filter(|&(j, (_, &s))| j != excluded && s)
        .map(|(_, (&w, _))| w)
        .sum()
}

/// Clarke-pivot payments: each agent pays the welfare the others lose because it takes part.
pub fn vcg_digital_good(values: &[f64]) -> VcgOutcome {
    let n = values.len();
    let worth: Vec<Money> = values.iter().map(|&v| Money::from_f64(v)).collect();
    let everyone = vec![true; n];
    let allocated = efficient_allocation(&everyone);
    let payments = (0..n)
        .map(|i| {
            let mut without = everyone.clone();
            without[i] = false;
            let served_without = efficient_allocation(&without);
            welfare_of_others(&worth, &served_without, i) - welfare_of_others(&worth, &allocated, i)
        })
        .collect();
    VcgOutcome { allocated, payments }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clients_pay_nothing() {
        let out = vcg_digital_good(&[0.1, 0.5, 0.6]);
        assert_eq!(out.payments, vec![Money::ZERO; 3]);
        assert!(out.allocated.iter().all(|&a| a));
    }

    #[test]
    fn empty_market() {
        let out = vcg_digital_good(&[]);
        assert!(out.payments.is_empty());
    }
}
