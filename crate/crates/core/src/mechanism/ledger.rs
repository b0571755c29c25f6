use serde::{Deserialize, Serialize};

use crate::money::Money;

/// Running totals of what each client has paid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    /// Cumulative `t_i`, punishments included.
    pub transfers: Vec<Money>,
    /// Cumulative punishment part of `t_i`.
    pub punishments: Vec<Money>,
    pub wins: Vec<u32>,
    /// Sum of all transfers received by the server.
    pub revenue: Money,
}

impl Ledger {
    pub fn new(k: usize) -> Self {
        Ledger {
            transfers: vec![Money::ZERO; k],
            punishments: vec![Money::ZERO; k],
            wins: vec![0; k],
            revenue: Money::ZERO,
        }
    }

    pub fn record(&mut self, transfers: &[Money], punishments: &[Money], winners: &[usize]) {
        for (acc, &t) in self.transfers.iter_mut().zip(transfers) {
            *acc += t;
        }
        for (acc, &p) in self.punishments.iter_mut().zip(punishments) {
            *acc += p;
        }
        for &w in winners {
            self.wins[w] += 1;
        }
        self.revenue += transfers.iter().sum::<Money>();
    }
}
