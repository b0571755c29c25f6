use serde::{Deserialize, Serialize};

use super::{run_round, Ledger, MechanismConfig, RoundOutcome};
use crate::client::ClientState;
use crate::error::{Error, Result};
use crate::money::Money;
use crate::rng::seeded;

/// Initial client population of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub clients: Vec<ClientState>,
}

impl Scenario {
    pub fn new(clients: Vec<ClientState>) -> Self {
        Scenario { clients }
    }

    pub fn validate(&self, config: &MechanismConfig) -> Result<()> {
        if self.clients.len() != config.num_clients {
            return Err(Error::config(
                "mechanism.num_clients",
                format!(
                    "{} clients configured but {} defined",
                    config.num_clients,
                    self.clients.len()
                ),
            ));
        }
        for (i, c) in self.clients.iter().enumerate() {
            c.validate(&format!("clients[{i}]"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub rounds: Vec<RoundOutcome>,
    pub ledger: Ledger,
    pub final_clients: Vec<ClientState>,
}

impl SimulationResult {
    pub fn cumulative_utilities(&self) -> Vec<Money> {
        self.final_clients.iter().map(|c| c.cumulative_utility).collect()
    }
}

/// Runs `config.num_rounds` rounds from the scenario's initial state, seeded by
/// `config.rng_seed`.
pub fn run_simulation(config: &MechanismConfig, scenario: &Scenario) -> Result<SimulationResult> {
    config.validate()?;
    scenario.validate(config)?;

    let mut clients = scenario.clients.clone();
    let mut ledger = Ledger::new(clients.len());
    let mut rng = seeded(config.rng_seed);
    let mut rounds = Vec::with_capacity(config.num_rounds);
    for round in 0..config.num_rounds {
        let outcome = run_round(&mut clients, config, round, &mut rng)?;
        ledger.record(&outcome.transfers, &outcome.punishments, &outcome.winners);
        rounds.push(outcome);
    }
    Ok(SimulationResult {
        rounds,
        ledger,
        final_clients: clients,
    })
}
