use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::Mode;
use crate::error::{Error, Result};
use crate::mechanism::{Ledger, RoundOutcome, SimulationResult};
use crate::money::Money;

/// Version of every JSON document written by the harness.
pub const SCHEMA_VERSION: u32 = 1;

/// Full trace of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub schema_version: u32,
    pub scenario_hash: String,
    pub seed: u64,
    pub rounds: Vec<RoundOutcome>,
    pub ledger: Ledger,
    pub cumulative_utilities: Vec<Money>,
}

impl RunRecord {
    pub fn new(scenario_hash: String, seed: u64, result: SimulationResult) -> Self {
        RunRecord {
            schema_version: SCHEMA_VERSION,
            scenario_hash,
            seed,
            cumulative_utilities: result.cumulative_utilities(),
            rounds: result.rounds,
            ledger: result.ledger,
        }
    }

    /// Replays the per-round figures and checks they add up to the stored totals.
    pub fn verify(&self) -> Result<()> {
        let k = self.cumulative_utilities.len();
        let mut utilities = vec![Money::ZERO; k];
        let mut ledger = Ledger::new(k);
        for (r, round) in self.rounds.iter().enumerate() {
            if round.utilities.len() != k || round.transfers.len() != k || round.punishments.len() != k {
                return Err(Error::Record(format!("round {r} does not cover {k} clients")));
            }
            if round.winners.iter().any(|&w| w >= k) {
                return Err(Error::Record(format!("round {r} names a winner outside 0..{k}")));
            }
            for (acc, &u) in utilities.iter_mut().zip(&round.utilities) {
                *acc += u;
            }
            ledger.record(&round.transfers, &round.punishments, &round.winners);
        }
        if utilities != self.cumulative_utilities {
            return Err(Error::Record(
                "cumulative utilities differ from the sum of round utilities".into(),
            ));
        }
        if ledger != self.ledger {
            return Err(Error::Record("ledger differs from the sum of round transfers".into()));
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: RunRecord = from_versioned_json(text)?;
        record.verify()?;
        Ok(record)
    }
}

/// Index of the files written by one command invocation for one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    pub mode: Mode,
    pub seed: u64,
    pub scenario_hash: String,
    pub files: Vec<String>,
    /// Mode-specific metadata, such as the deviator's valuation in a bid sweep.
    #[serde(default)]
    pub details: serde_json::Value,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        from_versioned_json(&text)
    }
}

/// Rejects documents of another schema version before looking at the rest.
pub fn from_versioned_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Record(e.to_string()))?;
    let found = value
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Record("missing schema_version".into()))?;
    if found != u64::from(SCHEMA_VERSION) {
        return Err(Error::SchemaMismatch {
            found: u32::try_from(found).unwrap_or(u32::MAX),
            expected: SCHEMA_VERSION,
        });
    }
    serde_json::from_value(value).map_err(|e| Error::Record(e.to_string()))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| match e.io_error_kind() {
        Some(kind) => Error::io(path, kind.into()),
        None => Error::Invariant(format!("serializing {}: {e}", path.display())),
    })?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
