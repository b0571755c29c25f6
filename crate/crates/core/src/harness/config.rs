use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::de::{DeTable, DeValue};

use crate::client::{BidStrategy, ClientState, EvalStrategy, LearningCurve};
use crate::error::{Error, Result};
use crate::market::{auction_by_name, MarketInstance, ValueSampler};
use crate::mechanism::{MechanismConfig, Scenario};

/// One experiment file: the mechanism, the client population and what to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Required by `simulate` and `sweep-bids`.
    #[serde(default)]
    pub mechanism: Option<MechanismConfig>,
    #[serde(default)]
    pub clients: Vec<ClientConfig>,
    pub experiment: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClientConfig {
    pub valuation: f64,
    pub data_share: f64,
    #[serde(default)]
    pub initial_quality: f64,
    #[serde(default)]
    pub curve: LearningCurve,
    #[serde(default)]
    pub bid_strategy: BidStrategy,
    #[serde(default)]
    pub eval_strategy: EvalStrategy,
}

impl ClientConfig {
    pub fn to_state(&self) -> ClientState {
        ClientState::new(self.valuation, self.data_share)
            .with_quality(self.initial_quality)
            .with_curve(self.curve)
            .with_bid_strategy(self.bid_strategy)
            .with_eval_strategy(self.eval_strategy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    SweepBids,
    BenchCompetitive,
    EvalRobustness,
    Market,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::SweepBids => "sweep-bids",
            Mode::BenchCompetitive => "bench-competitive",
            Mode::EvalRobustness => "eval-robustness",
            Mode::Market => "market",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub bench: Option<BenchConfig>,
    #[serde(default)]
    pub robustness: Option<RobustnessConfig>,
    #[serde(default)]
    pub market: Option<MarketConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub deviator: usize,
    pub bid_grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    /// Any of `circuit`, `opt-price`, `vcg`.
    pub mechanisms: Vec<String>,
    pub sampler: ValueSampler,
    pub agents: usize,
    pub trials: usize,
    /// Keep only profiles whose benchmark revenue is at least `alpha` times the top value.
    #[serde(default)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobustnessConfig {
    /// Evaluators scoring the single model under test.
    pub evaluators: usize,
    /// Shift applied by every adversarial evaluator.
    pub offset: f64,
    pub honest_quality: f64,
    /// Half-width of the uniform noise on honest reports; 0 makes them identical.
    #[serde(default)]
    pub noise: f64,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    pub instance: MarketInstance,
    pub trials: usize,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let exp = &self.experiment;
        if exp.seeds.is_empty() {
            return Err(Error::config("experiment.seeds", "at least one seed is required"));
        }
        let needs = |present: bool, field: &str| {
            if present {
                Ok(())
            } else {
                Err(Error::config(field, format!("required when mode = \"{}\"", exp.mode)))
            }
        };
        match exp.mode {
            Mode::Simulate => needs(self.mechanism.is_some(), "mechanism")?,
            Mode::SweepBids => {
                needs(self.mechanism.is_some(), "mechanism")?;
                needs(exp.sweep.is_some(), "experiment.sweep")?;
            }
            Mode::BenchCompetitive => needs(exp.bench.is_some(), "experiment.bench")?,
            Mode::EvalRobustness => needs(exp.robustness.is_some(), "experiment.robustness")?,
            Mode::Market => needs(exp.market.is_some(), "experiment.market")?,
        }

        if let Some(mechanism) = &self.mechanism {
            mechanism.validate()?;
            self.scenario().validate(mechanism)?;
        }
        if let Some(sweep) = &exp.sweep {
            if sweep.deviator >= self.clients.len() {
                return Err(Error::config(
                    "experiment.sweep.deviator",
                    format!(
                        "client {} does not exist ({} clients)",
                        sweep.deviator,
                        self.clients.len()
                    ),
                ));
            }
            if sweep.bid_grid.is_empty() {
                return Err(Error::config("experiment.sweep.bid_grid", "grid is empty"));
            }
            if let Some(i) = sweep.bid_grid.iter().position(|b| !(b.is_finite() && *b >= 0.0)) {
                return Err(Error::config(
                    format!("experiment.sweep.bid_grid[{i}]"),
                    "bids must be finite and non-negative",
                ));
            }
        }
        if let Some(bench) = &exp.bench {
            if bench.mechanisms.is_empty() {
                return Err(Error::config("experiment.bench.mechanisms", "no mechanism listed"));
            }
            for (i, name) in bench.mechanisms.iter().enumerate() {
                if let Err(e) = auction_by_name(name) {
                    return Err(Error::config(
                        format!("experiment.bench.mechanisms[{i}]"),
                        e.to_string(),
                    ));
                }
            }
            bench.sampler.validate("experiment.bench.sampler")?;
            if bench.agents < 2 {
                return Err(Error::config(
                    "experiment.bench.agents",
                    "at least 2 agents are required",
                ));
            }
            if bench.trials == 0 {
                return Err(Error::config("experiment.bench.trials", "at least 1 trial is required"));
            }
            if bench.alpha.is_some_and(|a| !(a.is_finite() && a > 0.0)) {
                return Err(Error::config("experiment.bench.alpha", "must be positive"));
            }
        }
        if let Some(rob) = &exp.robustness {
            if rob.evaluators == 0 {
                return Err(Error::config(
                    "experiment.robustness.evaluators",
                    "at least 1 evaluator",
                ));
            }
            if !rob.offset.is_finite() {
                return Err(Error::config("experiment.robustness.offset", "must be finite"));
            }
            if !(0.0..=1.0).contains(&rob.honest_quality) {
                return Err(Error::config(
                    "experiment.robustness.honest_quality",
                    "must lie in [0, 1]",
                ));
            }
            if !(rob.noise.is_finite() && rob.noise >= 0.0) {
                return Err(Error::config("experiment.robustness.noise", "must be non-negative"));
            }
            if rob.instances == 0 {
                return Err(Error::config("experiment.robustness.instances", "at least 1 instance"));
            }
        }
        if let Some(market) = &exp.market {
            market
                .instance
                .validate()
                .map_err(|e| Error::config("experiment.market.instance", e.to_string()))?;
            if market.trials == 0 {
                return Err(Error::config(
                    "experiment.market.trials",
                    "at least 1 trial is required",
                ));
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> Scenario {
        Scenario::new(self.clients.iter().map(ClientConfig::to_state).collect())
    }

    /// Mechanism configuration seeded with `seed`.
    pub fn mechanism_for(&self, seed: u64) -> Result<MechanismConfig> {
        let mut m = self
            .mechanism
            .clone()
            .ok_or_else(|| Error::config("mechanism", "section missing"))?;
        m.rng_seed = seed;
        Ok(m)
    }

    /// Hex SHA-256 of the canonical JSON form, so formatting changes in the source file do not
    /// change it.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("configuration always serializes");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}

/// Parses and validates configuration text; `path` only labels error messages.
pub fn parse_config(text: &str, path: &Path) -> Result<ScenarioConfig> {
    let parse_err = |line, field: String, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        field,
        message,
    };
    let doc = DeTable::parse(text).map_err(|e| {
        parse_err(
            e.span().map(|s| line_of(text, s)),
            String::new(),
            e.message().to_string(),
        )
    })?;
    let root = DeValue::Table(doc.get_ref().clone());

    let config: ScenarioConfig = serde_path_to_error::deserialize(toml::Deserializer::from(doc)).map_err(|e| {
        let field = e.path().to_string();
        let field = if field == "." { String::new() } else { field };
        let line = e
            .inner()
            .span()
            .map(|s| line_of(text, s))
            .or_else(|| locate(&root, &field).map(|s| line_of(text, s)));
        parse_err(line, field, e.inner().message().to_string())
    })?;

    config.validate().map_err(|e| match e {
        Error::InvalidConfig { field, message } => Error::Validation {
            path: path.to_path_buf(),
            line: locate(&root, &field).map(|s| line_of(text, s)),
            field,
            message,
        },
        other => other,
    })?;
    Ok(config)
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    let end = span.start.min(text.len());
    text.as_bytes()[..end].iter().filter(|&&b| b == b'\n').count() + 1
}

/// Span of the deepest node of `field` (e.g. `clients[1].data_share`) present in the document.
fn locate(root: &DeValue<'_>, field: &str) -> Option<Range<usize>> {
    let mut node = root;
    let mut span = None;
    for part in field.split('.').filter(|p| !p.is_empty()) {
        let (key, indices) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        let mut next = if key.is_empty() { Some(node) } else { None };
        if !key.is_empty() {
            match node.get(key) {
                Some(v) => {
                    span = Some(v.span());
                    next = Some(v.get_ref());
                }
                None => break,
            }
        }
        for idx in indices.split(['[', ']']).filter_map(|s| s.parse::<usize>().ok()) {
            match next.and_then(|n| n.get(idx)) {
                Some(v) => {
                    span = Some(v.span());
                    next = Some(v.get_ref());
                }
                None => {
                    next = None;
                    break;
                }
            }
        }
        match next {
            Some(n) => node = n,
            None => break,
        }
    }
    span
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = include_str!("../../scenarios/paper_mnist_like.toml");

    fn parse(text: &str) -> Result<ScenarioConfig> {
        parse_config(text, Path::new("test.toml"))
    }

    #[test]
    fn bundled_three_client_scenario() {
        let cfg = parse(BASE).unwrap();
        let m = cfg.mechanism.as_ref().unwrap();
        assert_eq!(m.num_clients, 3);
        assert_eq!(m.num_rounds, 6);
        let thetas: Vec<f64> = cfg.clients.iter().map(|c| c.valuation).collect();
        let shares: Vec<f64> = cfg.clients.iter().map(|c| c.data_share).collect();
        assert_eq!(thetas, vec![0.1, 0.5, 0.6]);
        assert_eq!(shares, vec![0.5, 0.4, 0.1]);
        assert_eq!(m.punish_fn.eval(0.3), 0.0);
        assert_eq!(m.thresh_fn.eval(0.7), 0.0);
        assert_eq!(cfg.experiment.mode, Mode::Simulate);
    }

    #[test]
    fn single_client_names_the_field_and_line() {
        let text = BASE.replace("num_clients = 3", "num_clients = 1");
        let err = parse(&text).unwrap_err();
        let Error::Validation { field, line, .. } = &err else {
            panic!("unexpected {err}")
        };
        assert_eq!(field, "mechanism.num_clients");
        let expected = BASE.lines().position(|l| l.starts_with("num_clients")).unwrap() + 1;
        assert_eq!(*line, Some(expected));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn duplicate_keys_fail_to_parse() {
        let text = BASE.replace("num_rounds = 6", "num_rounds = 6\nnum_rounds = 7");
        let err = parse(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(_), .. }), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = BASE.replace("num_rounds = 6", "num_rounds = 6\nlearning_rate = 0.1");
        let err = parse(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        assert!(err.to_string().contains("learning_rate"), "{err}");
    }

    #[test]
    fn client_field_path_points_into_the_array() {
        let text = BASE.replacen("data_share = 0.4", "data_share = 1.5", 1);
        let err = parse(&text).unwrap_err();
        let Error::Validation { field, line, .. } = &err else {
            panic!("unexpected {err}")
        };
        assert_eq!(field, "clients[1].data_share");
        let expected = text.lines().position(|l| l.contains("data_share = 1.5")).unwrap() + 1;
        assert_eq!(*line, Some(expected));
    }

    #[test]
    fn type_errors_carry_the_path() {
        let text = BASE.replace("num_rounds = 6", "num_rounds = \"six\"");
        let err = parse(&text).unwrap_err();
        let Error::Parse { field, line, .. } = &err else {
            panic!("unexpected {err}")
        };
        assert_eq!(field, "mechanism.num_rounds");
        assert!(line.is_some());
    }

    #[test]
    fn empty_seed_list_is_invalid() {
        let text = BASE.replace("seeds = [42]", "seeds = []");
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("experiment.seeds"), "{err}");
    }

    #[test]
    fn sweep_deviator_must_exist() {
        let text = format!("{BASE}\n[experiment.sweep]\ndeviator = 3\nbid_grid = [0.0]\n");
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("experiment.sweep.deviator"), "{err}");
        let text = format!("{BASE}\n[experiment.sweep]\ndeviator = 0\nbid_grid = []\n");
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("experiment.sweep.bid_grid"), "{err}");
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = parse(BASE).unwrap();
        let b = parse(&BASE.replace("num_rounds = 6", "num_rounds    =    6   # six")).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
