//! Experiment files, the commands that run them, and the JSON/CSV they write.
//!
//! Configuration is TOML with three parts: `[mechanism]`, `[[clients]]` and `[experiment]`.
//! Unknown keys are rejected and errors name the file, line and field path. Each command run
//! writes its CSV files plus a `<mode>_seed<seed>.manifest.json` that records the schema
//! version, scenario hash and mode-specific metadata.

mod commands;
mod config;
mod record;

pub use commands::{
    check_mode, cmd_bench_competitive, cmd_eval_robustness, cmd_market, cmd_simulate, cmd_sweep_bids, run, MarketTrial,
    Output, RobustnessRow, RunOptions, DEFAULT_OUT_DIR,
};
pub use config::{
    load_config, parse_config, BenchConfig, ClientConfig, ExperimentConfig, MarketConfig, Mode, RobustnessConfig,
    ScenarioConfig, SweepConfig,
};
pub use record::{from_versioned_json, Manifest, RunRecord, SCHEMA_VERSION};

/// Text of the bundled three-client, six-round scenario.
pub const MNIST_LIKE_SCENARIO: &str = include_str!("../../scenarios/paper_mnist_like.toml");
