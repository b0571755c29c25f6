use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fedmarket::harness::{load_config, run, Mode, RunOptions};

#[derive(Parser)]
#[command(name = "fedmarket", version, about = "Run federated model-market experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multi-round simulation: run record JSON plus per-round trajectory CSV
    Simulate(Args),
    /// Replay a simulation once per fixed bid of the deviating client
    SweepBids(Args),
    /// Compare digital-goods auctions against the best single posted price
    BenchCompetitive(Args),
    /// Consensus error of median peer evaluation against adversarial evaluators
    EvalRobustness(Args),
    /// Repeated double auctions on a configured data market
    Market(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Experiment file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Run only this seed instead of the configured list
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, overriding experiment.out_dir
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for independent seeds, grid points and trials
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FEDMARKET_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (mode, args) = match cli.command {
        Command::Simulate(a) => (Mode::Simulate, a),
        Command::SweepBids(a) => (Mode::SweepBids, a),
        Command::BenchCompetitive(a) => (Mode::BenchCompetitive, a),
        Command::EvalRobustness(a) => (Mode::EvalRobustness, a),
        Command::Market(a) => (Mode::Market, a),
    };
    let options = RunOptions {
        seed: args.seed,
        out_dir: args.out,
        parallel: args.parallel,
    };
    match load_config(&args.config).and_then(|cfg| run(mode, &cfg, &options)) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
