use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::record::write_json;
use super::{Manifest, Mode, RunRecord, ScenarioConfig, SCHEMA_VERSION};
use crate::client::{deviation_sweep, EvalStrategy, SweepPoint};
use crate::error::{Error, Result};
use crate::fed_eval::{median_consensus, synthesize_reports, EvaluationAssignment};
use crate::market::{
    auction_by_name, check_feasibility, extremalize, measure_competitiveness, run_double_auction, CompetitivenessReport,
};
use crate::mechanism::run_simulation;
use crate::money::Money;
use crate::rng::{derive_seed, substream};

/// Where and how a command runs.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the configured seed list with this single seed.
    pub seed: Option<u64>,
    /// Overrides `experiment.out_dir`.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 or 1 runs everything on one thread.
    pub parallel: usize,
}

pub const DEFAULT_OUT_DIR: &str = "out";

/// Runs `mode` for every selected seed and returns the written files, ordered by seed position.
pub fn run(mode: Mode, config: &ScenarioConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    check_mode(config, mode)?;
    let seeds = match options.seed {
        Some(s) => vec![s],
        None => config.experiment.seeds.clone(),
    };
    let out = options
        .out_dir
        .clone()
        .or_else(|| config.experiment.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.parallel.max(1))
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    let written = pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| run_seed(mode, config, seed, &out))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(written.into_iter().flatten().collect())
}

fn run_seed(mode: Mode, config: &ScenarioConfig, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    log::info!("{mode}: seed {seed}");
    Ok(match mode {
        Mode::Simulate => cmd_simulate(config, seed, out)?.files,
        Mode::SweepBids => cmd_sweep_bids(config, seed, out)?.files,
        Mode::BenchCompetitive => cmd_bench_competitive(config, seed, out)?.files,
        Mode::EvalRobustness => cmd_eval_robustness(config, seed, out)?.files,
        Mode::Market => cmd_market(config, seed, out)?.files,
    })
}

/// Result of a command for one seed together with the files it wrote.
#[derive(Debug, Clone)]
pub struct Output<T> {
    pub value: T,
    pub files: Vec<PathBuf>,
}

pub fn check_mode(config: &ScenarioConfig, mode: Mode) -> Result<()> {
    if config.experiment.mode == mode {
        Ok(())
    } else {
        Err(Error::config(
            "experiment.mode",
            format!("configured for `{}`, not `{mode}`", config.experiment.mode),
        ))
    }
}

#[derive(Debug, Serialize)]
struct TrajectoryRow {
    round: usize,
    client: usize,
    quality: f64,
    bid: f64,
    winner: u8,
    transfer: Money,
    punishment: Money,
    utility: Money,
}

/// Writes `run_seed<seed>.json` and the per-round trajectory `trajectory_seed<seed>.csv`.
pub fn cmd_simulate(config: &ScenarioConfig, seed: u64, out: &Path) -> Result<Output<RunRecord>> {
    check_mode(config, Mode::Simulate)?;
    let mechanism = config.mechanism_for(seed)?;
    let result = run_simulation(&mechanism, &config.scenario())?;
    let record = RunRecord::new(config.hash(), seed, result);
    record
        .verify()
        .map_err(|e| Error::Invariant(format!("fresh run record: {e}")))?;

    let rows = record.rounds.iter().flat_map(|r| {
        (0..r.bids.len()).map(move |i| TrajectoryRow {
            round: r.round,
            client: i,
            quality: r.qualities[i],
            bid: r.bids[i],
            winner: u8::from(r.is_winner(i)),
            transfer: r.transfers[i],
            punishment: r.punishments[i],
            utility: r.utilities[i],
        })
    });
    let mut files = Files::new(out)?;
    files.csv(&format!("trajectory_seed{seed}.csv"), rows)?;
    let json = files.path(&format!("run_seed{seed}.json"));
    record.write(&json)?;
    files.push(json);
    files.manifest(config, Mode::Simulate, seed, json!({}))?;
    Ok(Output {
        value: record,
        files: files.into_inner(),
    })
}

/// Writes `sweep_seed<seed>.csv` with one row per grid bid; the manifest records the deviator
/// and its valuation.
pub fn cmd_sweep_bids(config: &ScenarioConfig, seed: u64, out: &Path) -> Result<Output<Vec<SweepPoint>>> {
    check_mode(config, Mode::SweepBids)?;
    let sweep = config
        .experiment
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("experiment.sweep", "section missing"))?;
    let mechanism = config.mechanism_for(seed)?;
    let scenario = config.scenario();
    let points = deviation_sweep(&mechanism, &scenario, sweep.deviator, &sweep.bid_grid)?;

    let mut files = Files::new(out)?;
    files.csv(&format!("sweep_seed{seed}.csv"), &points)?;
    let details = json!({
        "deviator": sweep.deviator,
        "valuation": scenario.clients[sweep.deviator].valuation,
    });
    files.manifest(config, Mode::SweepBids, seed, details)?;
    Ok(Output {
        value: points,
        files: files.into_inner(),
    })
}

#[derive(Debug, Serialize)]
struct BenchRow<'a> {
    instance_id: usize,
    mechanism: &'a str,
    revenue: Money,
    opt: Money,
    ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
struct BenchSummaryRow<'a> {
    mechanism: &'a str,
    trials: usize,
    filtered_out: usize,
    zero_revenue: usize,
    mean_revenue: f64,
    mean_opt: f64,
    ratio_of_means: Option<f64>,
    worst_ratio: Option<f64>,
}

/// Writes per-profile results to `bench_seed<seed>.csv` and one summary row per mechanism to
/// `bench_summary_seed<seed>.csv`. Every mechanism sees the same value profiles.
pub fn cmd_bench_competitive(
    config: &ScenarioConfig,
    seed: u64,
    out: &Path,
) -> Result<Output<Vec<CompetitivenessReport>>> {
    check_mode(config, Mode::BenchCompetitive)?;
    let bench = config
        .experiment
        .bench
        .as_ref()
        .ok_or_else(|| Error::config("experiment.bench", "section missing"))?;
    let reports = bench
        .mechanisms
        .iter()
        .map(|name| {
            let auction = auction_by_name(name)?;
            measure_competitiveness(
                auction.as_ref(),
                &bench.sampler,
                bench.agents,
                bench.trials,
                bench.alpha,
                seed,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = reports.iter().flat_map(|rep| {
        rep.instances.iter().map(|r| BenchRow {
            instance_id: r.instance_id,
            mechanism: &rep.mechanism,
            revenue: r.revenue,
            opt: r.opt,
            ratio: r.ratio,
        })
    });
    let summary = reports.iter().map(|rep| BenchSummaryRow {
        mechanism: &rep.mechanism,
        trials: rep.trials,
        filtered_out: rep.filtered_out,
        zero_revenue: rep.zero_revenue,
        mean_revenue: rep.mean_revenue,
        mean_opt: rep.mean_opt,
        ratio_of_means: rep.ratio_of_means,
        worst_ratio: rep.worst_ratio,
    });
    for rep in &reports {
        log::info!(
            "{}: ratio of means {:?}, worst {:?}, zero revenue on {} of {}",
            rep.mechanism,
            rep.ratio_of_means,
            rep.worst_ratio,
            rep.zero_revenue,
            rep.trials
        );
    }
    let mut files = Files::new(out)?;
    files.csv(&format!("bench_seed{seed}.csv"), rows)?;
    files.csv(&format!("bench_summary_seed{seed}.csv"), summary)?;
    files.manifest(config, Mode::BenchCompetitive, seed, json!({}))?;
    Ok(Output {
        value: reports,
        files: files.into_inner(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessRow {
    pub adversaries: usize,
    pub evaluators: usize,
    /// Largest `|consensus - honest quality|` over all instances.
    pub max_error: f64,
    pub mean_error: f64,
    /// Instances whose consensus fell outside the range of honest reports.
    pub outside_honest_range: usize,
}

/// Sweeps the number of adversarial evaluators from 0 to all of them and writes
/// `robustness_seed<seed>.csv`.
pub fn cmd_eval_robustness(config: &ScenarioConfig, seed: u64, out: &Path) -> Result<Output<Vec<RobustnessRow>>> {
    check_mode(config, Mode::EvalRobustness)?;
    let rob = config
        .experiment
        .robustness
        .as_ref()
        .ok_or_else(|| Error::config("experiment.robustness", "section missing"))?;
    let m = rob.evaluators;
    let assignment = EvaluationAssignment::full(m);
    let qualities = vec![rob.honest_quality; m];
    let honest = if rob.noise > 0.0 {
        EvalStrategy::Noisy { sigma: rob.noise }
    } else {
        EvalStrategy::Truthful
    };

    let rows = (0..=m)
        .into_par_iter()
        .map(|adversaries| {
            let strategies: Vec<EvalStrategy> = (0..m)
                .map(|j| {
                    if j < adversaries {
                        EvalStrategy::Adversarial { offset: rob.offset }
                    } else {
                        honest
                    }
                })
                .collect();
            let stream = derive_seed(seed, adversaries as u64);
            let mut max_error = 0.0f64;
            let mut total_error = 0.0;
            let mut outside = 0;
            for i in 0..rob.instances {
                let mut rng = substream(stream, i as u64);
                let reports = synthesize_reports(&assignment, &qualities, &qualities, &strategies, &mut rng);
                let consensus = median_consensus(&reports, &assignment)?;
                let error = (consensus.scores[0] - rob.honest_quality).abs();
                max_error = max_error.max(error);
                total_error += error;
                let honest_reports = reports.individual[0][adversaries..].iter().flatten();
                let (lo, hi) = honest_reports.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
                    (lo.min(r), hi.max(r))
                });
                if lo <= hi && !(lo..=hi).contains(&consensus.scores[0]) {
                    outside += 1;
                }
            }
            Ok(RobustnessRow {
                adversaries,
                evaluators: m,
                max_error,
                mean_error: total_error / rob.instances as f64,
                outside_honest_range: outside,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut files = Files::new(out)?;
    files.csv(&format!("robustness_seed{seed}.csv"), &rows)?;
    files.manifest(config, Mode::EvalRobustness, seed, json!({ "offset": rob.offset }))?;
    Ok(Output {
        value: rows,
        files: files.into_inner(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketTrial {
    pub trial: usize,
    pub sellers: usize,
    pub buyers_served: usize,
    pub gain: f64,
    pub buyer_payments: Money,
    pub seller_payments: Money,
    pub revenue: Money,
}

/// Runs the double auction `trials` times on the configured instance and writes
/// `market_seed<seed>.csv`. Every allocation is checked for feasibility, and its extremal form
/// for feasibility and unchanged revenue; a failure is an internal invariant violation.
pub fn cmd_market(config: &ScenarioConfig, seed: u64, out: &Path) -> Result<Output<Vec<MarketTrial>>> {
    check_mode(config, Mode::Market)?;
    let market = config
        .experiment
        .market
        .as_ref()
        .ok_or_else(|| Error::config("experiment.market", "section missing"))?;
    let instance = &market.instance;

    let rows = (0..market.trials)
        .into_par_iter()
        .map(|t| {
            let outcome = run_double_auction(instance, &mut substream(seed, t as u64))?;
            let alloc = &outcome.allocation;
            let report = check_feasibility(instance, alloc)?;
            if !report.feasible {
                return Err(Error::Invariant(format!(
                    "trial {t}: infeasible allocation {:?}",
                    report.violations
                )));
            }
            let extremal = extremalize(instance, alloc)?;
            if !check_feasibility(instance, &extremal)?.feasible || extremal.revenue() != alloc.revenue() {
                return Err(Error::Invariant(format!(
                    "trial {t}: extremal form changed the outcome"
                )));
            }
            Ok(MarketTrial {
                trial: t,
                sellers: alloc.participating.iter().filter(|&&p| p).count(),
                buyers_served: alloc.qualities.iter().filter(|&&q| q > 0.0).count(),
                gain: instance.gain_of(&alloc.participating),
                buyer_payments: alloc.buyer_transfers.iter().sum(),
                seller_payments: alloc.seller_transfers.iter().sum(),
                revenue: outcome.revenue,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let total: Money = rows.iter().map(|r| r.revenue).sum();
    let mut files = Files::new(out)?;
    files.csv(&format!("market_seed{seed}.csv"), &rows)?;
    files.manifest(config, Mode::Market, seed, json!({ "total_revenue": total }))?;
    Ok(Output {
        value: rows,
        files: files.into_inner(),
    })
}

/// Output directory plus the list of files written to it so far.
struct Files {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Files {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Files {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn push(&mut self, path: PathBuf) {
        self.written.push(path);
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = T>) -> Result<()> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        for row in rows {
            w.serialize(row).map_err(|e| csv_error(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.push(path);
        Ok(())
    }

    fn manifest(&mut self, config: &ScenarioConfig, mode: Mode, seed: u64, details: serde_json::Value) -> Result<()> {
        let path = self.path(&format!("{}_seed{seed}.manifest.json", mode.as_str()));
        let manifest = Manifest {
            schema_version: SCHEMA_VERSION,
            mode,
            seed,
            scenario_hash: config.hash(),
            files: self
                .written
                .iter()
                .filter_map(|p| p.file_name())
                .map(|n| n.to_string_lossy().into_owned())
                .collect(),
            details,
        };
        write_json(&path, &manifest)?;
        self.push(path);
        Ok(())
    }

    fn into_inner(self) -> Vec<PathBuf> {
        self.written
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Invariant(format!("writing {}: {other:?}", path.display())),
    }
}
