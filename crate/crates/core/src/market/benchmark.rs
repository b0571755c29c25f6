//! Revenue benchmarks for digital-goods auctions.
//!
//! The benchmark is the best single posted price in hindsight, `max_p p * #{i : v_i >= p}`.
//! A mechanism's competitive ratio on a profile is benchmark revenue over mechanism revenue.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{circuit_auction, vcg_digital_good};
use crate::error::{Error, Result};
use crate::money::Money;
use crate::rng::{substream, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinglePrice {
    pub price: f64,
    pub revenue: Money,
}

/// Best single posted price; ties go to the lower price. An empty profile yields `(0, 0)`.
pub fn opt_single_price(values: &[f64]) -> SinglePrice {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut best = SinglePrice {
        price: 0.0,
        revenue: Money::ZERO,
    };
    let mut i = 0;
    while i < n {
        let price = sorted[i];
        let buyers = (n - i) as i64;
        let revenue = Money::from_f64(price) * buyers;
        if i == 0 || revenue > best.revenue {
            best = SinglePrice { price, revenue };
        }
        while i < n && sorted[i] == price {
            i += 1;
        }
    }
    best
}

/// True when the profile lies in the domain of `(alpha, beta)`-competitiveness, i.e. the
/// benchmark is at least `alpha` times the highest value.
pub fn alpha_beta_filter(values: &[f64], alpha: f64) -> bool {
    let max = values.iter().copied().fold(0.0, f64::max);
    opt_single_price(values).revenue.to_f64() >= alpha * max
}

/// A digital-goods auction measured against the benchmark.
pub trait DigitalGoodsAuction: Sync {
    fn name(&self) -> &str;
    fn revenue(&self, bids: &[f64], rng: &mut SimRng) -> Result<Money>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CircuitAuction;

impl DigitalGoodsAuction for CircuitAuction {
    fn name(&self) -> &str {
        "circuit"
    }
    fn revenue(&self, bids: &[f64], rng: &mut SimRng) -> Result<Money> {
        Ok(circuit_auction(bids, rng)?.revenue())
    }
}

/// Posts the benchmark price computed from the true values. Not truthful; a yardstick.
#[derive(Debug, Clone, Copy, Default)]
pub struct OraclePostedPrice;

impl DigitalGoodsAuction for OraclePostedPrice {
    fn name(&self) -> &str {
        "opt-price"
    }
    fn revenue(&self, bids: &[f64], _rng: &mut SimRng) -> Result<Money> {
        Ok(opt_single_price(bids).revenue)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VcgAuction;

impl DigitalGoodsAuction for VcgAuction {
    fn name(&self) -> &str {
        "vcg"
    }
    fn revenue(&self, bids: &[f64], _rng: &mut SimRng) -> Result<Money> {
        Ok(vcg_digital_good(bids).payments.iter().sum())
    }
}

pub fn auction_by_name(name: &str) -> Result<Box<dyn DigitalGoodsAuction>> {
    match name {
        "circuit" => Ok(Box::new(CircuitAuction)),
        "opt-price" => Ok(Box::new(OraclePostedPrice)),
        "vcg" => Ok(Box::new(VcgAuction)),
        other => Err(Error::InvalidInput(format!(
            "unknown mechanism `{other}` (expected circuit, opt-price or vcg)"
        ))),
    }
}

/// Distribution of i.i.d. agent values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ValueSampler {
    Uniform { low: f64, high: f64 },
    Exponential { rate: f64 },
    Constant { value: f64 },
}

impl ValueSampler {
    pub fn validate(&self, field: &str) -> Result<()> {
        let ok = match *self {
            ValueSampler::Uniform { low, high } => low.is_finite() && high.is_finite() && 0.0 <= low && low < high,
            ValueSampler::Exponential { rate } => rate.is_finite() && rate > 0.0,
            ValueSampler::Constant { value } => value.is_finite() && value >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(field, format!("invalid value distribution {self:?}")))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match *self {
            ValueSampler::Uniform { low, high } => (0..n).map(|_| rng.random_range(low..high)).collect(),
            ValueSampler::Exponential { rate } => {
                let exp = Exp::new(rate).expect("validated rate");
                (0..n).map(|_| exp.sample(rng)).collect()
            }
            ValueSampler::Constant { value } => vec![value; n],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub instance_id: usize,
    pub revenue: Money,
    pub opt: Money,
    /// `opt / revenue`; absent when the mechanism raised nothing.
    pub ratio: Option<f64>,
    /// False when the profile failed the `alpha` filter and was left out of the statistics.
    pub counted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitivenessReport {
    pub mechanism: String,
    pub trials: usize,
    /// Profiles excluded by the `alpha` filter.
    pub filtered_out: usize,
    /// Counted profiles on which the mechanism raised no revenue.
    pub zero_revenue: usize,
    pub mean_revenue: f64,
    pub mean_opt: f64,
    /// `mean_opt / mean_revenue`; absent when no revenue was raised at all.
    pub ratio_of_means: Option<f64>,
    /// Largest per-profile ratio among profiles with positive revenue.
    pub worst_ratio: Option<f64>,
    pub instances: Vec<InstanceResult>,
}

/// Runs `mechanism` on `trials` sampled profiles of `agents` values each.
///
/// Trial `t` draws from its own stream derived from `(seed, t)`, so results do not depend on
/// how trials are spread across threads.
pub fn measure_competitiveness(
    mechanism: &dyn DigitalGoodsAuction,
    sampler: &ValueSampler,
    agents: usize,
    trials: usize,
    alpha: Option<f64>,
    seed: u64,
) -> Result<CompetitivenessReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is required".into()));
    }
    sampler.validate("sampler")?;
    let instances = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t as u64);
            let values = sampler.sample(agents, &mut rng);
            let counted = alpha.is_none_or(|a| alpha_beta_filter(&values, a));
            let revenue = mechanism.revenue(&values, &mut rng)?;
            let opt = opt_single_price(&values).revenue;
            let ratio = (revenue > Money::ZERO).then(|| opt.to_f64() / revenue.to_f64());
            Ok(InstanceResult {
                instance_id: t,
                revenue,
                opt,
                ratio,
                counted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(mechanism.name(), instances))
}

pub fn summarize(mechanism: &str, instances: Vec<InstanceResult>) -> CompetitivenessReport {
    let counted: Vec<&InstanceResult> = instances.iter().filter(|r| r.counted).collect();
    let n = counted.len();
    let total_revenue: Money = counted.iter().map(|r| r.revenue).sum();
    let total_opt: Money = counted.iter().map(|r| r.opt).sum();
    let mean = |m: Money| if n == 0 { 0.0 } else { m.to_f64() / n as f64 };
    let worst_ratio = counted
        .iter()
        .filter_map(|r| r.ratio)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    CompetitivenessReport {
        mechanism: mechanism.to_string(),
        trials: instances.len(),
        filtered_out: instances.len() - n,
        zero_revenue: counted.iter().filter(|r| r.revenue == Money::ZERO).count(),
        mean_revenue: mean(total_revenue),
        mean_opt: mean(total_opt),
        ratio_of_means: (total_revenue > Money::ZERO).then(|| total_opt.to_f64() / total_revenue.to_f64()),
        worst_ratio,
        instances,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_opt(values: &[f64]) -> f64 {
        values
            .iter()
            .map(|&p| p * values.iter().filter(|&&v| v >= p).count() as f64)
            .fold(0.0, f64::max)
    }

    #[test]
    fn single_price_examples() {
        let p = opt_single_price(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p.revenue, Money::from_f64(6.0));
        assert_eq!(p.price, 2.0);
        assert_eq!(
            opt_single_price(&[5.0]),
            SinglePrice {
                price: 5.0,
                revenue: Money::from_f64(5.0)
            }
        );
        assert_eq!(opt_single_price(&[0.0, 0.0]).revenue, Money::ZERO);
        assert_eq!(opt_single_price(&[2.0, 2.0, 1.0]).revenue, Money::from_f64(4.0));
    }

    #[test]
    fn single_price_matches_brute_force() {
        let mut rng = crate::rng::seeded(12);
        for _ in 0..300 {
            let n = rng.random_range(1..12);
            let values: Vec<f64> = (0..n).map(|_| (rng.random_range(0..20) as f64) / 4.0).collect();
            let got = opt_single_price(&values).revenue;
            assert_eq!(got, Money::from_f64(brute_force_opt(&values)), "{values:?}");
        }
    }

    #[test]
    fn alpha_filter() {
        assert!(alpha_beta_filter(&[1.0, 1.0, 1.0], 2.0));
        assert!(!alpha_beta_filter(&[0.7], 2.0));
        assert!(alpha_beta_filter(&[0.7, 0.1], 0.0));
    }

    #[test]
    fn oracle_mechanism_is_exactly_competitive() {
        let s = ValueSampler::Uniform { low: 0.0, high: 1.0 };
        let r = measure_competitiveness(&OraclePostedPrice, &s, 20, 200, None, 3).unwrap();
        assert_eq!(r.ratio_of_means, Some(1.0));
        assert_eq!(r.worst_ratio, Some(1.0));
    }

    #[test]
    fn equal_bids_are_tallied_not_divided() {
        let s = ValueSampler::Constant { value: 0.5 };
        let r = measure_competitiveness(&CircuitAuction, &s, 10, 5, None, 3).unwrap();
        assert_eq!(r.zero_revenue, 5);
        assert_eq!(r.worst_ratio, None);
        assert_eq!(r.ratio_of_means, None);
    }

    #[test]
    fn single_trial() {
        let s = ValueSampler::Exponential { rate: 1.0 };
        let r = measure_competitiveness(&CircuitAuction, &s, 10, 1, None, 3).unwrap();
        assert_eq!(r.instances.len(), 1);
    }

    #[test]
    fn unknown_mechanism_name() {
        assert!(auction_by_name("myerson").is_err());
        assert_eq!(auction_by_name("vcg").unwrap().name(), "vcg");
    }
}
