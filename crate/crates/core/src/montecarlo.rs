//! Monte Carlo calibration: null critical values, p-values, and power under
//! alternatives.
//!
//! All six statistics are computed from one shared set of replications.
//! Results are a pure function of the inputs and the master seed; see
//! [`crate::stream`] for how replications get their random numbers.

use serde::{Deserialize, Serialize};

use crate::alternatives::{AlternativeFamily, FamilyKind};
use crate::error::{Error, Result};
use crate::estimator::uniform_deviations;
use crate::exec::Execution;
use crate::sampler::{interval_hazards, simulate_with_hazards, LifetimeCdf};
use crate::scheme::CensoringScheme;
use crate::statistics::{compute_statistics, exceeds, Decisions, Statistic, StatisticSet};
use crate::stream::replication_rng;

/// Replications used when none are requested.
pub const DEFAULT_REPLICATIONS: usize = 20_000;
/// Default significance level.
pub const DEFAULT_LEVEL: f64 = 0.05;
/// Default number of units on test.
pub const DEFAULT_N: u64 = 40;

/// Upper-tail critical values of the six statistics for one scheme, sample
/// size and level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    pub scheme_id: String,
    pub scheme: CensoringScheme,
    pub n: u64,
    pub level: f64,
    #[serde(rename = "B")]
    pub replications: usize,
    pub seed: u64,
    pub critical: StatisticSet,
}

impl CriticalValueTable {
    /// Checks that the table belongs to `(scheme, n)`.
    pub fn check_matches(&self, scheme: &CensoringScheme, n: u64) -> Result<()> {
        if &self.scheme != scheme || self.n != n {
            return Err(Error::SchemeMismatch);
        }
        Ok(())
    }

    /// Rejection decisions for statistics observed on a sample of size `n`
    /// under `scheme`.
    pub fn reject(
        &self,
        observed: &StatisticSet,
        scheme: &CensoringScheme,
        n: u64,
    ) -> Result<Decisions> {
        self.check_matches(scheme, n)?;
        Ok(exceeds(observed, &self.critical))
    }
}

/// Rejection frequencies of the six tests under one alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    pub family: String,
    pub parameter: Option<f64>,
    pub level: f64,
    #[serde(rename = "B")]
    pub replications: usize,
    pub rejections: [u64; 6],
    pub power: StatisticSet,
    pub stderr: StatisticSet,
}

impl PowerEstimate {
    fn from_counts(
        family: &AlternativeFamily,
        level: f64,
        replications: usize,
        rejections: [u64; 6],
    ) -> Self {
        let b = replications as f64;
        let freq = rejections.map(|r| r as f64 / b);
        let se = freq.map(|f| (f * (1.0 - f) / b).sqrt());
        PowerEstimate {
            family: family.name().to_string(),
            parameter: family.parameter(),
            level,
            replications,
            rejections,
            power: StatisticSet::from_array(freq),
            stderr: StatisticSet::from_array(se),
        }
    }

    pub fn power_of(&self, stat: Statistic) -> f64 {
        self.power.get(stat)
    }

    pub fn stderr_of(&self, stat: Statistic) -> f64 {
        self.stderr.get(stat)
    }
}

/// Index (1-based) of the order statistic used as critical value:
/// `ceil(B * (1 - level))`.
pub fn critical_rank(replications: usize, level: f64) -> usize {
    let target = replications as f64 * (1.0 - level);
    // strip representation error such as 20000 * 0.95 = 19000.000000000004
    let rank = (target - target * 1e-12).ceil() as usize;
    rank.clamp(1, replications)
}

/// Monte Carlo settings shared by every calibration routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    replications: usize,
    seed: u64,
    execution: Execution,
}

impl MonteCarlo {
    pub fn new(replications: usize, seed: u64) -> Result<Self> {
        if replications == 0 {
            return Err(Error::InvalidReplications);
        }
        Ok(MonteCarlo {
            replications,
            seed,
            execution: Execution::default(),
        })
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn replications(&self) -> usize {
        self.replications
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniformity statistics of `B` samples drawn from `cdf`, in replication
    /// order.
    pub fn simulate_statistics<C: LifetimeCdf + ?Sized>(
        &self,
        scheme: &CensoringScheme,
        n: u64,
        cdf: &C,
    ) -> Result<Vec<StatisticSet>> {
        if n == 0 {
            return Err(Error::InvalidN);
        }
        let terminal = scheme.terminal_time();
        if !(terminal < 1.0) {
            return Err(Error::TerminalTimeNotBelowOne(terminal));
        }
        let hazards = interval_hazards(scheme, cdf)?;
        let seed = self.seed;
        self.execution
            .map_indexed(self.replications, |rep| {
                let mut rng = replication_rng(seed, rep);
                let sample = simulate_with_hazards(scheme, n, &hazards, &mut rng);
                compute_statistics(&uniform_deviations(&sample)?)
            })
            .into_iter()
            .collect()
    }

    /// Statistics of `B` samples simulated under the uniform null.
    pub fn null_statistics(&self, scheme: &CensoringScheme, n: u64) -> Result<Vec<StatisticSet>> {
        self.simulate_statistics(scheme, n, &AlternativeFamily::uniform())
    }

    /// The `ceil(B (1 - level))`-th smallest simulated null value of each
    /// statistic.
    pub fn critical_values(
        &self,
        scheme: &CensoringScheme,
        n: u64,
        level: f64,
    ) -> Result<CriticalValueTable> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::InvalidLevel(level));
        }
        let simulated = self.null_statistics(scheme, n)?;
        let rank = critical_rank(self.replications, level);
        let critical = std::array::from_fn(|s| {
            let mut column: Vec<f64> = simulated.iter().map(|set| set.to_array()[s]).collect();
            let (_, kth, _) = column.select_nth_unstable_by(rank - 1, f64::total_cmp);
            *kth
        });
        Ok(CriticalValueTable {
            scheme_id: "custom".to_string(),
            scheme: scheme.clone(),
            n,
            level,
            replications: self.replications,
            seed: self.seed,
            critical: StatisticSet::from_array(critical),
        })
    }

    /// Add-one Monte Carlo p-values `(1 + #{simulated >= observed}) / (B + 1)`.
    pub fn p_values(
        &self,
        observed: &StatisticSet,
        scheme: &CensoringScheme,
        n: u64,
    ) -> Result<StatisticSet> {
        let simulated = self.null_statistics(scheme, n)?;
        let obs = observed.to_array();
        let mut at_least = [0u64; 6];
        for set in &simulated {
            for (count, (sim, o)) in at_least.iter_mut().zip(set.to_array().iter().zip(obs)) {
                if *sim >= o {
                    *count += 1;
                }
            }
        }
        let denom = (self.replications + 1) as f64;
        Ok(StatisticSet::from_array(
            at_least.map(|c| (c + 1) as f64 / denom),
        ))
    }

    /// Rejection frequency of every test when samples come from `family`.
    pub fn power(
        &self,
        scheme: &CensoringScheme,
        n: u64,
        critical: &CriticalValueTable,
        family: &AlternativeFamily,
    ) -> Result<PowerEstimate> {
        critical.check_matches(scheme, n)?;
        let simulated = self.simulate_statistics(scheme, n, family)?;
        let mut rejections = [0u64; 6];
        for set in &simulated {
            let decisions = exceeds(set, &critical.critical).to_array();
            for (count, rejected) in rejections.iter_mut().zip(decisions) {
                *count += u64::from(rejected);
            }
        }
        Ok(PowerEstimate::from_counts(
            family,
            critical.level,
            self.replications,
            rejections,
        ))
    }

    /// One power estimate per grid point, in grid order. Every point reuses the
    /// same seed, so neighbouring points share their random numbers.
    pub fn power_curve(
        &self,
        scheme: &CensoringScheme,
        n: u64,
        critical: &CriticalValueTable,
        kind: FamilyKind,
        grid: &[f64],
    ) -> Result<Vec<PowerEstimate>> {
        if grid.is_empty() {
            return Err(Error::Parse {
                what: "parameter grid",
                detail: "grid is empty".into(),
            });
        }
        let families = grid
            .iter()
            .map(|&p| kind.with_parameter(p))
            .collect::<Result<Vec<_>>>()?;
        families
            .iter()
            .map(|family| self.power(scheme, n, critical, family))
            .collect()
    }
}
