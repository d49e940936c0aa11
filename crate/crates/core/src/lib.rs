//! Goodness-of-fit tests for a completely specified lifetime distribution
//! when units are only inspected at fixed times and a fraction of the
//! survivors is withdrawn at each inspection (progressive Type-I interval
//! censoring).
//!
//! The pipeline is
//!
//! 1. [`CensoringScheme`] / [`CensoredSample`]: the design and the counts,
//! 2. [`reliability_estimates`] and [`deviations`]: product-limit reliability at
//!    the inspection times and its gap to the null reliability,
//! 3. [`compute_statistics`]: six distance statistics of that gap,
//! 4. [`MonteCarlo`]: null critical values, p-values and power.
//!
//! A general continuous null `F_0` is handled by mapping the inspection times
//! through `F_0` and testing uniformity ([`test_general`]).

// `!(a < b)` checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alternatives;
pub mod error;
pub mod estimator;
pub mod exec;
pub mod io;
pub mod montecarlo;
pub mod sampler;
pub mod scheme;
pub mod schemes;
pub mod statistics;
pub mod stream;

pub use alternatives::{
    cdf_eval, test_general, transform_scheme, AlternativeFamily, FamilyKind, TabulatedCdf,
};
pub use error::{Error, Result};
pub use estimator::{
    deviations, reliability_estimates, uniform_deviations, DeviationVector, ReliabilityEstimate,
};
pub use exec::Execution;
pub use montecarlo::{CriticalValueTable, MonteCarlo, PowerEstimate};
pub use sampler::{simulate_sample, LifetimeCdf};
pub use scheme::{risk_trace, validate_scheme, CensoredSample, CensoringScheme, RiskSetTrace};
pub use statistics::{compute_statistics, exceeds, Decisions, Statistic, StatisticSet};
