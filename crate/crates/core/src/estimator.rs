//! Product-limit reliability estimate at the inspection times and its
//! deviation from a hypothesised reliability function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::LifetimeCdf;
use crate::scheme::CensoredSample;

/// Estimated reliability `S(t_1), ..., S(t_m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityEstimate {
    pub values: Vec<f64>,
}

/// `D_i = S(t_i) - (1 - F_0(t_i))` for i = 1..m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationVector {
    pub d: Vec<f64>,
}

impl DeviationVector {
    pub fn new(d: Vec<f64>) -> Self {
        DeviationVector { d }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

/// `S(t_i) = prod_{j <= i} (1 - X_j / alpha_{j-1}^+)`.
///
/// A factor whose risk set is empty (`alpha_{j-1}^+ = 0`, hence `X_j = 0`) is
/// taken as 1, so the estimate stays flat once every unit has left the test.
/// Hand-entered data with failures from an empty risk set is rejected.
pub fn reliability_estimates(sample: &CensoredSample) -> Result<ReliabilityEstimate> {
    let mut at_risk = sample.n();
    let mut survival = 1.0;
    let mut values = Vec::with_capacity(sample.failures().len());
    for (j, (&x, &r)) in sample.failures().iter().zip(sample.removals()).enumerate() {
        if at_risk == 0 {
            if x > 0 {
                return Err(Error::DegenerateRiskSet {
                    interval: j + 1,
                    failures: x,
                });
            }
        } else {
            survival *= 1.0 - x as f64 / at_risk as f64;
        }
        values.push(survival);
        at_risk -= x + r;
    }
    Ok(ReliabilityEstimate { values })
}

/// Deviations of the estimate from the reliability implied by `null_cdf`.
///
/// The null reliability at `t_m` must be positive; for the uniform null that
/// is the requirement `t_m < 1`.
pub fn deviations<C: LifetimeCdf + ?Sized>(
    sample: &CensoredSample,
    null_cdf: &C,
) -> Result<DeviationVector> {
    let terminal = null_cdf.cdf(sample.scheme().terminal_time());
    if !(terminal < 1.0) {
        return Err(Error::TerminalTimeNotBelowOne(terminal));
    }
    let estimate = reliability_estimates(sample)?;
    let d = estimate
        .values
        .iter()
        .zip(sample.scheme().inspection_times())
        .map(|(&s, &t)| s - (1.0 - null_cdf.cdf(t)))
        .collect();
    Ok(DeviationVector { d })
}

/// Deviations against the uniform null `F(x) = x`.
pub fn uniform_deviations(sample: &CensoredSample) -> Result<DeviationVector> {
    deviations(sample, &|x: f64| x)
}
