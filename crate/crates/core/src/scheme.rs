//! Censoring schemes, censored samples and the risk-set bookkeeping that
//! ties them together.
//!
//! Indices in the documentation are 1-based (`t_1 .. t_m`, `X_1 .. X_m`);
//! the vectors store `t_0 = 0` explicitly, so `times()[i]` is `t_i` while
//! `failures()[i - 1]` is `X_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inspection schedule `0 = t_0 < t_1 < ... < t_m` together with the
/// withdrawal fractions `p_1, ..., p_m` (with `p_m = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub struct CensoringScheme {
    times: Vec<f64>,
    percentages: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SchemeRepr {
    times: Vec<f64>,
    percentages: Vec<f64>,
}

impl TryFrom<SchemeRepr> for CensoringScheme {
    type Error = Error;

    fn try_from(repr: SchemeRepr) -> Result<Self> {
        CensoringScheme::new(repr.times, repr.percentages)
    }
}

impl From<CensoringScheme> for SchemeRepr {
    fn from(scheme: CensoringScheme) -> Self {
        SchemeRepr {
            times: scheme.times,
            percentages: scheme.percentages,
        }
    }
}

impl CensoringScheme {
    /// Validates the inputs and builds a scheme. Invalid input is rejected,
    /// never repaired.
    pub fn new(times: Vec<f64>, percentages: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::LengthMismatch(format!(
                "need t_0 = 0 and at least one inspection time, got {} time(s)",
                times.len()
            )));
        }
        let m = times.len() - 1;
        if percentages.len() != m {
            return Err(Error::LengthMismatch(format!(
                "{m} inspection time(s) but {} withdrawal percentage(s)",
                percentages.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::FirstTimeNotZero(times[0]));
        }
        for (index, pair) in times.windows(2).enumerate() {
            if !(pair[1] > pair[0]) || !pair[1].is_finite() {
                return Err(Error::NonIncreasingTimes {
                    index: index + 1,
                    value: pair[1],
                });
            }
        }
        for (index, &p) in percentages.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::PercentageOutOfRange {
                    index: index + 1,
                    value: p,
                });
            }
        }
        let last = percentages[m - 1];
        if last != 1.0 {
            return Err(Error::LastPercentageNotOne(last));
        }
        Ok(CensoringScheme { times, percentages })
    }

    /// Number of inspections `m`.
    pub fn inspections(&self) -> usize {
        self.percentages.len()
    }

    /// `t_0, ..., t_m`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `t_1, ..., t_m`.
    pub fn inspection_times(&self) -> &[f64] {
        &self.times[1..]
    }

    /// Last inspection time `t_m`.
    pub fn terminal_time(&self) -> f64 {
        self.times[self.inspections()]
    }

    pub fn percentages(&self) -> &[f64] {
        &self.percentages
    }

    /// Same percentages, new times. Used when inspection times are mapped
    /// through a null cdf.
    pub fn with_times(&self, times: Vec<f64>) -> Result<Self> {
        CensoringScheme::new(times, self.percentages.clone())
    }

    /// Number of units withdrawn at inspection `i` (1-based) when `survivors`
    /// units are still on test: `floor(p_i * survivors)`, and every survivor at
    /// the last inspection.
    ///
    /// The floor is taken after nudging the product by a few ulps so that
    /// decimal percentages such as 0.29 withdraw `floor(0.29 * 100) = 29`
    /// rather than the 28 a bare floating point floor would give.
    pub fn removals_at(&self, i: usize, survivors: u64) -> u64 {
        let m = self.inspections();
        if i == m {
            return survivors;
        }
        let exact = self.percentages[i - 1] * survivors as f64;
        let removed = (exact + exact * 4.0 * f64::EPSILON).floor() as u64;
        removed.min(survivors)
    }
}

/// Shorthand for [`CensoringScheme::new`].
pub fn validate_scheme(times: &[f64], percentages: &[f64]) -> Result<CensoringScheme> {
    CensoringScheme::new(times.to_vec(), percentages.to_vec())
}

/// Interval failure counts `X_1..X_m` and removal counts `R_1..R_m`
/// observed under a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampleRepr", into = "SampleRepr")]
pub struct CensoredSample {
    scheme: CensoringScheme,
    n: u64,
    failures: Vec<u64>,
    removals: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SampleRepr {
    times: Vec<f64>,
    percentages: Vec<f64>,
    n: u64,
    failures: Vec<u64>,
    removals: Vec<u64>,
}

impl TryFrom<SampleRepr> for CensoredSample {
    type Error = Error;

    fn try_from(repr: SampleRepr) -> Result<Self> {
        let scheme = CensoringScheme::new(repr.times, repr.percentages)?;
        CensoredSample::new(scheme, repr.n, repr.failures, repr.removals)
    }
}

impl From<CensoredSample> for SampleRepr {
    fn from(sample: CensoredSample) -> Self {
        SampleRepr {
            times: sample.scheme.times,
            percentages: sample.scheme.percentages,
            n: sample.n,
            failures: sample.failures,
            removals: sample.removals,
        }
    }
}

impl CensoredSample {
    /// Checks conservation (`sum(X_i + R_i) = n`) and that no inspection
    /// removes more units than are left on test.
    pub fn new(
        scheme: CensoringScheme,
        n: u64,
        failures: Vec<u64>,
        removals: Vec<u64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidN);
        }
        let m = scheme.inspections();
        if failures.len() != m || removals.len() != m {
            return Err(Error::LengthMismatch(format!(
                "scheme has {m} inspection(s), sample has {} failure and {} removal count(s)",
                failures.len(),
                removals.len()
            )));
        }
        let mut on_test = n;
        for i in 0..m {
            let y = on_test.checked_sub(failures[i]).ok_or_else(|| {
                Error::InvalidSample(format!(
                    "X_{} = {} exceeds the {on_test} unit(s) at risk",
                    i + 1,
                    failures[i]
                ))
            })?;
            on_test = y.checked_sub(removals[i]).ok_or_else(|| {
                Error::InvalidSample(format!(
                    "R_{} = {} exceeds the {y} surviving unit(s)",
                    i + 1,
                    removals[i]
                ))
            })?;
        }
        if on_test != 0 {
            return Err(Error::InvalidSample(format!(
                "counts account for {} of n = {n} units; the last inspection must withdraw every survivor",
                n - on_test
            )));
        }
        Ok(CensoredSample {
            scheme,
            n,
            failures,
            removals,
        })
    }

    /// Builds a sample with `n` inferred as `sum(X_i + R_i)`.
    pub fn from_counts(
        scheme: CensoringScheme,
        failures: Vec<u64>,
        removals: Vec<u64>,
    ) -> Result<Self> {
        let n = failures.iter().chain(&removals).sum();
        CensoredSample::new(scheme, n, failures, removals)
    }

    pub fn scheme(&self) -> &CensoringScheme {
        &self.scheme
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn failures(&self) -> &[u64] {
        &self.failures
    }

    pub fn removals(&self) -> &[u64] {
        &self.removals
    }

    /// Same counts under a different scheme with the same number of
    /// inspections.
    pub fn with_scheme(&self, scheme: CensoringScheme) -> Result<Self> {
        if scheme.inspections() != self.scheme.inspections() {
            return Err(Error::LengthMismatch(format!(
                "cannot move a sample with {} inspection(s) onto a scheme with {}",
                self.scheme.inspections(),
                scheme.inspections()
            )));
        }
        Ok(CensoredSample {
            scheme,
            ..self.clone()
        })
    }

    /// `y_i`: units alive at `t_i` just before the withdrawal, for i = 1..m.
    pub fn survivors_before_removal(&self) -> Vec<u64> {
        let mut on_test = self.n;
        self.failures
            .iter()
            .zip(&self.removals)
            .map(|(&x, &r)| {
                let y = on_test - x;
                on_test = y - r;
                y
            })
            .collect()
    }

    pub fn risk_trace(&self) -> RiskSetTrace {
        risk_trace(self)
    }
}

/// Cumulative counts and the number of units on test after each inspection.
///
/// All three vectors have length `m + 1`; entry `j` refers to the state just
/// after inspection `j`, with entry 0 describing the start of the test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiskSetTrace {
    /// `alpha_j^+ = n - X_{.j} - R_{.j}`.
    pub alpha_plus: Vec<u64>,
    /// `X_{.j}`.
    pub cum_failures: Vec<u64>,
    /// `R_{.j}`.
    pub cum_removals: Vec<u64>,
}

pub fn risk_trace(sample: &CensoredSample) -> RiskSetTrace {
    let m = sample.scheme.inspections();
    let mut alpha_plus = Vec::with_capacity(m + 1);
    let mut cum_failures = Vec::with_capacity(m + 1);
    let mut cum_removals = Vec::with_capacity(m + 1);
    let (mut xs, mut rs) = (0u64, 0u64);
    alpha_plus.push(sample.n);
    cum_failures.push(0);
    cum_removals.push(0);
    for (&x, &r) in sample.failures.iter().zip(&sample.removals) {
        xs += x;
        rs += r;
        cum_failures.push(xs);
        cum_removals.push(rs);
        alpha_plus.push(sample.n - xs - rs);
    }
    RiskSetTrace {
        alpha_plus,
        cum_failures,
        cum_removals,
    }
}
