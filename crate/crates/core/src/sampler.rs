//! Simulation of progressively Type-I interval censored samples.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::scheme::{CensoredSample, CensoringScheme};

/// A lifetime distribution function `x -> F(x)`.
///
/// Implementations must be nondecreasing with values in `[0, 1]`.
pub trait LifetimeCdf: Sync {
    fn cdf(&self, x: f64) -> f64;
}

impl<F> LifetimeCdf for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Conditional failure probability of every interval for units still on test
/// at its start: `q_i = (F(t_i) - F(t_{i-1})) / (1 - F(t_{i-1}))`, and 0 once
/// the cdf has reached 1.
pub fn interval_hazards<C: LifetimeCdf + ?Sized>(
    scheme: &CensoringScheme,
    cdf: &C,
) -> Result<Vec<f64>> {
    let values: Vec<f64> = scheme.times().iter().map(|&t| cdf.cdf(t)).collect();
    values
        .windows(2)
        .enumerate()
        .map(|(index, pair)| {
            let (left, right) = (pair[0], pair[1]);
            if right < left || left.is_nan() || right.is_nan() {
                return Err(Error::NonMonotoneCdf { index, left, right });
            }
            if left >= 1.0 {
                Ok(0.0)
            } else {
                Ok(((right - left) / (1.0 - left)).clamp(0.0, 1.0))
            }
        })
        .collect()
}

/// Draws one censored sample of `n` units whose lifetimes follow `cdf`.
///
/// Survivors entering interval `i` fail independently with probability
/// `q_i`, then `floor(p_i * y_i)` of the `y_i` survivors are withdrawn (all
/// of them at the last inspection).
pub fn simulate_sample<C, R>(
    scheme: &CensoringScheme,
    n: u64,
    cdf: &C,
    rng: &mut R,
) -> Result<CensoredSample>
where
    C: LifetimeCdf + ?Sized,
    R: Rng + ?Sized,
{
    if n == 0 {
        return Err(Error::InvalidN);
    }
    let hazards = interval_hazards(scheme, cdf)?;
    Ok(simulate_with_hazards(scheme, n, &hazards, rng))
}

/// Sampling core once the interval hazards are known; lets the Monte Carlo
/// engine evaluate the cdf once per run instead of once per replication.
pub(crate) fn simulate_with_hazards<R: Rng + ?Sized>(
    scheme: &CensoringScheme,
    n: u64,
    hazards: &[f64],
    rng: &mut R,
) -> CensoredSample {
    let m = scheme.inspections();
    let mut failures = Vec::with_capacity(m);
    let mut removals = Vec::with_capacity(m);
    let mut on_test = n;
    for (i, &q) in hazards.iter().enumerate() {
        let x = draw_binomial(on_test, q, rng);
        let y = on_test - x;
        let r = scheme.removals_at(i + 1, y);
        failures.push(x);
        removals.push(r);
        on_test = y - r;
    }
    CensoredSample::new(scheme.clone(), n, failures, removals)
        .expect("generated counts satisfy the sample invariants")
}

fn draw_binomial<R: Rng + ?Sized>(trials: u64, p: f64, rng: &mut R) -> u64 {
    if trials == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    Binomial::new(trials, p)
        .expect("p lies strictly inside (0, 1)")
        .sample(rng)
}
