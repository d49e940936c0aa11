use thiserror::Error;

/// Everything that can go wrong while building schemes, simulating data or
/// running the Monte Carlo engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("inspection times must be strictly increasing (t[{index}] = {value} does not exceed the previous time)")]
    NonIncreasingTimes { index: usize, value: f64 },

    #[error("the first inspection time must be 0, got {0}")]
    FirstTimeNotZero(f64),

    #[error("withdrawal percentage p[{index}] = {value} is outside [0, 1]")]
    PercentageOutOfRange { index: usize, value: f64 },

    #[error("the last withdrawal percentage must be exactly 1, got {0}")]
    LastPercentageNotOne(f64),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("invalid censored sample: {0}")]
    InvalidSample(String),

    #[error("sample size must be at least 1")]
    InvalidN,

    #[error("lifetime cdf decreases between inspections {index} and {next}: F = {left} then {right}", next = index + 1)]
    NonMonotoneCdf { index: usize, left: f64, right: f64 },

    #[error("{failures} failures recorded in interval {interval} but no unit was at risk")]
    DegenerateRiskSet { interval: usize, failures: u64 },

    #[error("the null reliability at the last inspection time must be positive (F0(t_m) = {0})")]
    TerminalTimeNotBelowOne(f64),

    #[error("deviation vector is empty")]
    EmptyDeviationVector,

    #[error("critical values were computed for a different scheme or sample size")]
    SchemeMismatch,

    #[error("parameter {value} is outside the domain of the {family} family")]
    ParameterOutOfDomain { family: &'static str, value: f64 },

    #[error("null cdf is flat between inspections {index} and {next} (F0 = {value})", next = index + 1)]
    FlatCdfAcrossInspections { index: usize, value: f64 },

    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("number of replications must be at least 1")]
    InvalidReplications,

    #[error("invalid cdf table: {0}")]
    InvalidTable(String),

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
