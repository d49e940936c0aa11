//! The six deviation-based goodness-of-fit statistics and the upper-tail
//! rejection rule.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::DeviationVector;

/// Names one of the six statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    /// `max D_i`
    CPlus,
    /// `max (-D_i)`
    CMinus,
    /// `max(C+, C-)`
    C,
    /// `C+ + C-`
    K,
    /// mean of `D_i^2`
    T1,
    /// mean of `|D_i|`
    T2,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [
        Statistic::CPlus,
        Statistic::CMinus,
        Statistic::C,
        Statistic::K,
        Statistic::T1,
        Statistic::T2,
    ];

    /// Column name used in CSV and JSON output.
    pub fn key(self) -> &'static str {
        match self {
            Statistic::CPlus => "c_plus",
            Statistic::CMinus => "c_minus",
            Statistic::C => "c",
            Statistic::K => "k",
            Statistic::T1 => "t1",
            Statistic::T2 => "t2",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|stat| stat.key() == s)
            .ok_or_else(|| Error::Parse {
                what: "statistic name",
                detail: s.to_string(),
            })
    }
}

/// One value per statistic. Also used for critical values and p-values,
/// which share the same six slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticSet {
    pub c_plus: f64,
    pub c_minus: f64,
    pub c: f64,
    pub k: f64,
    pub t1: f64,
    pub t2: f64,
}

impl StatisticSet {
    pub fn from_array(values: [f64; 6]) -> Self {
        let [c_plus, c_minus, c, k, t1, t2] = values;
        StatisticSet {
            c_plus,
            c_minus,
            c,
            k,
            t1,
            t2,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.c_plus, self.c_minus, self.c, self.k, self.t1, self.t2]
    }

    pub fn get(&self, stat: Statistic) -> f64 {
        self.to_array()[stat.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Statistic, f64)> {
        Statistic::ALL.into_iter().zip(self.to_array())
    }

    pub const CSV_HEADER: &'static str = "c_plus,c_minus,c,k,t1,t2";

    /// `c_plus,c_minus,c,k,t1,t2` with shortest round-trip float formatting.
    pub fn csv_row(&self) -> String {
        self.to_array()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn compute_statistics(deviations: &DeviationVector) -> Result<StatisticSet> {
    let d = &deviations.d;
    if d.is_empty() {
        return Err(Error::EmptyDeviationVector);
    }
    let m = d.len() as f64;
    let c_plus = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // `+ 0.0` turns a -0 from negating an exact zero into +0
    let c_minus = d.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max) + 0.0;
    let t1 = d.iter().map(|v| v * v).sum::<f64>() / m;
    let t2 = d.iter().map(|v| v.abs()).sum::<f64>() / m;
    Ok(StatisticSet {
        c_plus,
        c_minus,
        c: c_plus.max(c_minus),
        k: c_plus + c_minus,
        t1,
        t2,
    })
}

/// Per-statistic rejection decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decisions {
    pub c_plus: bool,
    pub c_minus: bool,
    pub c: bool,
    pub k: bool,
    pub t1: bool,
    pub t2: bool,
}

impl Decisions {
    pub fn get(&self, stat: Statistic) -> bool {
        self.to_array()[stat.index()]
    }

    pub fn to_array(&self) -> [bool; 6] {
        [self.c_plus, self.c_minus, self.c, self.k, self.t1, self.t2]
    }

    fn from_array([c_plus, c_minus, c, k, t1, t2]: [bool; 6]) -> Self {
        Decisions {
            c_plus,
            c_minus,
            c,
            k,
            t1,
            t2,
        }
    }
}

/// Rejects wherever the observed statistic strictly exceeds its critical
/// value. Ties are not rejected.
pub fn exceeds(observed: &StatisticSet, critical: &StatisticSet) -> Decisions {
    let (o, c) = (observed.to_array(), critical.to_array());
    Decisions::from_array(std::array::from_fn(|i| o[i] > c[i]))
}
