//! CSV readers and writers for samples, critical-value tables and power
//! curves.
//!
//! Every CSV file has a single header row and newline-terminated records.
//! Lines starting with `#` carry run metadata and are skipped on input.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::{CriticalValueTable, PowerEstimate};
use crate::scheme::{CensoredSample, CensoringScheme};
use crate::statistics::{Statistic, StatisticSet};

pub const SAMPLE_HEADER: &str = "t_i,x_i,r_i";
pub const CRITICAL_HEADER: &str = "scheme_id,n,level,B,seed,c_plus,c_minus,c,k,t1,t2";
pub const POWER_HEADER: &str = "family,param,stat,power,stderr";

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input)
}

/// Writes `# key=value` lines.
pub fn write_metadata<W: Write>(out: &mut W, entries: &[(&str, String)]) -> Result<()> {
    for (key, value) in entries {
        writeln!(out, "# {key}={value}")?;
    }
    Ok(())
}

/// Formats a list of reals as `[a,b,c]`.
pub fn format_list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(","))
}

pub fn write_sample_csv<W: Write>(out: &mut W, sample: &CensoredSample) -> Result<()> {
    writeln!(out, "{SAMPLE_HEADER}")?;
    let rows = sample
        .scheme()
        .inspection_times()
        .iter()
        .zip(sample.failures())
        .zip(sample.removals());
    for ((t, x), r) in rows {
        writeln!(out, "{t},{x},{r}")?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct SampleRow {
    t_i: f64,
    x_i: u64,
    r_i: u64,
}

/// Withdrawal fractions consistent with the observed counts: `r_i / y_i`,
/// 0 where nobody survived to be withdrawn, and 1 at the last inspection.
pub fn infer_percentages(n: u64, failures: &[u64], removals: &[u64]) -> Vec<f64> {
    let m = failures.len();
    let mut on_test = n;
    let mut percentages = Vec::with_capacity(m);
    for (i, (&x, &r)) in failures.iter().zip(removals).enumerate() {
        let y = on_test.saturating_sub(x);
        let p = if i + 1 == m {
            1.0
        } else if y == 0 {
            0.0
        } else {
            r as f64 / y as f64
        };
        percentages.push(p);
        on_test = y.saturating_sub(r);
    }
    percentages
}

/// Reads a `t_i,x_i,r_i` table. `n` is the total of all counts and the
/// withdrawal fractions are inferred with [`infer_percentages`]; callers
/// that know the design can swap in the real scheme with
/// [`CensoredSample::with_scheme`].
pub fn read_sample_csv<R: Read>(input: R) -> Result<CensoredSample> {
    let mut times = vec![0.0];
    let (mut failures, mut removals) = (Vec::new(), Vec::new());
    for row in reader(input).deserialize::<SampleRow>() {
        let row = row?;
        times.push(row.t_i);
        failures.push(row.x_i);
        removals.push(row.r_i);
    }
    let n: u64 = failures.iter().chain(&removals).sum();
    let percentages = infer_percentages(n, &failures, &removals);
    let scheme = CensoringScheme::new(times, percentages)?;
    CensoredSample::new(scheme, n, failures, removals)
}

pub fn write_statistics_csv<W: Write>(out: &mut W, rows: &[(&str, StatisticSet)]) -> Result<()> {
    writeln!(out, "quantity,{}", StatisticSet::CSV_HEADER)?;
    for (label, set) in rows {
        writeln!(out, "{label},{}", set.csv_row())?;
    }
    Ok(())
}

pub fn write_critical_csv<W: Write>(out: &mut W, tables: &[CriticalValueTable]) -> Result<()> {
    for table in tables {
        writeln!(
            out,
            "# scheme {}: times={} percentages={}",
            table.scheme_id,
            format_list(table.scheme.times()),
            format_list(table.scheme.percentages())
        )?;
    }
    writeln!(out, "{CRITICAL_HEADER}")?;
    for table in tables {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            table.scheme_id,
            table.n,
            table.level,
            table.replications,
            table.seed,
            table.critical.csv_row()
        )?;
    }
    Ok(())
}

/// One record of a critical-value CSV. The scheme itself is not stored in
/// the record; it is matched by `scheme_id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalRow {
    pub scheme_id: String,
    pub n: u64,
    pub level: f64,
    #[serde(rename = "B")]
    pub replications: usize,
    pub seed: u64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub c: f64,
    pub k: f64,
    pub t1: f64,
    pub t2: f64,
}

impl CriticalRow {
    pub fn critical(&self) -> StatisticSet {
        StatisticSet::from_array([self.c_plus, self.c_minus, self.c, self.k, self.t1, self.t2])
    }

    pub fn into_table(self, scheme: CensoringScheme) -> CriticalValueTable {
        let critical = self.critical();
        CriticalValueTable {
            scheme_id: self.scheme_id,
            scheme,
            n: self.n,
            level: self.level,
            replications: self.replications,
            seed: self.seed,
            critical,
        }
    }
}

pub fn read_critical_csv<R: Read>(input: R) -> Result<Vec<CriticalRow>> {
    let rows = reader(input)
        .deserialize::<CriticalRow>()
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(Error::Parse {
            what: "critical-value table",
            detail: "no records".into(),
        });
    }
    Ok(rows)
}

pub fn write_power_csv<W: Write>(out: &mut W, estimates: &[PowerEstimate]) -> Result<()> {
    writeln!(out, "{POWER_HEADER}")?;
    for estimate in estimates {
        let param = estimate
            .parameter
            .map(|p| p.to_string())
            .unwrap_or_default();
        for stat in Statistic::ALL {
            writeln!(
                out,
                "{},{},{},{},{}",
                estimate.family,
                param,
                stat,
                estimate.power_of(stat),
                estimate.stderr_of(stat)
            )?;
        }
    }
    Ok(())
}
