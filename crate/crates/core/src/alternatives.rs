//! Lifetime distributions on `[0, 1]` used as null and alternative
//! hypotheses, and the probability-integral transform that turns a test of a
//! general continuous null into a test of uniformity.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::estimator::uniform_deviations;
use crate::sampler::LifetimeCdf;
use crate::scheme::{CensoredSample, CensoringScheme};
use crate::statistics::{compute_statistics, StatisticSet};

/// Parametric family tags that can be swept over a parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Uniform,
    /// `F(x) = x^alpha`, `alpha > 0`.
    Lehmann,
    /// Symmetric about 1/2; U-shaped density for `beta < 1`, wedge-shaped
    /// for `beta > 1`.
    Centered,
    /// Uniform on `[gamma, 1 - gamma]`, `0 <= gamma < 1/2`.
    Compressed,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Uniform => "uniform",
            FamilyKind::Lehmann => "lehmann",
            FamilyKind::Centered => "centered",
            FamilyKind::Compressed => "compressed",
        }
    }

    pub fn with_parameter(self, parameter: f64) -> Result<AlternativeFamily> {
        match self {
            FamilyKind::Uniform => Ok(AlternativeFamily::uniform()),
            FamilyKind::Lehmann => AlternativeFamily::lehmann(parameter),
            FamilyKind::Centered => AlternativeFamily::centered(parameter),
            FamilyKind::Compressed => AlternativeFamily::compressed(parameter),
        }
    }

    /// Grid used for power curves when none is given: 21 points over
    /// `[0.25, 3]` for the Lehmann and centered families, 17 points over
    /// `[0, 0.4]` for the compressed family.
    pub fn default_grid(self) -> Vec<f64> {
        let (lo, hi, points) = match self {
            FamilyKind::Uniform => return vec![0.0],
            FamilyKind::Lehmann | FamilyKind::Centered => (0.25, 3.0, 21),
            FamilyKind::Compressed => (0.0, 0.4, 17),
        };
        let step = (hi - lo) / (points - 1) as f64;
        (0..points).map(|i| lo + step * i as f64).collect()
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(FamilyKind::Uniform),
            "lehmann" => Ok(FamilyKind::Lehmann),
            "centered" => Ok(FamilyKind::Centered),
            "compressed" => Ok(FamilyKind::Compressed),
            other => Err(Error::Parse {
                what: "family name",
                detail: other.to_string(),
            }),
        }
    }
}

/// A distribution function on `[0, 1]`. Construct through the checked
/// constructors; arguments outside `[0, 1]` are clamped to the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternativeFamily {
    inner: Family,
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Uniform,
    Lehmann(f64),
    Centered(f64),
    Compressed(f64),
    Custom(TabulatedCdf),
}

impl AlternativeFamily {
    pub fn uniform() -> Self {
        AlternativeFamily {
            inner: Family::Uniform,
        }
    }

    pub fn lehmann(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::ParameterOutOfDomain {
                family: "lehmann",
                value: alpha,
            });
        }
        Ok(AlternativeFamily {
            inner: Family::Lehmann(alpha),
        })
    }

    pub fn centered(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::ParameterOutOfDomain {
                family: "centered",
                value: beta,
            });
        }
        Ok(AlternativeFamily {
            inner: Family::Centered(beta),
        })
    }

    pub fn compressed(gamma: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&gamma) {
            return Err(Error::ParameterOutOfDomain {
                family: "compressed",
                value: gamma,
            });
        }
        Ok(AlternativeFamily {
            inner: Family::Compressed(gamma),
        })
    }

    pub fn custom(table: TabulatedCdf) -> Self {
        AlternativeFamily {
            inner: Family::Custom(table),
        }
    }

    /// Parses `uniform`, `lehmann:<alpha>`, `centered:<beta>`,
    /// `compressed:<gamma>` or `table:<path.csv>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, arg) = match spec.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (spec, None),
        };
        if name == "table" {
            let path = arg.ok_or_else(|| Error::Parse {
                what: "family",
                detail: "table needs a path, e.g. table:cdf.csv".into(),
            })?;
            return Ok(AlternativeFamily::custom(TabulatedCdf::from_csv_path(
                path,
            )?));
        }
        let kind: FamilyKind = name.parse()?;
        match (kind, arg) {
            (FamilyKind::Uniform, None) => Ok(AlternativeFamily::uniform()),
            (FamilyKind::Uniform, Some(_)) => Err(Error::Parse {
                what: "family",
                detail: "uniform takes no parameter".into(),
            }),
            (_, None) => Err(Error::Parse {
                what: "family",
                detail: format!("{name} needs a parameter, e.g. {name}:0.5"),
            }),
            (kind, Some(arg)) => {
                let value: f64 = arg.trim().parse().map_err(|_| Error::Parse {
                    what: "family parameter",
                    detail: arg.to_string(),
                })?;
                kind.with_parameter(value)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self.inner {
            Family::Uniform => "uniform",
            Family::Lehmann(_) => "lehmann",
            Family::Centered(_) => "centered",
            Family::Compressed(_) => "compressed",
            Family::Custom(_) => "table",
        }
    }

    /// The family parameter, if the family has one.
    pub fn parameter(&self) -> Option<f64> {
        match self.inner {
            Family::Lehmann(p) | Family::Centered(p) | Family::Compressed(p) => Some(p),
            Family::Uniform | Family::Custom(_) => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.inner {
            Family::Custom(table) => table.eval(x),
            _ if x <= 0.0 => 0.0,
            _ if x >= 1.0 => 1.0,
            Family::Uniform => x,
            Family::Lehmann(alpha) => x.powf(*alpha),
            Family::Centered(beta) => {
                if x <= 0.5 {
                    0.5 * (2.0 * x).powf(*beta)
                } else {
                    1.0 - 0.5 * (2.0 * (1.0 - x)).powf(*beta)
                }
            }
            Family::Compressed(gamma) => {
                if x < *gamma {
                    0.0
                } else if x > 1.0 - gamma {
                    1.0
                } else {
                    (x - gamma) / (1.0 - 2.0 * gamma)
                }
            }
        }
    }
}

impl LifetimeCdf for AlternativeFamily {
    fn cdf(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

impl fmt::Display for AlternativeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some(p) => write!(f, "{}:{}", self.name(), p),
            None => f.write_str(self.name()),
        }
    }
}

/// `cdf_eval` for a family and a point.
pub fn cdf_eval(family: &AlternativeFamily, x: f64) -> f64 {
    family.eval(x)
}

/// Distribution function given as a table of `(x, F(x))` points, linearly
/// interpolated. Below the first point it takes the first value, above the
/// last point the last value.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

#[derive(Deserialize)]
struct TableRow {
    x: f64,
    #[serde(alias = "F", alias = "cdf")]
    f: f64,
}

impl TabulatedCdf {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() {
            return Err(Error::InvalidTable(format!(
                "{} x value(s) but {} cdf value(s)",
                xs.len(),
                fs.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidTable("need at least two points".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidTable(
                "x values must be finite and strictly increasing".into(),
            ));
        }
        if fs.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::InvalidTable("cdf values must lie in [0, 1]".into()));
        }
        if fs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidTable(
                "cdf values must be nondecreasing".into(),
            ));
        }
        Ok(TabulatedCdf { xs, fs })
    }

    /// Reads a CSV with header `x,F` (or `x,f` / `x,cdf`).
    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let (mut xs, mut fs) = (Vec::new(), Vec::new());
        for row in csv.deserialize::<TableRow>() {
            let row = row?;
            xs.push(row.x);
            fs.push(row.f);
        }
        TabulatedCdf::new(xs, fs)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        TabulatedCdf::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x <= self.xs[0] {
            return self.fs[0];
        }
        if x >= self.xs[last] {
            return self.fs[last];
        }
        // first index with xs[i] > x; 1 <= i <= last here
        let i = self.xs.partition_point(|&v| v <= x);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (f0, f1) = (self.fs[i - 1], self.fs[i]);
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    }
}

impl LifetimeCdf for TabulatedCdf {
    fn cdf(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// Maps inspection times through the null cdf: `t'_i = F_0(t_i)` for
/// `i >= 1`, with `t'_0 = 0` kept as the start of the test. Percentages are
/// unchanged.
pub fn transform_scheme<C: LifetimeCdf + ?Sized>(
    scheme: &CensoringScheme,
    f0: &C,
) -> Result<CensoringScheme> {
    let mut times = Vec::with_capacity(scheme.times().len());
    times.push(0.0);
    for (index, &t) in scheme.inspection_times().iter().enumerate() {
        let value = f0.cdf(t);
        let previous = times[index];
        if value == previous {
            return Err(Error::FlatCdfAcrossInspections { index, value });
        }
        if !(value > previous) {
            return Err(Error::NonMonotoneCdf {
                index,
                left: previous,
                right: value,
            });
        }
        times.push(value);
    }
    scheme.with_times(times)
}

/// Goodness-of-fit statistics for a completely specified continuous null
/// `F_0`: the uniformity statistics of the same counts observed at the
/// transformed times `F_0(t_i)`.
pub fn test_general<C: LifetimeCdf + ?Sized>(
    sample: &CensoredSample,
    f0: &C,
) -> Result<StatisticSet> {
    let transformed = transform_scheme(sample.scheme(), f0)?;
    let retimed = sample.with_scheme(transformed)?;
    compute_statistics(&uniform_deviations(&retimed)?)
}
