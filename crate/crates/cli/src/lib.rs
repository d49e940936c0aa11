//! `ptic` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ptic::io::{
    format_list, read_critical_csv, read_sample_csv, write_critical_csv, write_metadata,
    write_power_csv, write_sample_csv, write_statistics_csv,
};
use ptic::montecarlo::{DEFAULT_LEVEL, DEFAULT_N, DEFAULT_REPLICATIONS};
use ptic::schemes::{builtin_scheme, BUILTIN_NAMES};
use ptic::stream::replication_rng;
use ptic::{
    simulate_sample, test_general, transform_scheme, AlternativeFamily, CensoredSample,
    CensoringScheme, CriticalValueTable, FamilyKind, MonteCarlo, PowerEstimate,
};

/// Environment variable naming the directory that receives output files when
/// `--out` is not given.
pub const OUTPUT_DIR_ENV: &str = "PTIC_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "ptic",
    version,
    about = "Goodness-of-fit tests under progressive Type-I interval censoring"
)]
struct Cli {
    /// Worker threads for Monte Carlo replications (0 = all cores). Does not
    /// change results.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate null critical values of the six statistics.
    CriticalValues(CriticalArgs),
    /// Estimate the power of every test against one alternative.
    Power(PowerArgs),
    /// Estimate power over a grid of family parameters.
    PowerCurve(PowerCurveArgs),
    /// Compute the statistics and Monte Carlo p-values of an observed sample.
    Test(TestArgs),
    /// Generate one censored sample.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    /// Bundled scheme (t1p1, t1p2, t2p1, t2p2) or a JSON file with `times`
    /// and `percentages`.
    #[arg(long)]
    scheme: Option<String>,
    /// Inline inspection times t_0..t_m, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        requires = "percentages",
        conflicts_with = "scheme"
    )]
    times: Option<Vec<f64>>,
    /// Inline withdrawal percentages p_1..p_m, comma separated.
    #[arg(long, value_delimiter = ',', requires = "times")]
    percentages: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct MonteCarloArgs {
    /// Units on test.
    #[arg(long, default_value_t = DEFAULT_N)]
    n: u64,
    /// Significance level.
    #[arg(long, default_value_t = DEFAULT_LEVEL)]
    level: f64,
    /// Monte Carlo replications.
    #[arg(long = "B", visible_alias = "replications", default_value_t = DEFAULT_REPLICATIONS)]
    replications: usize,
    /// Master seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout if omitted and no output directory is configured).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CriticalArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Compute all four bundled schemes.
    #[arg(long, conflicts_with_all = ["scheme", "times"])]
    all: bool,
    #[command(flatten)]
    mc: MonteCarloArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CriticalSource {
    /// Critical values from `critical-values` (CSV or JSON). Computed on the
    /// fly from `--critical-seed` when omitted.
    #[arg(long)]
    critical: Option<PathBuf>,
    /// Seed for critical values computed on the fly.
    #[arg(long, default_value_t = 1)]
    critical_seed: u64,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Alternative: uniform, lehmann:A, centered:B, compressed:G or table:PATH.
    #[arg(long)]
    alt: String,
    #[command(flatten)]
    critical: CriticalSource,
    #[command(flatten)]
    mc: MonteCarloArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PowerCurveArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// lehmann, centered, compressed or uniform.
    #[arg(long)]
    family: String,
    /// Parameter values, comma separated (family default grid if omitted).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[command(flatten)]
    critical: CriticalSource,
    #[command(flatten)]
    mc: MonteCarloArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TestArgs {
    /// Sample file: CSV with columns t_i,x_i,r_i or a JSON sample object.
    #[arg(long)]
    data: PathBuf,
    /// Null distribution: uniform, a parametric family or table:PATH.
    #[arg(long, default_value = "uniform")]
    null: String,
    /// Design the data came from. Without it, withdrawal fractions are
    /// inferred from the counts.
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Monte Carlo replications.
    #[arg(long = "B", visible_alias = "replications", default_value_t = DEFAULT_REPLICATIONS)]
    replications: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value_t = DEFAULT_N)]
    n: u64,
    /// Lifetime distribution to sample from.
    #[arg(long, default_value = "uniform")]
    alt: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Replication index; selects the random stream under the seed.
    #[arg(long, default_value_t = 0)]
    rep: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl From<ptic::Error> for CliError {
    fn from(e: ptic::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start {} worker threads: {e}", cli.threads);
            return 1;
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            1
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::CriticalValues(args) => critical_values(args),
        Command::Power(args) => power(args),
        Command::PowerCurve(args) => power_curve(args),
        Command::Test(args) => test(args),
        Command::Simulate(args) => simulate(args),
    }
}

struct NamedScheme {
    id: String,
    scheme: CensoringScheme,
}

impl SchemeArgs {
    fn resolve(&self) -> CliResult<NamedScheme> {
        self.resolve_optional()?.ok_or_else(|| {
            CliError::Usage(
                "a scheme is required: --scheme NAME|FILE or --times/--percentages".into(),
            )
        })
    }

    fn resolve_optional(&self) -> CliResult<Option<NamedScheme>> {
        if let (Some(times), Some(percentages)) = (&self.times, &self.percentages) {
            let scheme = CensoringScheme::new(times.clone(), percentages.clone())?;
            return Ok(Some(NamedScheme {
                id: "custom".into(),
                scheme,
            }));
        }
        let Some(spec) = &self.scheme else {
            return Ok(None);
        };
        if let Some(scheme) = builtin_scheme(spec) {
            return Ok(Some(NamedScheme {
                id: spec.clone(),
                scheme,
            }));
        }
        let path = Path::new(spec);
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "--scheme {spec}: not a bundled scheme ({}) or an existing file",
                BUILTIN_NAMES.join(", ")
            )));
        }
        let scheme: CensoringScheme = serde_json::from_reader(File::open(path)?)?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Ok(Some(NamedScheme { id, scheme }))
    }
}

impl MonteCarloArgs {
    fn engine(&self) -> CliResult<MonteCarlo> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(CliError::Usage(format!(
                "--level {} must lie in (0, 1)",
                self.level
            )));
        }
        if self.n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        engine(self.replications, self.seed)
    }
}

fn engine(replications: usize, seed: u64) -> CliResult<MonteCarlo> {
    MonteCarlo::new(replications, seed)
        .map_err(|_| CliError::Usage("--B must be at least 1".into()))
}

fn parse_family(spec: &str, flag: &str) -> CliResult<AlternativeFamily> {
    AlternativeFamily::parse(spec).map_err(|e| match e {
        ptic::Error::Io(_) | ptic::Error::Csv(_) | ptic::Error::InvalidTable(_) => {
            CliError::Data(format!("{flag} {spec}: {e}"))
        }
        other => CliError::Usage(format!("{flag} {spec}: {other}")),
    })
}

impl OutputArgs {
    fn open(&self, default_name: &str) -> CliResult<Box<dyn Write>> {
        let ext = match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let path = match (&self.out, std::env::var_os(OUTPUT_DIR_ENV)) {
            (Some(path), _) => Some(path.clone()),
            (None, Some(dir)) => {
                let dir = PathBuf::from(dir);
                std::fs::create_dir_all(&dir)?;
                Some(dir.join(format!("{default_name}.{ext}")))
            }
            (None, None) => None,
        };
        Ok(match path {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }
}

fn scheme_metadata(named: &NamedScheme) -> Vec<(&'static str, String)> {
    vec![
        ("scheme", named.id.clone()),
        ("times", format_list(named.scheme.times())),
        ("percentages", format_list(named.scheme.percentages())),
    ]
}

fn mc_metadata(mc: &MonteCarloArgs) -> Vec<(&'static str, String)> {
    vec![
        ("n", mc.n.to_string()),
        ("level", mc.level.to_string()),
        ("B", mc.replications.to_string()),
        ("seed", mc.seed.to_string()),
    ]
}

fn metadata_json(entries: &[(&str, String)]) -> serde_json::Value {
    serde_json::Value::Object(
        entries
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
            .collect(),
    )
}

fn finish_json(mut out: Box<dyn Write>, value: &serde_json::Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn critical_values(args: CriticalArgs) -> CliResult<()> {
    let engine = args.mc.engine()?;
    let schemes = if args.all {
        BUILTIN_NAMES
            .iter()
            .map(|name| NamedScheme {
                id: name.to_string(),
                scheme: builtin_scheme(name).expect("bundled"),
            })
            .collect()
    } else {
        vec![args.scheme.resolve()?]
    };
    let mut tables = Vec::with_capacity(schemes.len());
    for named in &schemes {
        let mut table = engine.critical_values(&named.scheme, args.mc.n, args.mc.level)?;
        table.scheme_id = named.id.clone();
        tables.push(table);
    }
    let mut out = args.output.open("critical-values")?;
    match args.output.format {
        Format::Csv => {
            write_metadata(&mut out, &mc_metadata(&args.mc))?;
            write_critical_csv(&mut out, &tables)?;
            out.flush()?;
        }
        Format::Json => {
            let value = json!({
                "metadata": metadata_json(&mc_metadata(&args.mc)),
                "tables": tables,
            });
            finish_json(out, &value)?;
        }
    }
    Ok(())
}

fn load_critical(
    source: &CriticalSource,
    named: &NamedScheme,
    mc: &MonteCarloArgs,
) -> CliResult<CriticalValueTable> {
    let Some(path) = &source.critical else {
        let mut table = engine(mc.replications, source.critical_seed)?.critical_values(
            &named.scheme,
            mc.n,
            mc.level,
        )?;
        table.scheme_id = named.id.clone();
        return Ok(table);
    };
    let is_json = path.extension().is_some_and(|e| e == "json");
    let table = if is_json {
        let value: serde_json::Value = serde_json::from_reader(File::open(path)?)?;
        let tables: Vec<CriticalValueTable> = match value.get("tables") {
            Some(tables) => serde_json::from_value(tables.clone())?,
            None => vec![serde_json::from_value(value)?],
        };
        tables
            .into_iter()
            .find(|t| t.scheme == named.scheme && t.n == mc.n)
            .ok_or(ptic::Error::SchemeMismatch)?
    } else {
        read_critical_csv(File::open(path)?)?
            .into_iter()
            .find(|row| row.scheme_id == named.id && row.n == mc.n)
            .ok_or(ptic::Error::SchemeMismatch)?
            .into_table(named.scheme.clone())
    };
    Ok(table)
}

fn power_metadata(
    named: &NamedScheme,
    mc: &MonteCarloArgs,
    table: &CriticalValueTable,
) -> Vec<(&'static str, String)> {
    let mut meta = scheme_metadata(named);
    meta.extend([
        ("n", mc.n.to_string()),
        ("level", table.level.to_string()),
        ("B", mc.replications.to_string()),
        ("seed", mc.seed.to_string()),
        ("critical_B", table.replications.to_string()),
        ("critical_seed", table.seed.to_string()),
    ]);
    meta
}

fn emit_power(
    output: &OutputArgs,
    name: &str,
    meta: &[(&str, String)],
    estimates: &[PowerEstimate],
) -> CliResult<()> {
    let mut out = output.open(name)?;
    match output.format {
        Format::Csv => {
            write_metadata(&mut out, meta)?;
            write_power_csv(&mut out, estimates)?;
            out.flush()?;
        }
        Format::Json => {
            let value = json!({ "metadata": metadata_json(meta), "estimates": estimates });
            finish_json(out, &value)?;
        }
    }
    Ok(())
}

fn power(args: PowerArgs) -> CliResult<()> {
    let engine = args.mc.engine()?;
    let named = args.scheme.resolve()?;
    let family = parse_family(&args.alt, "--alt")?;
    let table = load_critical(&args.critical, &named, &args.mc)?;
    let estimate = engine.power(&named.scheme, args.mc.n, &table, &family)?;
    let mut meta = power_metadata(&named, &args.mc, &table);
    meta.push(("alt", args.alt.clone()));
    emit_power(&args.output, "power", &meta, &[estimate])
}

fn power_curve(args: PowerCurveArgs) -> CliResult<()> {
    let engine = args.mc.engine()?;
    let named = args.scheme.resolve()?;
    let kind: FamilyKind = args
        .family
        .parse()
        .map_err(|e: ptic::Error| CliError::Usage(format!("--family: {e}")))?;
    let grid = args.grid.clone().unwrap_or_else(|| kind.default_grid());
    if grid.is_empty() {
        return Err(CliError::Usage("--grid is empty".into()));
    }
    for &p in &grid {
        kind.with_parameter(p)
            .map_err(|e| CliError::Usage(format!("--grid: {e}")))?;
    }
    let table = load_critical(&args.critical, &named, &args.mc)?;
    let curve = engine.power_curve(&named.scheme, args.mc.n, &table, kind, &grid)?;
    let mut meta = power_metadata(&named, &args.mc, &table);
    meta.push(("family", kind.name().to_string()));
    emit_power(&args.output, "power-curve", &meta, &curve)
}

fn read_sample(path: &Path) -> CliResult<CensoredSample> {
    let file =
        File::open(path).map_err(|e| CliError::Data(format!("--data {}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(serde_json::from_reader(file)?)
    } else {
        Ok(read_sample_csv(file)?)
    }
}

fn test(args: TestArgs) -> CliResult<()> {
    let engine = engine(args.replications, args.seed)?;
    let mut sample = read_sample(&args.data)?;
    let mut scheme_id = "data".to_string();
    if let Some(named) = args.scheme.resolve_optional()? {
        let same_times = named.scheme.times().len() == sample.scheme().times().len()
            && named
                .scheme
                .times()
                .iter()
                .zip(sample.scheme().times())
                .all(|(a, b)| (a - b).abs() <= 1e-12);
        if !same_times {
            return Err(CliError::Data(format!(
                "inspection times in {} differ from scheme {}",
                args.data.display(),
                named.id
            )));
        }
        sample = sample.with_scheme(named.scheme)?;
        scheme_id = named.id;
    }
    let null = parse_family(&args.null, "--null")?;
    // a general null is tested as uniformity at the mapped inspection times
    let mapped = transform_scheme(sample.scheme(), &null)?;
    let observed = test_general(&sample, &null)?;
    let p_values = engine.p_values(&observed, &mapped, sample.n())?;

    let meta = vec![
        ("data", args.data.display().to_string()),
        ("scheme", scheme_id),
        ("times", format_list(sample.scheme().times())),
        ("percentages", format_list(sample.scheme().percentages())),
        ("null", null.to_string()),
        ("n", sample.n().to_string()),
        ("B", args.replications.to_string()),
        ("seed", args.seed.to_string()),
    ];
    let mut out = args.output.open("test")?;
    match args.output.format {
        Format::Csv => {
            write_metadata(&mut out, &meta)?;
            write_statistics_csv(&mut out, &[("statistic", observed), ("p_value", p_values)])?;
            out.flush()?;
        }
        Format::Json => {
            let value = json!({
                "metadata": metadata_json(&meta),
                "statistics": observed,
                "p_values": p_values,
            });
            finish_json(out, &value)?;
        }
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> CliResult<()> {
    let named = args.scheme.resolve()?;
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let family = parse_family(&args.alt, "--alt")?;
    let mut rng = replication_rng(args.seed, args.rep);
    let sample = simulate_sample(&named.scheme, args.n, &family, &mut rng)?;
    let mut meta = scheme_metadata(&named);
    meta.extend([
        ("n", args.n.to_string()),
        ("alt", family.to_string()),
        ("seed", args.seed.to_string()),
        ("rep", args.rep.to_string()),
    ]);
    let mut out = args.output.open("simulate")?;
    match args.output.format {
        Format::Csv => {
            write_metadata(&mut out, &meta)?;
            write_sample_csv(&mut out, &sample)?;
            out.flush()?;
        }
        Format::Json => {
            let mut value = serde_json::to_value(&sample)?;
            value["metadata"] = metadata_json(&meta);
            finish_json(out, &value)?;
        }
    }
    Ok(())
}
