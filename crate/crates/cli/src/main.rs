//! `jbe`: edge-law curves, eigenvalue sampling and validation suites for
//! Jacobi β-ensembles.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use jacobi_edge::edge_laws::{self, CurveMode, Edge, Scale};
use jacobi_edge::montecarlo::{run_experiment, Predictions};
use jacobi_edge::sampling::{self, Method, SamplerConfig, Want};
use jacobi_edge::validate::{run_suite, Suite};
use jacobi_edge::{EnsembleParams, Error};

use output::{read_manifest, render, write_output, Format, Payload, RunManifest, Table, SCHEMA_VERSION};

/// Environment variable that fixes the worker-thread count.
const THREADS_ENV: &str = "JBE_THREADS";

#[derive(Parser)]
#[command(name = "jbe", version, about = "Extreme-eigenvalue laws of Jacobi beta-ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the distribution of the smallest or largest eigenvalue.
    Cdf(CdfArgs),
    /// Draw eigenvalues from a random-matrix model.
    Sample(SampleArgs),
    /// Compare sampled smallest eigenvalues with the predicted laws.
    Experiment(ExperimentArgs),
    /// Run a validation suite and write a pass/fail report.
    Validate(ValidateArgs),
    /// Re-run the command recorded in an output file's manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct EnsembleArgs {
    /// Matrix size.
    #[arg(long = "N", alias = "n")]
    n: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    alpha1: f64,
    #[arg(long, allow_negative_numbers = true)]
    alpha2: f64,
}

impl EnsembleArgs {
    fn params(&self) -> Result<EnsembleParams, Error> {
        EnsembleParams::new(self.n, self.beta, self.alpha1, self.alpha2)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum EdgeArg {
    Smallest,
    Largest,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Exact,
    TwoTerm,
    Limit,
    JueDet,
    Recentred,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum ScaleArg {
    HardEdge,
    Raw,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    KillipNenciu,
    DoubleWishart,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum WantArg {
    Smallest,
    All,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum SuiteArg {
    Identities,
    Figures,
    Convergence,
}

/// Flags that affect where output goes but not what it contains.
#[derive(Args, Clone, Debug, Default)]
struct Sink {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record the wall-clock time in the manifest (breaks byte reproducibility).
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct CdfArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long, value_enum, default_value = "smallest")]
    edge: EdgeArg,
    #[arg(long, value_enum, default_value = "two-term")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "hard-edge")]
    scale: ScaleArg,
    /// `start:stop:count` or a comma-separated list; defaults to 201 points
    /// on [0, 10] (hard edge) or [0, 1] (raw).
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    #[serde(skip)]
    sink: Sink,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct SampleArgs {
    #[arg(long, value_enum, default_value = "killip-nenciu")]
    method: MethodArg,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "smallest")]
    want: WantArg,
    /// Draws per RNG stream.
    #[arg(long, default_value_t = 250)]
    batch_size: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    #[serde(skip)]
    sink: Sink,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct ExperimentArgs {
    #[arg(long, value_enum, default_value = "killip-nenciu")]
    method: MethodArg,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 250)]
    batch_size: usize,
    /// Hard-edge grid, as for `cdf`.
    #[arg(long)]
    grid: Option<String>,
    /// Also compare with the exact finite-N law.
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    #[serde(skip)]
    sink: Sink,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct ValidateArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// JSON report path (stdout when omitted).
    #[arg(long)]
    #[serde(skip)]
    report: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    timestamp: bool,
}

#[derive(Args, Clone, Debug)]
struct ReplayArgs {
    /// File written by an earlier run.
    file: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(spec: Option<&str>, scale: Scale) -> Result<Vec<f64>, Error> {
    let Some(spec) = spec else {
        return Ok(match scale {
            Scale::HardEdge => edge_laws::default_grid(),
            Scale::Raw => edge_laws::linear_grid(0.0, 1.0, 201),
        });
    };
    let bad = || Error::InvalidParameter(format!("cannot parse grid '{spec}'; use start:stop:count or a,b,c"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if count == 0 || stop < start {
            return Err(bad());
        }
        Ok(edge_laws::linear_grid(start, stop, count))
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect()
    }
}

fn manifest(command: &str, parameters: Value, seed: Option<u64>, timestamp: bool) -> RunManifest {
    RunManifest {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        parameters,
        seed,
        library_version: jacobi_edge::VERSION.to_string(),
        timestamp: timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
        sha256: String::new(),
        notes: None,
    }
}

fn cmd_cdf(args: &CdfArgs) -> Result<()> {
    let p = args.ensemble.params()?;
    let scale = match args.scale {
        ScaleArg::HardEdge => Scale::HardEdge,
        ScaleArg::Raw => Scale::Raw,
    };
    let edge = match args.edge {
        EdgeArg::Smallest => Edge::Smallest,
        EdgeArg::Largest => Edge::Largest,
    };
    let mode = match args.mode {
        ModeArg::Exact => CurveMode::Exact,
        ModeArg::TwoTerm => CurveMode::TwoTerm,
        ModeArg::Limit => CurveMode::Limit,
        ModeArg::JueDet => CurveMode::JueDet,
        ModeArg::Recentred => CurveMode::Recentred,
    };
    let grid = parse_grid(args.grid.as_deref(), scale)?;
    let curve = edge_laws::tabulate(&p, edge, scale, mode, &grid)?;
    let first = match scale {
        Scale::HardEdge => "x",
        Scale::Raw => "xi",
    };
    let table = Table {
        columns: [first, "leading", "correction", "total", "exact", "total_unclamped"]
            .map(String::from)
            .to_vec(),
        rows: curve
            .points
            .iter()
            .map(|pt| {
                vec![
                    Some(pt.abscissa),
                    Some(pt.leading),
                    Some(pt.correction),
                    Some(pt.clamped_total()),
                    pt.exact,
                    Some(pt.total),
                ]
            })
            .collect(),
    };
    let m = manifest("cdf", serde_json::to_value(args)?, None, args.sink.timestamp);
    write_output(
        args.sink.out.as_deref(),
        &render(args.format, m, Payload::Table(table))?,
    )
}

fn sampler_config(
    method: MethodArg,
    ensemble: &EnsembleArgs,
    seed: u64,
    batch_size: usize,
    want: Want,
) -> Result<SamplerConfig, Error> {
    let mut cfg = SamplerConfig::new(
        ensemble.params()?,
        match method {
            MethodArg::KillipNenciu => Method::KillipNenciu,
            MethodArg::DoubleWishart => Method::DoubleWishart,
        },
        seed,
    );
    cfg.batch_size = batch_size;
    cfg.want = want;
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_sample(args: &SampleArgs) -> Result<()> {
    let want = match args.want {
        WantArg::Smallest => Want::SmallestOnly,
        WantArg::All => Want::AllEigenvalues,
    };
    let cfg = sampler_config(args.method, &args.ensemble, args.seed, args.batch_size, want)?;
    let set = sampling::sample(&cfg, args.count)?;
    let mut columns = vec!["draw".to_string()];
    match want {
        Want::SmallestOnly => columns.push("smallest".into()),
        Want::AllEigenvalues => columns.extend((1..=set.per_draw).map(|k| format!("lambda_{k}"))),
    }
    let rows = (0..set.count)
        .map(|i| {
            let mut r = vec![Some(i as f64)];
            r.extend(set.draw(i).iter().map(|v| Some(*v)));
            r
        })
        .collect();
    let mut m = manifest(
        "sample",
        serde_json::to_value(args)?,
        Some(args.seed),
        args.sink.timestamp,
    );
    m.notes = Some(serde_json::json!({ "cholesky_resamples": set.cholesky_resamples }));
    let text = render(args.format, m, Payload::Table(Table { columns, rows }))?;
    write_output(args.sink.out.as_deref(), &text)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let cfg = sampler_config(
        args.method,
        &args.ensemble,
        args.seed,
        args.batch_size,
        Want::SmallestOnly,
    )?;
    let grid = parse_grid(args.grid.as_deref(), Scale::HardEdge)?;
    let report = run_experiment(&cfg, args.count, &grid, Predictions { exact: args.exact })?;
    let table = Table {
        columns: ["x", "empirical", "leading", "two_term", "exact"]
            .map(String::from)
            .to_vec(),
        rows: report
            .points
            .iter()
            .map(|p| vec![Some(p.x), Some(p.empirical), Some(p.leading), Some(p.two_term), p.exact])
            .collect(),
    };
    let mut m = manifest(
        "experiment",
        serde_json::to_value(args)?,
        Some(args.seed),
        args.sink.timestamp,
    );
    m.notes = Some(serde_json::json!({
        "ks_leading": report.ks_leading,
        "ks_two_term": report.ks_two_term,
        "ks_exact": report.ks_exact,
        "ks_critical": report.ks_critical,
        "cholesky_resamples": report.cholesky_resamples,
    }));
    write_output(
        args.sink.out.as_deref(),
        &render(args.format, m, Payload::Table(table))?,
    )
}

/// Returns whether every check passed.
fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    let suite = match args.suite {
        SuiteArg::Identities => Suite::Identities,
        SuiteArg::Figures => Suite::Figures,
        SuiteArg::Convergence => Suite::Convergence,
    };
    let report = run_suite(suite, args.seed)?;
    for c in &report.checks {
        eprintln!(
            "{} {} = {:e} (allowed [{:e}, {:e}])",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.value,
            c.lower,
            c.upper
        );
    }
    let m = manifest("validate", serde_json::to_value(args)?, Some(args.seed), args.timestamp);
    let text = render(Format::Json, m, Payload::Json(serde_json::to_value(&report)?))?;
    write_output(args.report.as_deref(), &text)?;
    Ok(report.passed)
}

fn cmd_replay(args: &ReplayArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let m = read_manifest(&text)?;
    let params = m.parameters;
    match m.command.as_str() {
        "cdf" => {
            let mut a: CdfArgs = serde_json::from_value(params)?;
            a.sink.out = args.out.clone();
            cmd_cdf(&a).map(|_| true)
        }
        "sample" => {
            let mut a: SampleArgs = serde_json::from_value(params)?;
            a.sink.out = args.out.clone();
            cmd_sample(&a).map(|_| true)
        }
        "experiment" => {
            let mut a: ExperimentArgs = serde_json::from_value(params)?;
            a.sink.out = args.out.clone();
            cmd_experiment(&a).map(|_| true)
        }
        "validate" => {
            let mut a: ValidateArgs = serde_json::from_value(params)?;
            a.report = args.out.clone();
            cmd_validate(&a)
        }
        other => anyhow::bail!("unknown command '{other}' in manifest"),
    }
}

/// 2: invalid parameters; 3: parameters valid but not for this mode or
/// outside its envelope; 4: any other failure. Validation failures exit 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidParameter(_)) | Some(Error::Domain(_)) | Some(Error::LowerParameterPole(_)) => 2,
        Some(Error::ModeMismatch(_)) | Some(Error::OutsideEnvelope(_)) => 3,
        _ => 4,
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Cdf(a) => cmd_cdf(&a).map(|_| true),
        Command::Sample(a) => cmd_sample(&a).map(|_| true),
        Command::Experiment(a) => cmd_experiment(&a).map(|_| true),
        Command::Validate(a) => cmd_validate(&a),
        Command::Replay(a) => cmd_replay(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid(Some("0:1:3"), Scale::HardEdge).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid(Some("0.5, 2"), Scale::HardEdge).unwrap(), vec![0.5, 2.0]);
        assert_eq!(parse_grid(None, Scale::HardEdge).unwrap().len(), 201);
        assert_eq!(*parse_grid(None, Scale::Raw).unwrap().last().unwrap(), 1.0);
        assert!(parse_grid(Some("1:0:3"), Scale::Raw).is_err());
        assert!(parse_grid(Some("a,b"), Scale::Raw).is_err());
    }

    #[test]
    fn error_classes() {
        let e = anyhow::Error::from(Error::ModeMismatch("x".into()));
        assert_eq!(exit_code(&e), 3);
        let e = anyhow::Error::from(Error::InvalidParameter("x".into()));
        assert_eq!(exit_code(&e), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 4);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
