//! `gmqd`: genuine multipartite discord from the command line.
//!
//! Three subcommands share the input and optimizer flags:
//! `compute` (per-partition and genuine discord), `sweep` (one family
//! parameter over a grid) and `classify` (classicality verdict with witness).
//! Exit codes are 0 on success or a classical verdict, 1 for a nonclassical
//! verdict and 2 for any input or numerical error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmqd_core::{
    gamma_discord, genuine_discord, is_classical, make_state, params_from_basis, DensityMatrix,
    Error, OptimizerConfig, Partition, DEFAULT_CLASSICAL_TOL,
};

pub mod error;
pub mod input;
pub mod report;

pub use error::{CliError, CliResult};
pub use input::{load_state, StateFile};
pub use report::{
    ClassifyReport, ConfigEcho, Genuine, InputDescriptor, PartitionResult, RunReport, SweepReport,
    SweepRow, WitnessReport,
};

#[derive(Debug, Parser)]
#[command(name = "gmqd", version, about = "Genuine multipartite quantum discord")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discord for every partition (default) or a single one.
    Compute(ComputeArgs),
    /// Genuine discord along one parameter of a state family (CSV by default).
    Sweep(SweepArgs),
    /// Decide genuine classicality; exits 0 if classical, 1 otherwise.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// JSON state file with keys dims, re, im.
    #[arg(long, value_name = "FILE")]
    pub state: Option<PathBuf>,
    /// Family spec such as `bell`, `ghz:n=3`, `werner:z=0.5`, `product:2x2`.
    #[arg(long, value_name = "SPEC")]
    pub family: Option<String>,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Restarts per partition (default 16, or 48 for measured dimension >= 4).
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long, default_value_t = OptimizerConfig::default().max_iterations)]
    pub max_iters: usize,
    /// Simplex convergence threshold on objective values.
    #[arg(long, default_value_t = OptimizerConfig::default().objective_tolerance)]
    pub tol: f64,
    /// Master seed for restarts and for seeded families without their own seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl OptimizerArgs {
    pub fn config(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::with_seed(self.seed);
        if let Some(r) = self.restarts {
            cfg.restarts = r;
            cfg.restarts_large = r;
        }
        cfg.max_iterations = self.max_iters;
        cfg.objective_tolerance = self.tol;
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Single partition label, e.g. `1`, `23` or `1,10`.
    #[arg(long, conflicts_with = "all_partitions")]
    pub partition: Option<String>,
    /// Evaluate every partition (the default).
    #[arg(long)]
    pub all_partitions: bool,
    /// Record wall time per partition (reports are then not reproducible).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Family with one sweepable parameter: `werner` (z) or `depolarized-ghz` (p).
    #[arg(long, value_name = "SPEC")]
    pub family: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Largest genuine discord still called classical.
    #[arg(long, default_value_t = DEFAULT_CLASSICAL_TOL)]
    pub classical_tol: f64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs a parsed command, writing the report to `stdout` unless `--out` is
/// given. Returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Compute(args) => {
            let cfg = args.optimizer.config();
            let (input, rho) = load_input(&args.input, cfg.master_seed)?;
            let report = compute_report(input, &rho, args.partition.as_deref(), &cfg, args.timing)?;
            emit(
                &args.output,
                Format::Table,
                stdout,
                |out, format| match format {
                    Format::Json => report::write_json(out, &report),
                    Format::Csv => report.write_csv(out),
                    Format::Table => report.write_table(out),
                },
            )?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let cfg = args.optimizer.config();
            let report = sweep_report(&args.family, args.from, args.to, args.steps, &cfg)?;
            emit(
                &args.output,
                Format::Csv,
                stdout,
                |out, format| match format {
                    Format::Json => report::write_json(out, &report),
                    Format::Csv => report.write_csv(out),
                    Format::Table => report.write_table(out),
                },
            )?;
            Ok(0)
        }
        Command::Classify(args) => {
            let cfg = args.optimizer.config();
            let (input, rho) = load_input(&args.input, cfg.master_seed)?;
            let report = classify_report(input, &rho, &cfg, args.classical_tol)?;
            emit(
                &args.output,
                Format::Table,
                stdout,
                |out, format| match format {
                    Format::Json => report::write_json(out, &report),
                    Format::Csv => report.write_csv(out),
                    Format::Table => report.write_table(out),
                },
            )?;
            Ok(if report.classical { 0 } else { 1 })
        }
    }
}

fn emit<F>(args: &OutputArgs, default: Format, stdout: &mut dyn Write, write: F) -> CliResult<()>
where
    F: Fn(&mut dyn Write, Format) -> CliResult<()>,
{
    let format = args.format.unwrap_or(default);
    match &args.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file, format)?;
            file.flush()?;
        }
        None => {
            write(stdout, format)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub fn load_input(args: &InputArgs, seed: u64) -> CliResult<(InputDescriptor, DensityMatrix)> {
    match (&args.state, &args.family) {
        (Some(path), None) => {
            let rho = load_state(path)?;
            let path = path.display().to_string();
            Ok((InputDescriptor::File { path }, rho))
        }
        (None, Some(spec)) => {
            let family = input::resolve_family(spec, seed)?;
            let rho = input::family_state(&family)?;
            let spec = family.to_string();
            Ok((InputDescriptor::Family { spec }, rho))
        }
        _ => Err(CliError::Usage(
            "exactly one of --state or --family is required".into(),
        )),
    }
}

fn require_parties(rho: &DensityMatrix) -> CliResult<()> {
    if rho.n_parties() < 2 {
        return Err(Error::PartyCount {
            expected: 2,
            found: rho.n_parties(),
        }
        .into());
    }
    Ok(())
}

/// First index of the smallest value.
fn argmin(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Discord for one partition label, or for every partition plus the genuine
/// value when `partition` is `None`.
pub fn compute_report(
    input: InputDescriptor,
    rho: &DensityMatrix,
    partition: Option<&str>,
    cfg: &OptimizerConfig,
    timing: bool,
) -> CliResult<RunReport> {
    require_parties(rho)?;
    let n = rho.n_parties();
    let gammas = match partition {
        Some(label) => vec![Partition::parse(label, n)?],
        None => Partition::all(n)?,
    };
    let mut partitions = Vec::with_capacity(gammas.len());
    for gamma in &gammas {
        let start = Instant::now();
        let r = gamma_discord(rho, gamma, cfg)?;
        let elapsed = timing.then(|| start.elapsed().as_secs_f64());
        partitions.push(PartitionResult::new(&r, elapsed));
    }
    let genuine = partition.is_none().then(|| {
        let i = argmin(partitions.iter().map(|p| p.value));
        Genuine {
            value: partitions[i].value,
            argmin: partitions[i].partition.clone(),
        }
    });
    Ok(RunReport {
        input,
        dims: rho.dims().to_vec(),
        config: cfg.into(),
        partitions,
        genuine,
    })
}

pub fn classify_report(
    input: InputDescriptor,
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
    tolerance: f64,
) -> CliResult<ClassifyReport> {
    require_parties(rho)?;
    let verdict = is_classical(rho, cfg, tolerance)?;
    let witness = verdict.witness.map(|w| WitnessReport {
        partition: w.gamma.label(),
        disturbance: w.disturbance,
        angles: params_from_basis(&w.measurement).into_angles(),
    });
    Ok(ClassifyReport {
        input,
        dims: rho.dims().to_vec(),
        config: cfg.into(),
        tolerance,
        classical: verdict.classical,
        genuine: Genuine {
            value: verdict.report.genuine_value,
            argmin: verdict.report.argmin_gamma().label(),
        },
        witness,
    })
}

/// Evenly spaced values from `from` to `to` inclusive.
pub fn sweep_values(from: f64, to: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Usage("--from and --to must be finite".into()));
    }
    match steps {
        0 => Err(CliError::Usage("--steps must be at least 1".into())),
        1 if from != to => Err(CliError::Usage(
            "--steps 1 requires --from equal to --to".into(),
        )),
        1 => Ok(vec![from]),
        _ => Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    to
                } else {
                    from + (to - from) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

pub fn sweep_report(
    spec: &str,
    from: f64,
    to: f64,
    steps: usize,
    cfg: &OptimizerConfig,
) -> CliResult<SweepReport> {
    let family = input::resolve_family(spec, cfg.master_seed)?;
    let Some(parameter) = family.sweep_parameter() else {
        return Err(CliError::Usage(format!(
            "family {:?} has no sweepable parameter (use werner or depolarized-ghz)",
            family.name()
        )));
    };
    let values = sweep_values(from, to, steps)?;
    let mut rows = Vec::with_capacity(values.len());
    let mut labels = Vec::new();
    for value in values {
        let rho = make_state(&family.with_sweep_value(value)?)?;
        let report = genuine_discord(&rho, cfg)?;
        labels = report.per_gamma.iter().map(|r| r.gamma.label()).collect();
        rows.push(SweepRow {
            value,
            discord: report.per_gamma.iter().map(|r| r.value).collect(),
            genuine: report.genuine_value,
            argmin: report.argmin_gamma().label(),
        });
    }
    Ok(SweepReport {
        family: family.to_string(),
        parameter: parameter.to_string(),
        partitions: labels,
        config: cfg.into(),
        rows,
    })
}
