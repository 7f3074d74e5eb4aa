//! Command implementations behind the `cohesive` binary.

pub mod output;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cohesive_core::axioms::{self, SuiteEntry, TrialConfig};
use cohesive_core::golden;
use cohesive_core::scenarios::{
    builtin_datasets, has_feasible_coalition, run_scenario, sweep_exponent, Dataset, ExponentGrid,
    ScenarioSpec,
};
use cohesive_core::values::Branch;
use cohesive_core::Error;

use output::{Format, OutputTable};

pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_COMPUTATION: u8 = 3;

/// Exponents the axiom suite checks the cohesion values at.
pub const SUITE_EXPONENTS: [f64; 3] = [0.5, 1.0, 2.0];

const INFEASIBLE_NOTE: &str = "no feasible winning coalition";

#[derive(Debug, Parser)]
#[command(
    name = "cohesive",
    version,
    about = "Cohesion-sensitive Banzhaf and Shapley power indices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalized index of every party at one exponent.
    Compute(ComputeArgs),
    /// Normalized indices over a grid of exponents, in long format.
    Sweep(SweepArgs),
    /// Check the published reference values against the bundled datasets.
    Reproduce(ReproduceArgs),
    /// Run the randomized axiom checks.
    CheckAxioms(CheckAxiomsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Banzhaf,
    Shapley,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Banzhaf => Branch::Banzhaf,
            BranchArg::Shapley => Branch::Shapley,
        }
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Scenario document path, or `builtin:NAME` for a bundled dataset.
    #[arg(long)]
    pub data: String,
    #[arg(long)]
    pub scenario: String,
    /// Override the scenario's branch.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Cohesion exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub bmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub bmax: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Only claims whose id starts with this prefix.
    #[arg(long)]
    pub filter: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CheckAxiomsArgs {
    /// Only this branch (default: both).
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    #[arg(long, default_value_t = TrialConfig::default().trials as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = TrialConfig::default().seed)]
    pub seed: u64,
    /// Also run the four countermodels, which must fail their targets.
    #[arg(long)]
    pub countermodels: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

/// A failure that maps to a process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() {
            EXIT_INPUT
        } else {
            EXIT_COMPUTATION
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

/// Whether every check matched its expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Mismatch,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Compute(args) => cmd_compute(&args, stdout),
        Command::Sweep(args) => cmd_sweep(&args, stdout),
        Command::Reproduce(args) => cmd_reproduce(&args, stdout),
        Command::CheckAxioms(args) => cmd_check_axioms(&args, stdout),
    }
}

fn load(args: &DataArgs) -> Result<(Dataset, ScenarioSpec), CliError> {
    let dataset = Dataset::open(&args.data)?;
    let mut scenario = dataset.scenario(&args.scenario)?.clone();
    if let Some(branch) = args.branch {
        scenario.branch = branch.into();
    }
    Ok((dataset, scenario))
}

fn header(dataset: &Dataset, scenario: &ScenarioSpec) -> Result<OutputTable, CliError> {
    let mut table = OutputTable::default();
    table.meta("dataset", dataset.name());
    table.meta("schema_version", dataset.schema_version);
    table.meta("dataset_sha256", &dataset.hash);
    if !has_feasible_coalition(&dataset.parliament, scenario)? {
        table.meta("note", INFEASIBLE_NOTE);
    }
    Ok(table)
}

fn emit(table: &OutputTable, args: &DataArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError {
                code: EXIT_INPUT,
                message: format!("cannot write `{}`: {e}", path.display()),
            })?;
            let mut w = BufWriter::new(file);
            table.write(args.format, &mut w)?;
            w.flush()?;
        }
        None => table.write(args.format, stdout)?,
    }
    Ok(())
}

fn parties(dataset: &Dataset) -> Vec<String> {
    dataset.parliament.labels().map(str::to_string).collect()
}

pub fn cmd_compute(args: &ComputeArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let (dataset, scenario) = load(&args.data)?;
    let mut table = header(&dataset, &scenario)?;
    let profile = run_scenario(&dataset.parliament, &scenario, args.b)?;
    if profile.underflow {
        table.meta(
            "warning",
            "some positive cohesion weights underflowed to zero",
        );
    }
    table.push_profile(&scenario.name, &parties(&dataset), &profile);
    emit(&table, &args.data, stdout)?;
    Ok(Outcome::Success)
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let (dataset, scenario) = load(&args.data)?;
    let grid = if args.bmin.is_some() || args.bmax.is_some() || args.steps.is_some() {
        let (min, max, steps) = match scenario.grid {
            ExponentGrid::Uniform { min, max, steps } => (min, max, steps),
            ExponentGrid::List(_) => match ExponentGrid::default() {
                ExponentGrid::Uniform { min, max, steps } => (min, max, steps),
                ExponentGrid::List(_) => unreachable!(),
            },
        };
        Some(ExponentGrid::Uniform {
            min: args.bmin.unwrap_or(min),
            max: args.bmax.unwrap_or(max),
            steps: args.steps.unwrap_or(steps),
        })
    } else {
        None
    };
    let mut table = header(&dataset, &scenario)?;
    let sweep = sweep_exponent(&dataset, &scenario, grid.as_ref())?;
    if sweep.profiles.iter().any(|p| p.underflow) {
        table.meta(
            "warning",
            "some positive cohesion weights underflowed to zero",
        );
    }
    table.push_sweep(&sweep);
    emit(&table, &args.data, stdout)?;
    Ok(Outcome::Success)
}

pub fn cmd_reproduce(args: &ReproduceArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    reproduce_against(&builtin_datasets(), args.filter.as_deref(), stdout)
}

/// Runs the reference claims against `datasets` and prints one block per claim.
pub fn reproduce_against(
    datasets: &[Dataset],
    filter: Option<&str>,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let results = golden::reproduce(datasets, filter);
    if results.is_empty() {
        return Err(CliError {
            code: EXIT_INPUT,
            message: format!("no claim matches `{}`", filter.unwrap_or_default()),
        });
    }
    for r in &results {
        write!(stdout, "{r}")?;
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    writeln!(stdout, "{passed}/{} claims passed", results.len())?;
    Ok(if passed == results.len() {
        Outcome::Success
    } else {
        Outcome::Mismatch
    })
}

fn suite(args: &CheckAxiomsArgs) -> Vec<Box<dyn axioms::ValueFunctional>> {
    let branches: Vec<Branch> = match args.branch {
        Some(b) => vec![b.into()],
        None => Branch::ALL.to_vec(),
    };
    let mut functionals = axioms::positive_functionals(&branches, &SUITE_EXPONENTS);
    if args.countermodels {
        functionals.extend(axioms::countermodels());
    }
    functionals
}

pub fn cmd_check_axioms(
    args: &CheckAxiomsArgs,
    stdout: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let trials = usize::try_from(args.trials).map_err(|_| CliError {
        code: EXIT_INPUT,
        message: format!("--trials {} is too large", args.trials),
    })?;
    let cfg = TrialConfig::new(trials, args.seed);
    let mut entries: Vec<SuiteEntry> = Vec::new();
    for f in suite(args) {
        entries.extend(axioms::run_expectations(f.as_ref(), &cfg)?);
    }
    let unexpected = entries.iter().filter(|e| !e.as_expected()).count();

    match args.format {
        ReportFormat::Text => {
            writeln!(stdout, "# trials: {}", cfg.trials)?;
            writeln!(stdout, "# seed: {}", cfg.seed)?;
            writeln!(
                stdout,
                "# players: {}..={}",
                cfg.min_players, cfg.max_players
            )?;
            for e in &entries {
                let status = if e.as_expected() { "ok" } else { "UNEXPECTED" };
                writeln!(stdout, "{status} expected={} {}", e.expected, e.report)?;
            }
            writeln!(
                stdout,
                "{}/{} verdicts as expected",
                entries.len() - unexpected,
                entries.len()
            )?;
        }
        ReportFormat::Json => {
            let doc = serde_json::json!({
                "trials": cfg.trials,
                "seed": cfg.seed,
                "min_players": cfg.min_players,
                "max_players": cfg.max_players,
                "reports": entries,
            });
            serde_json::to_writer_pretty(&mut *stdout, &doc).map_err(io::Error::from)?;
            writeln!(stdout)?;
        }
    }
    Ok(if unexpected == 0 {
        Outcome::Success
    } else {
        Outcome::Mismatch
    })
}
