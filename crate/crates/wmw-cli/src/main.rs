//! `wmw` — two-sample AUC inference from the command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error.

mod input;
mod report;

use clap::{Args, Parser, Subcommand};
use input::{parse_generator, read_grouped, read_values, CsvOptions, LoadedData};
use report::{InputSummary, Report};
use std::path::PathBuf;
use std::process::ExitCode;
use wmw_core::inference::{Alternative, Method, TestConfig};
use wmw_core::mclab::{coverage_study, preset, run_simulation, Estimand, SimConfig};
use wmw_core::pseudomedian::{pseudomedian_ci, DEFAULT_GRID_K};
use wmw_core::{validate, Error as CoreError, Generator, TwoSampleData};

#[derive(Debug)]
pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 2,
        }
    }

    fn data(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::InvalidConfig(_) => CliError::usage(e.to_string()),
            _ => CliError::data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "wmw",
    about = "Two-sample AUC inference: tests of AUC = A0, pseudomedian intervals, simulations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test H0: AUC = A0 on two samples
    Test(TestArgs),
    /// Pseudomedian point estimate and confidence interval by test inversion
    Pseudomedian(PseudomedianArgs),
    /// Seeded Monte Carlo studies (calibration, coverage, AUC moments)
    Simulate(SimulateArgs),
}

#[derive(Args, Clone)]
struct DataArgs {
    /// CSV file with the x-sample (two-file mode)
    #[arg(long, value_name = "FILE")]
    x: Option<PathBuf>,
    /// CSV file with the y-sample (two-file mode)
    #[arg(long, value_name = "FILE")]
    y: Option<PathBuf>,
    /// Single CSV file holding both groups
    #[arg(long, value_name = "FILE", conflicts_with_all = ["x", "y"])]
    data: Option<PathBuf>,
    /// Group column (single-file mode)
    #[arg(long, value_name = "COL")]
    group_col: Option<String>,
    /// Value column (name, or 0-based index without a header)
    #[arg(long, value_name = "COL")]
    value_col: Option<String>,
    /// Label of the x group (single-file mode; default: first label seen)
    #[arg(long, value_name = "LABEL")]
    group_x: Option<String>,
    /// Label of the y group (single-file mode; default: second label seen)
    #[arg(long, value_name = "LABEL")]
    group_y: Option<String>,
    /// Field delimiter
    #[arg(long, default_value = ",", value_name = "CHAR")]
    delimiter: String,
    /// Treat the first row as data, not a header
    #[arg(long)]
    no_header: bool,
    /// Skip rows whose value fails numeric parsing instead of erroring
    #[arg(long)]
    skip_bad: bool,
}

impl DataArgs {
    fn csv_options(&self) -> Result<CsvOptions, CliError> {
        let bytes = self.delimiter.as_bytes();
        if bytes.len() != 1 {
            return Err(CliError::usage("--delimiter must be a single byte"));
        }
        Ok(CsvOptions {
            delimiter: bytes[0],
            has_header: !self.no_header,
            skip_bad: self.skip_bad,
        })
    }

    fn load(&self) -> Result<LoadedData, CliError> {
        let opts = self.csv_options()?;
        match (&self.x, &self.y, &self.data) {
            (Some(px), Some(py), None) => {
                let (x, sx) = read_values(px, self.value_col.as_deref(), &opts)?;
                let (y, sy) = read_values(py, self.value_col.as_deref(), &opts)?;
                Ok(LoadedData {
                    x,
                    y,
                    group_x_label: None,
                    group_y_label: None,
                    skipped_rows: sx + sy,
                })
            }
            (None, None, Some(pd)) => {
                let group_col = self
                    .group_col
                    .as_deref()
                    .ok_or_else(|| CliError::usage("single-file mode requires --group-col"))?;
                let value_col = self
                    .value_col
                    .as_deref()
                    .ok_or_else(|| CliError::usage("single-file mode requires --value-col"))?;
                read_grouped(
                    pd,
                    group_col,
                    value_col,
                    self.group_x.as_deref(),
                    self.group_y.as_deref(),
                    &opts,
                )
            }
            _ => Err(CliError::usage(
                "provide either --x FILE and --y FILE, or --data FILE",
            )),
        }
    }
}

#[derive(Args, Clone, Copy)]
struct OutputArgs {
    /// Emit the JSON report (default: text)
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit the text report
    #[arg(long)]
    text: bool,
}

impl OutputArgs {
    fn print(&self, report: &Report) {
        if self.json {
            print!("{}", report.to_json());
        } else {
            print!("{}", report.to_text());
        }
    }
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Null AUC value
    #[arg(long, default_value_t = 0.5)]
    a0: f64,
    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Variance framework: auto, eu, bc, plugin-z
    #[arg(long, default_value = "auto")]
    method: String,
    /// Alternative hypothesis: two-sided, less, greater
    #[arg(long, default_value = "two-sided")]
    alternative: String,
    /// Accepted for interface compatibility; the test itself is
    /// deterministic and ignores it
    #[arg(long, hide = true)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PseudomedianArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Significance level of the inverted tests
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Number of grid points for the inversion
    #[arg(long, default_value_t = DEFAULT_GRID_K)]
    grid_k: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Named preset: paper-s2, equal-normals, tied-normals
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Generator for the x side, e.g. "normal(0,1)",
    /// "discretized-normal(0,1,0.5)", "uniform(0,1)", "point-mass(0)"
    #[arg(long, value_name = "SPEC")]
    gen_x: Option<String>,
    /// Generator for the y side
    #[arg(long, value_name = "SPEC")]
    gen_y: Option<String>,
    /// What to estimate: auc-mean-sd, type1-rate, ci-coverage,
    /// pseudomedian-coverage
    #[arg(long, value_name = "NAME")]
    estimand: Option<String>,
    /// Size of the x-sample per replication
    #[arg(long)]
    n1: Option<usize>,
    /// Size of the y-sample per replication
    #[arg(long)]
    n2: Option<usize>,
    /// Number of replications
    #[arg(long)]
    reps: Option<u64>,
    /// RNG seed; replication r draws from stream (seed, r)
    #[arg(long)]
    seed: Option<u64>,
    /// Null AUC for the inner test of rate estimands
    #[arg(long, default_value_t = 0.5)]
    a0: f64,
    /// Significance level of the inner test
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Method of the inner test: auto, eu, bc, plugin-z
    #[arg(long, default_value = "auto")]
    method: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Test(args) => cmd_test(args),
        Command::Pseudomedian(args) => cmd_pseudomedian(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn loaded_to_data(loaded: &LoadedData) -> Result<TwoSampleData, CliError> {
    Ok(validate(&loaded.x, &loaded.y)?)
}

fn skip_warning(loaded: &LoadedData) -> Option<String> {
    (loaded.skipped_rows > 0).then(|| format!("skipped {} unparseable rows", loaded.skipped_rows))
}

fn cmd_test(args: TestArgs) -> Result<(), CliError> {
    let method = Method::parse(&args.method)
        .ok_or_else(|| CliError::usage(format!("unknown method {:?}", args.method)))?;
    let alternative = Alternative::parse(&args.alternative)
        .ok_or_else(|| CliError::usage(format!("unknown alternative {:?}", args.alternative)))?;
    let loaded = args.data.load()?;
    let data = loaded_to_data(&loaded)?;
    let cfg = TestConfig {
        a0: args.a0,
        alpha: args.alpha,
        method,
        alternative,
    };
    let mut result = wmw_core::wmw_test(&data, &cfg)?;
    if let Some(w) = skip_warning(&loaded) {
        result.warnings.push(w);
    }
    let input = InputSummary {
        n1: Some(data.n1()),
        n2: Some(data.n2()),
        group_x: loaded.group_x_label.clone(),
        group_y: loaded.group_y_label.clone(),
        a0: Some(args.a0),
        alpha: Some(args.alpha),
        method: Some(method.to_string()),
        alternative: Some(alternative.to_string()),
        ..InputSummary::default()
    };
    args.output.print(&Report::from_test(input, &result));
    Ok(())
}

fn cmd_pseudomedian(args: PseudomedianArgs) -> Result<(), CliError> {
    let loaded = args.data.load()?;
    let data = loaded_to_data(&loaded)?;
    let cfg = TestConfig {
        alpha: args.alpha,
        ..TestConfig::default()
    };
    let mut result = pseudomedian_ci(&data, &cfg, args.grid_k)?;
    if let Some(w) = skip_warning(&loaded) {
        result.warnings.push(w);
    }
    let input = InputSummary {
        n1: Some(data.n1()),
        n2: Some(data.n2()),
        group_x: loaded.group_x_label.clone(),
        group_y: loaded.group_y_label.clone(),
        alpha: Some(args.alpha),
        grid_k: Some(args.grid_k),
        ..InputSummary::default()
    };
    args.output
        .print(&Report::from_pseudomedian(input, &result));
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    configure_threads()?;

    let (mut cfg, mut test_cfg) = match &args.preset {
        Some(name) => {
            preset(name).ok_or_else(|| CliError::usage(format!("unknown preset {name:?}")))?
        }
        None => {
            let gen_x = args
                .gen_x
                .as_deref()
                .ok_or_else(|| CliError::usage("simulate needs --preset or --gen-x/--gen-y"))?;
            let gen_y = args
                .gen_y
                .as_deref()
                .ok_or_else(|| CliError::usage("simulate needs --preset or --gen-x/--gen-y"))?;
            let estimand = args
                .estimand
                .as_deref()
                .ok_or_else(|| CliError::usage("simulate without a preset needs --estimand"))?;
            let estimand = Estimand::parse(estimand)
                .ok_or_else(|| CliError::usage(format!("unknown estimand {estimand:?}")))?;
            let cfg = SimConfig {
                n1: 50,
                n2: 50,
                reps: 1000,
                seed: 1729,
                generator_x: parse_generator(gen_x)?,
                generator_y: parse_generator(gen_y)?,
                estimand,
            };
            (cfg, TestConfig::default())
        }
    };
    if let Some(e) = &args.estimand {
        cfg.estimand =
            Estimand::parse(e).ok_or_else(|| CliError::usage(format!("unknown estimand {e:?}")))?;
    }
    if let Some(g) = &args.gen_x {
        cfg.generator_x = parse_generator(g)?;
    }
    if let Some(g) = &args.gen_y {
        cfg.generator_y = parse_generator(g)?;
    }
    if let Some(n1) = args.n1 {
        cfg.n1 = n1;
    }
    if let Some(n2) = args.n2 {
        cfg.n2 = n2;
    }
    if let Some(reps) = args.reps {
        cfg.reps = reps;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    test_cfg.a0 = args.a0;
    test_cfg.alpha = args.alpha;
    test_cfg.method = Method::parse(&args.method)
        .ok_or_else(|| CliError::usage(format!("unknown method {:?}", args.method)))?;

    let summary = match cfg.estimand {
        Estimand::AucMeanSd => run_simulation(&cfg)?,
        _ => coverage_study(&cfg, &test_cfg)?,
    };

    let input = InputSummary {
        n1: Some(cfg.n1),
        n2: Some(cfg.n2),
        a0: Some(test_cfg.a0),
        alpha: Some(test_cfg.alpha),
        method: Some(test_cfg.method.resolve().to_string()),
        preset: args.preset.clone(),
        reps: Some(cfg.reps),
        seed: Some(cfg.seed),
        estimand: Some(cfg.estimand.to_string()),
        generator_x: Some(format_generator(&cfg.generator_x)),
        generator_y: Some(format_generator(&cfg.generator_y)),
        ..InputSummary::default()
    };
    args.output.print(&Report::from_simulation(
        input,
        &cfg.estimand.to_string(),
        &summary,
    ));
    Ok(())
}

fn format_generator(g: &Generator) -> String {
    match *g {
        Generator::Normal { mean, sd } => format!("normal({mean},{sd})"),
        Generator::DiscretizedNormal { mean, sd, step } => {
            format!("discretized-normal({mean},{sd},{step})")
        }
        Generator::Uniform { lo, hi } => format!("uniform({lo},{hi})"),
        Generator::PointMass { at } => format!("point-mass({at})"),
    }
}

/// WMW_THREADS caps the rayon pool used by the simulation engine.
fn configure_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("WMW_THREADS") {
        let threads: usize = raw
            .parse()
            .map_err(|_| CliError::usage(format!("WMW_THREADS must be an integer, got {raw:?}")))?;
        if threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| CliError::usage(format!("cannot configure thread pool: {e}")))?;
        }
    }
    Ok(())
}
