use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};
use coupler::check::{run_checks, CheckOptions, DEFAULT_CHECK_TOL};
use coupler::csv::emit_csv;
use coupler::presets::{describe, preset, PRESET_NAMES};
use coupler::scenario::load_scenario;
use coupler::{run_scenario, CouplerError, ScenarioConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_CHECK: u8 = 4;

/// Quantum statistics of a Raman/Brillouin nonlinear coupler.
#[derive(Parser)]
#[command(name = "coupler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a scenario over z and write CSV tables.
    Run {
        /// Scenario file (TOML).
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        scenario: Option<PathBuf>,
        /// Built-in scenario name, see `list-presets`.
        #[arg(long)]
        preset: Option<String>,
        /// Output CSV path, or a directory to receive `<name>.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the final propagation length.
        #[arg(long)]
        z_max: Option<f64>,
        /// Override the number of grid points.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Run the cross-method consistency suite.
    Check {
        /// Tolerance for propagator comparisons.
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
    /// List built-in scenarios.
    ListPresets,
}

enum Failure {
    Usage(String),
    Core(CouplerError),
    Check(usize),
}

impl From<CouplerError> for Failure {
    fn from(e: CouplerError) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(e: &CouplerError) -> u8 {
    match e {
        CouplerError::Validation(_) | CouplerError::Unsupported(_) | CouplerError::Parse { .. } => EXIT_VALIDATION,
        CouplerError::Numerical(_) | CouplerError::Truncation(_) => EXIT_NUMERICAL,
        CouplerError::Io { .. } => EXIT_USAGE,
    }
}

fn output_path(out: Option<PathBuf>, name: &str) -> PathBuf {
    let file = format!("{name}.csv");
    match out {
        None => PathBuf::from(file),
        Some(p) if p.is_dir() || p.as_os_str().to_string_lossy().ends_with('/') => p.join(file),
        Some(p) => p,
    }
}

fn load(scenario: Option<PathBuf>, preset_name: Option<String>) -> Result<ScenarioConfig, Failure> {
    match (scenario, preset_name) {
        (Some(path), _) => {
            let mut cfg = load_scenario(&path)?;
            if cfg.name.is_none() {
                cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            }
            Ok(cfg)
        }
        (None, Some(name)) if PRESET_NAMES.contains(&name.as_str()) => Ok(preset(&name)?),
        (None, Some(name)) => Err(Failure::Usage(format!(
            "unknown preset `{name}`; available: {}",
            PRESET_NAMES.join(", ")
        ))),
        (None, None) => Err(Failure::Usage("one of --scenario or --preset is required".into())),
    }
}

fn run(
    scenario: Option<PathBuf>,
    preset_name: Option<String>,
    out: Option<PathBuf>,
    z_max: Option<f64>,
    steps: Option<usize>,
) -> Result<(), Failure> {
    let mut cfg = load(scenario, preset_name)?;
    if let Some(z) = z_max {
        cfg.z_max = z;
    }
    if let Some(n) = steps {
        cfg.z_steps = n;
    }
    cfg.validate()?;
    let result = run_scenario(&cfg)?;
    for (key, value) in &result.metadata {
        if key == "warning" {
            eprintln!("warning: {value}");
        }
    }
    let path = output_path(out, &result.name);
    for written in emit_csv(&result, &path)? {
        eprintln!("wrote {}", written.display());
    }
    Ok(())
}

fn check(tol: f64) -> Result<(), Failure> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let opts = CheckOptions {
        tol,
        oracle: cfg!(feature = "dev-oracle"),
    };
    let items = run_checks(&opts)?;
    for item in &items {
        println!("{}", item.line());
    }
    match items.iter().filter(|i| !i.passed).count() {
        0 => Ok(()),
        n => Err(Failure::Check(n)),
    }
}

fn list_presets() {
    for name in PRESET_NAMES {
        println!("{name:6} {}", describe(name).unwrap_or_default());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let outcome = match cli.command {
        Command::Run {
            scenario,
            preset,
            out,
            z_max,
            steps,
        } => run(scenario, preset, out, z_max, steps),
        Command::Check { tol } => check(tol),
        Command::ListPresets => {
            list_presets();
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Check(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(EXIT_CHECK)
        }
    }
}
