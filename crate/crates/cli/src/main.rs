use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cellcov_cli::{compare_models, parse_config, read_csv, run_sweep, sweep, CliError, ExperimentConfig, Model};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cellcov", version, about = "Outage and handover in Poisson and hexagonal cellular networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; defaults to the config's `output` key, then stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    snapshots: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form / quadrature curve of the Poisson model.
    Analytic(Common),
    /// Monte Carlo of the Poisson model.
    Simulate(Common),
    /// Monte Carlo of the hexagonal model.
    Hex(Common),
    /// Every enabled model.
    Sweep(Common),
    /// Threshold gap (dB) between the Poisson and hexagonal outage curves.
    Compare {
        /// Existing sweep CSV; without it the sweep is run from --config.
        #[arg(long, required_unless_present = "config", conflicts_with = "config")]
        input: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        snapshots: Option<u64>,
        /// Outage level at which the curves are compared.
        #[arg(long, default_value_t = 0.5)]
        level: f64,
    },
}

fn load(path: &Path, seed: Option<u64>, snapshots: Option<u64>) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut settings = parse_config(&text)?.settings;
    if let Some(seed) = seed {
        settings.seed = seed;
    }
    if let Some(n) = snapshots {
        settings.snapshots = n;
    }
    ExperimentConfig::from_settings(settings)
}

fn write_output(common: &Common, config: &ExperimentConfig, csv: &str) -> Result<(), CliError> {
    let target = common
        .output
        .clone()
        .or_else(|| config.settings.output.as_ref().map(PathBuf::from));
    match target {
        Some(path) => std::fs::write(&path, csv).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run_models(common: &Common, models: Option<&[Model]>) -> Result<(), CliError> {
    let config = load(&common.config, common.seed, common.snapshots)?;
    let models = models.map(<[Model]>::to_vec).unwrap_or_else(|| sweep::default_models(&config));
    let csv = cellcov_cli::sweep_csv(&config, &models)?;
    write_output(common, &config, &csv)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analytic(c) => run_models(&c, Some(&[Model::PoissonAnalytic])),
        Command::Simulate(c) => run_models(&c, Some(&[Model::PoissonMc])),
        Command::Hex(c) => run_models(&c, Some(&[Model::HexagonalMc])),
        Command::Sweep(c) => run_models(&c, None),
        Command::Compare {
            input,
            config,
            seed,
            snapshots,
            level,
        } => {
            let rows = match (input, config) {
                (Some(path), _) => {
                    let file = std::fs::File::open(&path).map_err(|e| CliError::io(&path, e))?;
                    read_csv(file)?
                }
                (None, Some(path)) => {
                    let config = load(&path, seed, snapshots)?;
                    run_sweep(&config, &[Model::PoissonAnalytic, Model::HexagonalMc])
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let result = compare_models(&rows, level)?;
            println!("{}", serde_json::to_string_pretty(&result).expect("comparison serializes"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
