use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use triphoton_cli::commands::{cmd_counts, cmd_fit, cmd_fringe, cmd_reproduce};
use triphoton_cli::config::PartialConfig;
use triphoton_cli::CliError;

#[derive(Parser)]
#[command(
    name = "triphoton",
    version,
    about = "Three-photon interference simulator: fringe scans, counting runs, harmonic fits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a fringe scan and write it as CSV
    Fringe(ScenarioArgs),
    /// Simulate seeded detector counts over a fringe scan
    Counts(ScenarioArgs),
    /// Fit the harmonic model to a fringe or counts CSV
    Fit(FitArgs),
    /// Re-derive the headline numbers and report PASS/FAIL
    Reproduce,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Flat key=value config file; flags below override it
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Measurement scheme: asym | noon
    #[arg(long)]
    scheme: Option<String>,
    /// Fringe model: ideal | multimode
    #[arg(long)]
    model: Option<String>,
    /// First scan phase in radians
    #[arg(long)]
    phase_start: Option<f64>,
    /// End of the scan (exclusive), radians
    #[arg(long)]
    phase_stop: Option<f64>,
    /// Number of scan points
    #[arg(long)]
    points: Option<usize>,
    /// Pump bandwidth (multimode, spectral input)
    #[arg(long)]
    sigma_p: Option<f64>,
    /// Filter bandwidth (multimode, spectral input)
    #[arg(long)]
    sigma_f: Option<f64>,
    /// Pair delay on the H photons (units of 1/bandwidth)
    #[arg(long)]
    delta_t_h: Option<f64>,
    /// Pair delay on the V photon
    #[arg(long)]
    delta_t_v: Option<f64>,
    /// Symmetrize the joint spectral amplitude
    #[arg(long)]
    symmetrized: Option<bool>,
    /// Quadrature nodes per axis
    #[arg(long)]
    nodes: Option<usize>,
    /// Pair-exchange overlap ratio E/A (multimode, direct input)
    #[arg(long)]
    e_over_a: Option<f64>,
    /// Spatial-mismatch visibility factor
    #[arg(long)]
    v1: Option<f64>,
    /// Detected rate per unit curve value, counts/s
    #[arg(long)]
    rate_scale: Option<f64>,
    /// Integration time per point, seconds
    #[arg(long)]
    duration: Option<f64>,
    /// Flat accidental background rate, counts/s
    #[arg(long)]
    bg_rate: Option<f64>,
    /// RNG seed for counting noise
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (default: into $TRIPHOTON_OUT_DIR or .)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV (fringe or counts format, detected by header)
    #[arg(short, long)]
    input: PathBuf,
    /// Comma-separated harmonic orders, e.g. "1,3" or "3"
    #[arg(long, default_value = "1,3")]
    harmonics: String,
    /// JSON report path (default: fit.json in the output directory)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl ScenarioArgs {
    fn into_partial(self) -> Result<PartialConfig, CliError> {
        let file = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        let overrides = PartialConfig {
            scheme: self.scheme,
            model: self.model,
            phase_start: self.phase_start,
            phase_stop: self.phase_stop,
            points: self.points,
            sigma_p: self.sigma_p,
            sigma_f: self.sigma_f,
            delta_t_h: self.delta_t_h,
            delta_t_v: self.delta_t_v,
            symmetrized: self.symmetrized,
            nodes: self.nodes,
            e_over_a: self.e_over_a,
            v1: self.v1,
            rate_scale: self.rate_scale,
            duration: self.duration,
            bg_rate: self.bg_rate,
            seed: self.seed,
            output: self.output,
        };
        Ok(file.merged_with(overrides))
    }
}

fn parse_harmonics(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| CliError::validation(format!("invalid harmonic '{part}'")))
        })
        .collect()
}

fn run() -> Result<bool, CliError> {
    match Cli::parse().command {
        Command::Fringe(args) => {
            let config = args.into_partial()?.resolve()?;
            let path = cmd_fringe(&config)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Counts(args) => {
            let config = args.into_partial()?.resolve()?;
            let path = cmd_counts(&config)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Fit(args) => {
            let harmonics = parse_harmonics(&args.harmonics)?;
            let (_, path) = cmd_fit(&args.input, &harmonics, &args.output)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Reproduce => {
            let checks = cmd_reproduce()?;
            for check in &checks {
                println!("{}", check.line());
            }
            let passed = checks.iter().filter(|c| c.pass).count();
            println!("{passed}/{} checks passed", checks.len());
            Ok(passed == checks.len())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
