//! `lic` — command-line front end for the contamination-growth toolkit.
//!
//! Subcommands bind the library into reproducible workflows: deterministic
//! trajectory simulation, oxygen-pressure sweeps, raw-data reduction and
//! regime classification, kinetic parameter fitting, deposit volume
//! estimation, and a stochastic-vs-deterministic consistency check.
//!
//! Conventions shared by every subcommand:
//!
//! * outputs carry no timestamps, so identical inputs (including seeds)
//!   produce byte-identical files;
//! * JSON configs (`--config`, `--spec`) hold the same settings as the
//!   flags; explicitly passed flags win;
//! * named parameter sets and calibrations resolve first as literal paths,
//!   then as `$LIC_CONFIG_DIR/<name>.json`; the set `supp-heuristic` and
//!   the calibration `reference` are built in;
//! * exit codes: 0 success, 1 failed consistency check, 2 invalid usage or
//!   configuration, 3 data or I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "lic",
    version,
    about = "Simulate and analyze laser-induced contamination growth",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one deposit trajectory and write it as a CSV table
    Simulate(SimulateArgs),
    /// Growth delta and regime label across a set of oxygen pressures
    Sweep(SweepArgs),
    /// Reduce raw fluorescence records, fit onsets, classify the sweep
    Analyze(AnalyzeArgs),
    /// Fit free kinetic parameters to measured growth curves
    Fit(FitArgs),
    /// Deposit volumes from SEM dimensions, optional calibration fit
    Volume(VolumeArgs),
    /// Compare the event-level ensemble mean against the deterministic
    /// integrator; exits 1 when the deviation exceeds the tolerance
    GillespieCheck(GillespieCheckArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON config with {"params": {...}, "environment": {...}}
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter set: a JSON file, a name under $LIC_CONFIG_DIR, or
    /// "supp-heuristic"
    #[arg(long)]
    params: Option<String>,
    /// Oxygen partial pressure, mbar
    #[arg(long)]
    p_o2: Option<f64>,
    /// Laser power, mW
    #[arg(long)]
    laser_power: Option<f64>,
    /// Final time, seconds
    #[arg(long, default_value_t = 12_000.0)]
    t_end: f64,
    /// Integration step, seconds
    #[arg(long, default_value_t = 10.0)]
    dt: f64,
    /// Initial deposit volume, site-volumes
    #[arg(long, default_value_t = 0.0)]
    v0: f64,
    /// Initial vacant sites (defaults to the parameter set's site cap)
    #[arg(long)]
    sites0: Option<f64>,
    /// Calibration for the fluorescence column: a JSON file, a name under
    /// $LIC_CONFIG_DIR, or "reference"
    #[arg(long, default_value = "reference")]
    calibration: String,
    /// Output CSV (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config mirroring the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter set: a JSON file, a name under $LIC_CONFIG_DIR, or
    /// "supp-heuristic"
    #[arg(long)]
    params: Option<String>,
    /// Comma-separated oxygen pressures, mbar
    #[arg(long, value_delimiter = ',', conflicts_with = "log_range")]
    pressures: Option<Vec<f64>>,
    /// Log-spaced pressure range LO:HI:N, mbar
    #[arg(long)]
    log_range: Option<String>,
    /// Reference time for the growth delta, seconds
    #[arg(long)]
    t_ref: Option<f64>,
    /// Integration step, seconds
    #[arg(long)]
    dt: Option<f64>,
    /// Initial deposit volume, site-volumes
    #[arg(long)]
    v0: Option<f64>,
    /// Initial vacant sites (defaults to the parameter set's site cap)
    #[arg(long)]
    sites0: Option<f64>,
    /// Laser power, mW
    #[arg(long)]
    laser_power: Option<f64>,
    /// Onsets at or below this count as prompt growth, seconds
    #[arg(long)]
    onset_threshold: Option<f64>,
    /// Growth deltas at or below this count as no growth / etch
    #[arg(long)]
    etch_noise: Option<f64>,
    /// Fraction of the best rate still flagged as "matches the peak"
    #[arg(long)]
    rate_tolerance: Option<f64>,
    /// Summary CSV (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the full classification as JSON
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Raw fluorescence CSVs; each <file>.csv needs a <file>.json sidecar
    #[arg(required = true)]
    records: Vec<PathBuf>,
    /// Reference time for growth deltas, seconds
    #[arg(long)]
    t_ref: Option<f64>,
    /// Marker grid spacing, seconds
    #[arg(long)]
    marker_spacing: Option<f64>,
    /// Onsets at or below this count as prompt growth, seconds
    #[arg(long)]
    onset_threshold: Option<f64>,
    /// Growth deltas at or below this count as no growth / etch
    #[arg(long)]
    etch_noise: Option<f64>,
    /// Fraction of the best rate still flagged as "matches the peak"
    #[arg(long)]
    rate_tolerance: Option<f64>,
    /// Report JSON (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Replicate-averaged growth deltas per pressure, CSV
    #[arg(long)]
    averaged_csv: Option<PathBuf>,
    /// Directory for per-record reduced marker CSVs
    #[arg(long)]
    reduced_dir: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Fit specification JSON (model, free parameters, search settings)
    #[arg(long)]
    spec: PathBuf,
    /// Raw fluorescence CSVs with sidecars; reduced to the marker grid
    /// before fitting
    #[arg(required = true)]
    records: Vec<PathBuf>,
    /// Fit result JSON (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Per-curve squared-residual table, CSV
    #[arg(long)]
    residuals: Option<PathBuf>,
}

#[derive(Args)]
struct VolumeArgs {
    /// Dimension table: pillar_id,h_um,w_um,d_um,fluorescence_Mcts_s
    #[arg(long)]
    dims: PathBuf,
    /// Volume table CSV (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Fit a fluorescence-to-volume calibration from the table and write it
    /// here as JSON
    #[arg(long)]
    calibration_out: Option<PathBuf>,
    /// Laser power the fluorescence column was measured at, mW
    #[arg(long, default_value_t = 0.092)]
    power: f64,
}

#[derive(Args)]
struct GillespieCheckArgs {
    /// JSON config mirroring the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter set: a JSON file, a name under $LIC_CONFIG_DIR, or
    /// "supp-heuristic" (required here or in --config)
    #[arg(long)]
    params: Option<String>,
    /// Oxygen partial pressure, mbar [default: 4.6e-3]
    #[arg(long)]
    p_o2: Option<f64>,
    /// Laser power, mW [default: 1.48]
    #[arg(long)]
    laser_power: Option<f64>,
    /// Final time, seconds [default: 2000]
    #[arg(long)]
    t_end: Option<f64>,
    /// Deterministic integration step, seconds [default: 10]
    #[arg(long)]
    dt: Option<f64>,
    /// Initial deposit volume, whole site-volumes [default: 64]
    #[arg(long)]
    v0_units: Option<u64>,
    /// Initial vacant sites, at most 10000 [default: 100]
    #[arg(long)]
    sites: Option<u64>,
    /// Ensemble size [default: 1000]
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; run i uses a seed derived from it [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Number of evenly spaced comparison times [default: 8]
    #[arg(long)]
    samples: Option<usize>,
    /// Maximum allowed relative deviation, must be positive [default: 0.05]
    #[arg(long)]
    tolerance: Option<f64>,
    /// Also write the full report as JSON
    #[arg(long)]
    json: Option<PathBuf>,
    /// Also write the sampled ensemble mean/variance table as CSV
    #[arg(long)]
    ensemble_csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Fit(args) => commands::fit(args),
        Command::Volume(args) => commands::volume(args),
        Command::GillespieCheck(args) => commands::gillespie_check(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_validation() { 2 } else { 3 })
        }
    }
}
