//! `eit`: batch front end for the adiabatic EIT calculator.

mod commands;
mod record;
mod units;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use eit_core::optics::RabiInterpretation;
use eit_core::verify::{Suite, DEFAULT_SEED};

use crate::record::{ResultRecord, Timing};
use crate::units::Grid;

#[derive(Parser, Debug)]
#[command(name = "eit", version, about = "Adiabatic EIT in a three-level atom with quantized fields")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Leave out the timing block so identical runs give identical bytes.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Conversion from intensities to mean-field Rabi frequencies.
    #[arg(long, global = true, default_value = "paper", value_parser = parse_interp)]
    rabi_from_intensity: RabiInterpretation,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_interp(s: &str) -> Result<RabiInterpretation, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact and perturbative eigenvalues of one block, a block range or a Δ₁ sweep.
    Eigen(EigenArgs),
    /// Susceptibilities, group velocities and index changes.
    Response(ResponseArgs),
    /// χ series, nonlinear index coefficients and the series audit.
    Nonlinear(NonlinearArgs),
    /// Reduced density matrix and optical coherences of the adiabatic state.
    State(StateArgs),
    /// Run the oracle suites.
    Verify(VerifyArgs),
    /// List built-in experiment presets.
    Presets,
}

#[derive(Args, Debug)]
pub struct EigenArgs {
    #[arg(long, default_value_t = 1.0)]
    pub g1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g2: f64,
    #[arg(long)]
    pub n1: u32,
    #[arg(long, default_value_t = 0)]
    pub n2: u32,
    /// Last n₁ of a block range (inclusive).
    #[arg(long)]
    pub n1_max: Option<u32>,
    /// Last n₂ of a block range (inclusive).
    #[arg(long)]
    pub n2_max: Option<u32>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta2: f64,
    /// Δ₁ grid `start:stop:count`, rad/s.
    #[arg(long, value_parser = units::grid, allow_hyphen_values = true)]
    pub sweep_delta1: Option<Grid>,
}

/// Preset fields that can be overridden from the command line.
#[derive(Args, Debug, Clone)]
pub struct PresetOverrides {
    #[arg(long)]
    pub preset: Option<String>,
    /// Probe intensity; `mW/cm2` suffix or W/m².
    #[arg(long, value_parser = units::intensity)]
    pub intensity_probe: Option<f64>,
    /// Coupling intensity; `mW/cm2` suffix or W/m².
    #[arg(long, value_parser = units::intensity)]
    pub intensity_coupling: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta2: Option<f64>,
    /// Probe wavelength; `nm` suffix or metres.
    #[arg(long, value_parser = units::wavelength)]
    pub lambda1: Option<f64>,
    /// Coupling wavelength; `nm` suffix or metres.
    #[arg(long, value_parser = units::wavelength)]
    pub lambda2: Option<f64>,
    /// Observed probe group velocity, m/s.
    #[arg(long)]
    pub v_probe_observed: Option<f64>,
    /// μ₁₂/μ₃₂.
    #[arg(long)]
    pub dipole_ratio: Option<f64>,
    /// μ₃₂, C·m.
    #[arg(long)]
    pub mu32: Option<f64>,
    /// Quantization volume, m³.
    #[arg(long)]
    pub mode_volume: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ResponseArgs {
    #[command(flatten)]
    pub preset: PresetOverrides,
    /// Δ₁ grid `start:stop:count`, rad/s; emits a dispersion table.
    #[arg(long, value_parser = units::grid, allow_hyphen_values = true)]
    pub sweep_delta1: Option<Grid>,
}

#[derive(Args, Debug)]
pub struct NonlinearArgs {
    #[command(flatten)]
    pub preset: PresetOverrides,
    /// Largest Ω̄₁²/Ω̄₂² sampled by the series audit.
    #[arg(long, default_value_t = 2e-3)]
    pub audit_x_max: f64,
    #[arg(long, default_value_t = 16)]
    pub audit_points: usize,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub g1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta2: f64,
    /// Probe carrier frequency, rad/s.
    #[arg(long, default_value_t = 1.0)]
    pub omega1: f64,
    /// Coupling carrier frequency, rad/s.
    #[arg(long, default_value_t = 1.0)]
    pub omega2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub time: f64,
    /// Coherent probe amplitude α.
    #[arg(long, requires = "beta", conflicts_with_all = ["fock", "amplitudes"])]
    pub alpha: Option<f64>,
    /// Coherent coupling amplitude β.
    #[arg(long, requires = "alpha")]
    pub beta: Option<f64>,
    /// Fock state `n1,n2`.
    #[arg(long, value_delimiter = ',', conflicts_with = "amplitudes")]
    pub fock: Option<Vec<u32>>,
    /// JSON file {"probe": [[re, im], ...], "coupling": [[re, im], ...]}.
    #[arg(long)]
    pub amplitudes: Option<PathBuf>,
    /// Probe truncation for coherent fields.
    #[arg(long)]
    pub trunc1: Option<u32>,
    /// Coupling truncation for coherent fields.
    #[arg(long)]
    pub trunc2: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ordering {
    /// g₂ first, then g₁.
    Normal,
    /// g₁ first (diagnostic only).
    Reversed,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suites to run; all when omitted.
    #[arg(long, value_parser = parse_suite)]
    pub suite: Vec<Suite>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Ordering::Normal)]
    pub ordering: Ordering,
}

/// Global settings handed to every command.
pub struct Context {
    pub seed: u64,
    pub interpretation: RabiInterpretation,
}

pub enum Failure {
    /// Exit 1.
    Verification(Box<ResultRecord>, String),
    /// Exit 2.
    Validation(String),
}

fn emit(cli: &Cli, record: &ResultRecord) -> Result<(), String> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Json => record.write_json(&mut sink).map_err(|e| e.to_string()),
        Format::Csv => record.write_csv(&mut sink).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        seed: cli.seed,
        interpretation: cli.rabi_from_intensity,
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Eigen(a) => commands::eigen(a, &ctx),
        Command::Response(a) => commands::response(a, &ctx),
        Command::Nonlinear(a) => commands::nonlinear(a, &ctx),
        Command::State(a) => commands::state(a, &ctx),
        Command::Verify(a) => commands::verify(a, &ctx),
        Command::Presets => commands::presets(&ctx),
    };
    let stamp = |mut r: ResultRecord| {
        if !cli.no_timestamp {
            r.timing = Some(Timing {
                unix_time: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
                elapsed_s: start.elapsed().as_secs_f64(),
            });
        }
        r
    };
    match result {
        Ok(r) => match emit(&cli, &stamp(r)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Verification(r, msg)) => {
            if let Err(e) = emit(&cli, &stamp(*r)) {
                eprintln!("error: {e}");
            }
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
