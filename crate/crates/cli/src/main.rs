//! `wpcurve`: norms, curve synthesis, extensions, weldings and experiment
//! reports from the command line.

mod commands;
mod run_config;
mod summary;

use clap::{Args, Parser, Subcommand};
use commands::{Context, Outcome};
use run_config::Overrides;
use std::path::PathBuf;
use std::process::ExitCode;
use wpcurve::fixtures::Profile;
use wpcurve::lab::Verdict;
use wpcurve::Error;

const EXIT_PASS: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "wpcurve", version, about = "Weil-Petersson curve toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Line grid nodes (odd, 257..=65537); resamples input functions.
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
    /// Half width of the line window (1..=256).
    #[arg(long, global = true, value_name = "L")]
    window: Option<f64>,
    /// Dyadic levels of half-plane grids (6..=16).
    #[arg(long, global = true, value_name = "K")]
    levels: Option<usize>,
    /// Zipper boundary cells (64..=16384).
    #[arg(long, global = true, value_name = "R")]
    resolution: Option<usize>,
    /// Seed for sampled estimates.
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// JSON file of tolerance overrides.
    #[arg(long = "tolerance-file", global = true, value_name = "PATH")]
    tolerance_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// H^1/2, BMO, VMO and sup norms of a function file.
    Norms { input: PathBuf },
    /// Arc-length curve from a tangent-angle file.
    Synth { angle: PathBuf },
    /// Extension and Beltrami coefficient in both half planes.
    Extend { angle: PathBuf, u: PathBuf },
    /// Riemann maps and welding of a curve file.
    Weld { curve: PathBuf },
    /// Run the experiment described by a config file.
    Verify { config: PathBuf },
    /// Run a config over every calibration suite member.
    Sweep { config: PathBuf },
    /// Write a fixture function file.
    Sample {
        #[arg(value_enum)]
        profile: ProfileArg,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// File name inside the output directory.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ProfileArg {
    Zero,
    Bump,
    TwoBump,
    SmoothedStepPair,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Profile {
        match p {
            ProfileArg::Zero => Profile::Zero,
            ProfileArg::Bump => Profile::Bump,
            ProfileArg::TwoBump => Profile::TwoBump,
            ProfileArg::SmoothedStepPair => Profile::SmoothedStepPair,
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_CHECK_FAILED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    let g = cli.global;
    let ctx = Context {
        out: g.out,
        overrides: Overrides {
            grid: g.grid,
            window: g.window,
            levels: g.levels,
            resolution: g.resolution,
            seed: g.seed,
            tolerance_file: g.tolerance_file,
        },
    };
    let result = match &cli.command {
        Command::Norms { input } => commands::norms(&ctx, input),
        Command::Synth { angle } => commands::synth(&ctx, angle),
        Command::Extend { angle, u } => commands::extend(&ctx, angle, u),
        Command::Weld { curve } => commands::weld(&ctx, curve),
        Command::Verify { config } => commands::verify(&ctx, config),
        Command::Sweep { config } => commands::sweep(&ctx, config),
        Command::Sample { profile, amplitude, name } => {
            commands::sample(&ctx, (*profile).into(), *amplitude, name.as_deref())
        }
    };
    match result {
        Ok(Outcome::Done) => ExitCode::from(EXIT_PASS),
        Ok(Outcome::Verdict(v)) => {
            eprintln!("verdict: {v:?}");
            ExitCode::from(verdict_code(v))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
