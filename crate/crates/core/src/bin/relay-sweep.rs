use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lowsnr_relay::sweep::{parse_config, run, Experiment, SweepError, SweepSpec};

/// Rate and energy-per-bit sweeps for the Gaussian relay channel on a line.
#[derive(Parser)]
#[command(name = "relay-sweep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative rate gain of time-shared compress-and-forward over power.
    RateSweep(Flags),
    /// Lower and upper bounds on the minimum energy per bit over distance.
    Ebn0Sweep(Flags),
    /// Every rate and bound at one distance and power, as key=value lines.
    Eval(Flags),
}

#[derive(Args)]
struct Flags {
    /// Flat `key = value` file supplying defaults; flags override it.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Relay operation: full or half.
    #[arg(long)]
    mode: Option<String>,
    /// Source-relay distance, `v` or `lo:hi:n`.
    #[arg(long)]
    d: Option<String>,
    /// Total power, `v` or log-spaced `lo:hi:n`.
    #[arg(long)]
    power: Option<String>,
    /// Source power share, a number or `opt`.
    #[arg(long)]
    beta: Option<String>,
    /// Listening fraction in half mode, a number or `opt`.
    #[arg(long)]
    lambda: Option<String>,
    /// Output file, `-` for standard output.
    #[arg(long)]
    out: Option<String>,
    /// Coarse grid size of the optimizers.
    #[arg(long)]
    grid: Option<String>,
    /// Relative refinement tolerance of the optimizers.
    #[arg(long)]
    tol: Option<String>,
    /// Cross-check every row against exhaustive grids (slow).
    #[arg(long)]
    oracle: bool,
    /// Points per axis for the oracle grids.
    #[arg(long)]
    oracle_grid: Option<String>,
    /// Exit with status 3 when any search fails to converge.
    #[arg(long)]
    strict: bool,
}

impl Flags {
    fn settings(&self) -> Result<BTreeMap<String, String>, SweepError> {
        let mut map = match &self.config {
            Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("mode", &self.mode),
            ("d", &self.d),
            ("power", &self.power),
            ("beta", &self.beta),
            ("lambda", &self.lambda),
            ("out", &self.out),
            ("grid", &self.grid),
            ("tol", &self.tol),
            ("oracle_grid", &self.oracle_grid),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v.clone());
            }
        }
        if self.oracle {
            map.insert("oracle".into(), "true".into());
        }
        if self.strict {
            map.insert("strict".into(), "true".into());
        }
        Ok(map)
    }
}

fn execute(experiment: Experiment, flags: &Flags) -> Result<i32, SweepError> {
    let spec = SweepSpec::from_settings(experiment, &flags.settings()?)?;
    let output = run(&spec)?;
    if spec.out == "-" {
        std::io::stdout().lock().write_all(output.text.as_bytes())?;
    } else {
        std::fs::write(&spec.out, &output.text)?;
    }
    if spec.strict && output.unconverged > 0 {
        eprintln!("error: {} row(s) did not converge", output.unconverged);
        return Ok(3);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, flags) = match &cli.command {
        Command::RateSweep(f) => (Experiment::RateImprovement, f),
        Command::Ebn0Sweep(f) => (Experiment::Ebn0Bounds, f),
        Command::Eval(f) => (Experiment::PointEval, f),
    };
    match execute(experiment, flags) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
