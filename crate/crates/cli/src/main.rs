use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fdia_cli::{cmd_check, cmd_compare, cmd_run, cmd_synthesize, RunSpec};
use fdia_core::attacks::AngleUnit;

/// Closed-loop false-data-injection simulator for Jacobian-transpose arm control.
#[derive(Parser)]
#[command(name = "fdia", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a preset or config file; writes <name>.csv and <name>.metrics.txt.
    Run {
        /// nominal, detectable, scaling, reflection or shear.
        #[arg(long)]
        scenario: Option<String>,
        /// TOML run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override, e.g. --set kp=8 (dt, duration, kp, k1, k2, s_gain, epsilon, radius, scenario).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Integration step, s.
        #[arg(long)]
        dt: Option<f64>,
        /// Horizon, s.
        #[arg(long)]
        duration: Option<f64>,
    },
    /// Tabulate errors of two or more logs and test pairwise observable equivalence.
    Compare {
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
    /// Evaluate the undetectability conditions of an attack-pair file.
    Check {
        attack: PathBuf,
        /// Initial posture in degrees, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q0: Option<Vec<f64>>,
        /// Residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Build the undetectable pair for a given observable matrix S_x.
    Synthesize {
        sx: PathBuf,
        /// Initial posture in degrees, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q0: Option<Vec<f64>>,
        /// Output attack-pair file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Unit for the written offsets.
        #[arg(long, value_enum, default_value_t = Units::Deg)]
        units: Units,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    Deg,
    Rad,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = match cli.command {
        Command::Run { scenario, config, out: dir, overrides, dt, duration } => {
            let spec = RunSpec { scenario, config, out: dir, overrides, dt, duration };
            cmd_run(&spec, &mut out, &mut err)
        }
        Command::Compare { logs } => cmd_compare(&logs, &mut out, &mut err),
        Command::Check { attack, q0, tol } => cmd_check(&attack, q0.as_deref(), tol, &mut out, &mut err),
        Command::Synthesize { sx, q0, out: dest, units } => {
            let unit = match units {
                Units::Deg => AngleUnit::Degrees,
                Units::Rad => AngleUnit::Radians,
            };
            cmd_synthesize(&sx, q0.as_deref(), dest.as_deref(), unit, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
