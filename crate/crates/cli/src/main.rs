use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};
use dipole_landau_cli::commands::{run_command, Command};
use dipole_landau_cli::config::{read_file, ConfigError, RawConfig, RunConfig};

/// Landau levels of a neutral dipole on a rotating cosmic string.
#[derive(Debug, Parser)]
#[command(name = "dipole-landau", version, allow_negative_numbers = true)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// `key=value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV and JSON artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    overrides: Overrides,
}

/// Per-key overrides; they take precedence over the file. Values stay
/// strings so validation errors name the key exactly as the file would.
#[derive(Debug, Args)]
struct Overrides {
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    mass: Option<String>,
    #[arg(long)]
    dipole: Option<String>,
    #[arg(long)]
    e0: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    l_min: Option<String>,
    #[arg(long)]
    l_max: Option<String>,
    #[arg(long)]
    spin: Option<String>,
    #[arg(long)]
    grid_points: Option<String>,
    #[arg(long)]
    rho_inf_sigma: Option<String>,
    #[arg(long)]
    weak_field_threshold: Option<String>,
    /// Treat a weak-field violation as a failure.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    oracle_boundary: Option<String>,
    #[arg(long)]
    oracle_domain: Option<String>,
    /// Accept eta > 1.
    #[arg(long)]
    allow_disclination: bool,
}

impl Overrides {
    fn apply(self, raw: &mut RawConfig) {
        let pairs = [
            ("eta", self.eta),
            ("omega", self.omega),
            ("mass", self.mass),
            ("dipole", self.dipole),
            ("e0", self.e0),
            ("n_max", self.n_max),
            ("l_min", self.l_min),
            ("l_max", self.l_max),
            ("spin", self.spin),
            ("grid_points", self.grid_points),
            ("rho_inf_sigma", self.rho_inf_sigma),
            ("weak_field_threshold", self.weak_field_threshold),
            ("n", self.n),
            ("l", self.l),
            ("tolerance", self.tolerance),
            ("oracle_boundary", self.oracle_boundary),
            ("oracle_domain", self.oracle_domain),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.insert(key.to_string(), v);
            }
        }
        if self.strict {
            raw.insert("strict".into(), "true".into());
        }
        if self.allow_disclination {
            raw.insert("allow_disclination".into(), "true".into());
        }
    }
}

fn load(cli: Cli) -> Result<(Command, PathBuf, RunConfig), ConfigError> {
    let mut raw = match &cli.config {
        Some(path) => read_file(path)?,
        None => RawConfig::new(),
    };
    cli.overrides.apply(&mut raw);
    Ok((cli.command, cli.out, RunConfig::from_raw(&raw)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, out, cfg) = match load(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run_command(command, &cfg, &out) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.provenance).expect("provenance serialises");
            println!("{text}");
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
