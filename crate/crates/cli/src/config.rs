//! `key=value` run configuration.

use std::collections::BTreeMap;
use std::path::Path;

use dipole_landau::oracle::{Boundary, OracleDomain, DEFAULT_TAIL_EXTENT};
use dipole_landau::spectrum::{Spin, SpinSelection, DEFAULT_WEAK_FIELD_THRESHOLD};
use dipole_landau::{Background, Particle};
use serde_json::{json, Map, Value};
use thiserror::Error;

/// Every accepted key, in echo order.
pub const KEYS: &[&str] = &[
    "eta",
    "omega",
    "mass",
    "dipole",
    "e0",
    "n_max",
    "l_min",
    "l_max",
    "spin",
    "grid_points",
    "rho_inf_sigma",
    "weak_field_threshold",
    "strict",
    "n",
    "l",
    "tolerance",
    "oracle_boundary",
    "oracle_domain",
    "allow_disclination",
];

const REQUIRED: &[&str] = &["eta", "omega", "mass", "dipole", "e0"];

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    pub fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

/// Raw key/value pairs before validation.
pub type RawConfig = BTreeMap<String, String>;

/// Parses `key=value` lines. Blank lines and `#` comments are skipped;
/// unknown and repeated keys are errors.
pub fn parse_text(text: &str) -> Result<RawConfig, ConfigError> {
    let mut out = RawConfig::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                message: format!("expected key=value, got `{line}`"),
            });
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::invalid(key, "unknown key"));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(ConfigError::invalid(key, "given more than once"));
        }
    }
    Ok(out)
}

pub fn read_file(path: &Path) -> Result<RawConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_text(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub eta: f64,
    pub omega: f64,
    pub mass: f64,
    pub dipole: f64,
    pub e0: f64,
    pub n_max: u32,
    pub l_min: i32,
    pub l_max: i32,
    pub spin: SpinSelection,
    pub grid_points: usize,
    pub rho_inf_sigma: f64,
    pub weak_field_threshold: f64,
    pub strict: bool,
    /// State used by `wavefunction` and `currents`.
    pub n: u32,
    pub l: i32,
    pub tolerance: f64,
    pub oracle_boundary: Boundary,
    pub oracle_domain: OracleDomain,
    pub allow_disclination: bool,
}

fn parse_number<T: std::str::FromStr>(raw: &RawConfig, key: &str, default: Option<T>) -> Result<T, ConfigError> {
    match raw.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| ConfigError::invalid(key, format!("`{v}` is not a valid number"))),
        None => default.ok_or_else(|| ConfigError::invalid(key, "required key is missing")),
    }
}

fn parse_real(raw: &RawConfig, key: &str, default: Option<f64>) -> Result<f64, ConfigError> {
    let v: f64 = parse_number(raw, key, default)?;
    if !v.is_finite() {
        return Err(ConfigError::invalid(key, "must be finite"));
    }
    Ok(v)
}

fn parse_bool(raw: &RawConfig, key: &str) -> Result<bool, ConfigError> {
    match raw.get(key).map(String::as_str) {
        None | Some("false") | Some("0") => Ok(false),
        Some("true") | Some("1") => Ok(true),
        Some(v) => Err(ConfigError::invalid(key, format!("`{v}` is not true or false"))),
    }
}

fn parse_spin(raw: &RawConfig) -> Result<SpinSelection, ConfigError> {
    match raw.get("spin").map(String::as_str) {
        None | Some("both") => Ok(SpinSelection::Both),
        Some("+1") | Some("1") => Ok(SpinSelection::Up),
        Some("-1") => Ok(SpinSelection::Down),
        Some(v) => Err(ConfigError::invalid("spin", format!("`{v}` is not +1, -1 or both"))),
    }
}

impl RunConfig {
    /// Validates raw pairs. Parameter constraints shared by every command
    /// are checked here; command-specific ones by the command.
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        for key in raw.keys() {
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError::invalid(key, "unknown key"));
            }
        }
        for key in REQUIRED {
            if !raw.contains_key(*key) {
                return Err(ConfigError::invalid(key, "required key is missing"));
            }
        }
        let oracle_boundary = match raw.get("oracle_boundary").map(String::as_str) {
            None | Some("asymptotic") => Boundary::Asymptotic,
            Some("dirichlet") => Boundary::Dirichlet,
            Some(v) => {
                return Err(ConfigError::invalid(
                    "oracle_boundary",
                    format!("`{v}` is not asymptotic or dirichlet"),
                ))
            }
        };
        let oracle_domain = match raw.get("oracle_domain").map(String::as_str) {
            None | Some("mathematical") => OracleDomain::Mathematical,
            Some("physical") => OracleDomain::Physical,
            Some(v) => {
                return Err(ConfigError::invalid(
                    "oracle_domain",
                    format!("`{v}` is not mathematical or physical"),
                ))
            }
        };
        let cfg = RunConfig {
            eta: parse_real(raw, "eta", None)?,
            omega: parse_real(raw, "omega", None)?,
            mass: parse_real(raw, "mass", None)?,
            dipole: parse_real(raw, "dipole", None)?,
            e0: parse_real(raw, "e0", None)?,
            n_max: parse_number(raw, "n_max", Some(4))?,
            l_min: parse_number(raw, "l_min", Some(-2))?,
            l_max: parse_number(raw, "l_max", Some(2))?,
            spin: parse_spin(raw)?,
            grid_points: parse_number(raw, "grid_points", Some(8000))?,
            rho_inf_sigma: parse_real(raw, "rho_inf_sigma", Some(DEFAULT_TAIL_EXTENT))?,
            weak_field_threshold: parse_real(raw, "weak_field_threshold", Some(DEFAULT_WEAK_FIELD_THRESHOLD))?,
            strict: parse_bool(raw, "strict")?,
            n: parse_number(raw, "n", Some(0))?,
            l: parse_number(raw, "l", Some(0))?,
            tolerance: parse_real(raw, "tolerance", Some(1e-4))?,
            oracle_boundary,
            oracle_domain,
            allow_disclination: parse_bool(raw, "allow_disclination")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.background()?;
        self.particle()?;
        if self.l_min > self.l_max {
            return Err(ConfigError::invalid("l_min", "must not exceed l_max"));
        }
        if self.n_max > 10 {
            return Err(ConfigError::invalid("n_max", "levels above n = 10 are not supported"));
        }
        if self.grid_points < dipole_landau::oracle::MIN_GRID_POINTS {
            return Err(ConfigError::invalid("grid_points", "at least 100 interior points are required"));
        }
        if self.rho_inf_sigma <= 0.0 {
            return Err(ConfigError::invalid("rho_inf_sigma", "must be positive"));
        }
        if self.weak_field_threshold <= 0.0 {
            return Err(ConfigError::invalid("weak_field_threshold", "must be positive"));
        }
        if self.tolerance < 0.0 {
            return Err(ConfigError::invalid("tolerance", "must be non-negative"));
        }
        Ok(())
    }

    pub fn background(&self) -> Result<Background, ConfigError> {
        Background::with_override(self.eta, self.omega, self.allow_disclination).map_err(library_error)
    }

    pub fn particle(&self) -> Result<Particle, ConfigError> {
        Particle::new(self.mass, self.dipole, self.e0).map_err(library_error)
    }

    /// The single spin used by per-state commands.
    pub fn single_spin(&self) -> Result<Spin, ConfigError> {
        match self.spin {
            SpinSelection::Up => Ok(Spin::Up),
            SpinSelection::Down => Ok(Spin::Down),
            SpinSelection::Both => Err(ConfigError::invalid("spin", "this command needs spin = +1 or -1")),
        }
    }

    /// Resolved configuration as a flat JSON object.
    pub fn echo(&self) -> Map<String, Value> {
        let spin = match self.spin {
            SpinSelection::Up => "+1",
            SpinSelection::Down => "-1",
            SpinSelection::Both => "both",
        };
        let boundary = match self.oracle_boundary {
            Boundary::Asymptotic => "asymptotic",
            Boundary::Dirichlet => "dirichlet",
        };
        let domain = match self.oracle_domain {
            OracleDomain::Mathematical => "mathematical",
            OracleDomain::Physical => "physical",
        };
        let value = json!({
            "eta": self.eta,
            "omega": self.omega,
            "mass": self.mass,
            "dipole": self.dipole,
            "e0": self.e0,
            "n_max": self.n_max,
            "l_min": self.l_min,
            "l_max": self.l_max,
            "spin": spin,
            "grid_points": self.grid_points,
            "rho_inf_sigma": self.rho_inf_sigma,
            "weak_field_threshold": self.weak_field_threshold,
            "strict": self.strict,
            "n": self.n,
            "l": self.l,
            "tolerance": self.tolerance,
            "oracle_boundary": boundary,
            "oracle_domain": domain,
            "allow_disclination": self.allow_disclination,
        });
        match value {
            Value::Object(map) => map,
            _ => unreachable!(),
        }
    }
}

/// Maps a library validation error onto the key it concerns.
pub fn library_error(e: dipole_landau::Error) -> ConfigError {
    match &e {
        dipole_landau::Error::Domain { name, .. } => ConfigError::invalid(name, e.to_string()),
        dipole_landau::Error::NoBoundState => ConfigError::invalid("omega", e.to_string()),
        dipole_landau::Error::Truncation { .. } => ConfigError::invalid("rho_inf_sigma", e.to_string()),
        dipole_landau::Error::Grid(_) => ConfigError::invalid("grid_points", e.to_string()),
        dipole_landau::Error::InvalidSpin(_) => ConfigError::invalid("spin", e.to_string()),
        _ => ConfigError::invalid("config", e.to_string()),
    }
}
