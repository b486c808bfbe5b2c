use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use coherlab::permutation::PermutationSpec;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Fig1,
    Fig2,
    ChaoticG2,
    Props,
    EpsScan,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::Fig2 => "fig2",
            Experiment::ChaoticG2 => "chaotic-g2",
            Experiment::Props => "props",
            Experiment::EpsScan => "eps-scan",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Settings shared by the config file and the command line. Every field is
/// optional; flags win over the file, the file over built-in defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Number of modes N
    #[arg(long)]
    pub modes: Option<usize>,
    /// Displacement modulus |α| (same for every mode)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Displacement phase arg α in radians
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Option<f64>,
    /// Operator ordering: identity, seed:<u64> or list:<i,j,...>
    #[arg(long)]
    pub perm: Option<String>,
    /// Grid points per axis (samples for eps-scan)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Boson Fock cutoff (levels per mode)
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Domain length L
    #[arg(long)]
    pub length: Option<f64>,
    /// Comb offset j₀
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<f64>,
    /// Comb spacing Δ
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Fixture file for props (defaults to the bundled set)
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
}

impl Overrides {
    fn or(self, other: Overrides) -> Overrides {
        Overrides {
            modes: self.modes.or(other.modes),
            alpha: self.alpha.or(other.alpha),
            phase: self.phase.or(other.phase),
            perm: self.perm.or(other.perm),
            grid: self.grid.or(other.grid),
            cutoff: self.cutoff.or(other.cutoff),
            length: self.length.or(other.length),
            offset: self.offset.or(other.offset),
            spacing: self.spacing.or(other.spacing),
            out: self.out.or(other.out),
            format: self.format.or(other.format),
            fixtures: self.fixtures.or(other.fixtures),
        }
    }
}

/// Fully resolved experiment settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: Experiment,
    pub modes: usize,
    pub alpha: f64,
    pub phase: f64,
    pub perm: String,
    pub grid: usize,
    pub cutoff: usize,
    pub length: f64,
    pub offset: f64,
    pub spacing: f64,
    pub out: PathBuf,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixtures: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn defaults(experiment: Experiment) -> Overrides {
    let (modes, grid) = match experiment {
        Experiment::Fig1 => (40, 128),
        Experiment::Fig2 => (10, 64),
        Experiment::ChaoticG2 => (10, 64),
        Experiment::Props => (1, 2),
        Experiment::EpsScan => (1, 50),
    };
    Overrides {
        modes: Some(modes),
        alpha: Some(0.166),
        phase: Some(0.0),
        perm: Some("identity".into()),
        grid: Some(grid),
        cutoff: Some(30),
        length: Some(1.0),
        offset: Some(0.0),
        spacing: Some(1.0),
        out: None,
        format: Some(if experiment == Experiment::Props { Format::Json } else { Format::Csv }),
        fixtures: None,
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Parses a config file. `schema_version` is required; `experiment`, if
/// present, must match the subcommand.
pub fn parse_file(text: &str, experiment: Experiment) -> Result<Overrides, ConfigError> {
    let mut table: toml::Table = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
    let version = match table.remove("schema_version") {
        Some(toml::Value::Integer(v)) => v,
        Some(other) => return err(format!("schema_version must be an integer, got {other}")),
        None => return err("missing schema_version"),
    };
    if version != SCHEMA_VERSION as i64 {
        return err(format!("schema_version {version} unsupported (expected {SCHEMA_VERSION})"));
    }
    if let Some(kind) = table.remove("experiment") {
        let kind: Experiment = kind.try_into().map_err(|e| ConfigError(format!("experiment: {e}")))?;
        if kind != experiment {
            return err(format!("config is for {kind}, not {experiment}"));
        }
    }
    toml::Value::Table(table).try_into().map_err(|e| ConfigError(e.to_string()))
}

pub fn load(
    experiment: Experiment,
    file: Option<&Path>,
    flags: Overrides,
) -> Result<ExperimentConfig, ConfigError> {
    let from_file = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
            parse_file(&text, experiment)
                .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?
        }
        None => Overrides::default(),
    };
    let merged = flags.or(from_file).or(defaults(experiment));
    let format = merged.format.expect("default");
    let config = ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        experiment,
        modes: merged.modes.expect("default"),
        alpha: merged.alpha.expect("default"),
        phase: merged.phase.expect("default"),
        perm: merged.perm.expect("default"),
        grid: merged.grid.expect("default"),
        cutoff: merged.cutoff.expect("default"),
        length: merged.length.expect("default"),
        offset: merged.offset.expect("default"),
        spacing: merged.spacing.expect("default"),
        out: merged
            .out
            .unwrap_or_else(|| PathBuf::from(format!("{experiment}.{}", format.extension()))),
        format,
        fixtures: merged.fixtures,
    };
    config.validate()?;
    Ok(config)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let max_modes = match self.experiment {
            Experiment::Fig1 => 64,
            Experiment::Fig2 => 20,
            Experiment::ChaoticG2 => 64,
            Experiment::Props | Experiment::EpsScan => 1,
        };
        if self.modes == 0 || self.modes > max_modes {
            return err(format!("modes = {} outside 1..={max_modes} for {}", self.modes, self.experiment));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return err(format!("alpha = {} must be a finite non-negative modulus", self.alpha));
        }
        if !self.phase.is_finite() {
            return err("phase must be finite");
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return err(format!("length = {} must be positive", self.length));
        }
        if !(self.offset.is_finite() && self.spacing.is_finite()) {
            return err("comb offset and spacing must be finite");
        }
        if self.grid < 2 || self.grid > 4096 {
            return err(format!("grid = {} outside 2..=4096", self.grid));
        }
        if self.cutoff < 2 {
            return err(format!("cutoff = {} below 2", self.cutoff));
        }
        if self.experiment == Experiment::ChaoticG2 && self.alpha > std::f64::consts::FRAC_PI_2 {
            return err("chaotic-g2 uses sin²|α| as mean occupation; |α| must be ≤ π/2");
        }
        self.permutation()?;
        Ok(())
    }

    pub fn permutation(&self) -> Result<PermutationSpec, ConfigError> {
        PermutationSpec::parse(&self.perm, self.modes).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn seed(&self) -> Option<u64> {
        self.perm.strip_prefix("seed:").and_then(|s| s.trim().parse().ok())
    }
}
