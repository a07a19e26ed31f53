//! `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment. Every key must be known and
//! may appear at most once per document. Sweep axes are written as
//! `name:start:stop:count` (inclusive, evenly spaced) or `name:v1,v2,...`.

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use atomcav::dynamics::IntegratorSettings;
use atomcav::model::{Frame, SystemConfig};
use atomcav::sweep::{self, Axis, Parameter, SweepSpec};
use thiserror::Error;

pub const KEYS: &[&str] = &[
    "omega",
    "omega_f",
    "g_a",
    "g_b",
    "kappa",
    "gamma",
    "n_thermal",
    "cutoff",
    "dt",
    "t_max",
    "tolerance",
    "record_stride",
    "frame",
    "cavity_only",
    "axis1",
    "axis2",
    "evaluation_time",
    "out",
    "format",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}unknown key `{key}`", at(*.line))]
    UnknownKey { key: String, line: Option<usize> },
    #[error("{}invalid value for `{key}`: {reason}", at(*.line))]
    Domain {
        key: String,
        reason: String,
        line: Option<usize>,
    },
    #[error("{0}")]
    Usage(String),
}

fn at(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

impl ConfigError {
    fn domain(key: &str, reason: impl Into<String>) -> Self {
        ConfigError::Domain {
            key: key.to_string(),
            reason: reason.into(),
            line: None,
        }
    }

    fn on_line(self, line: Option<usize>) -> Self {
        match self {
            ConfigError::Domain {
                key,
                reason,
                line: None,
            } => ConfigError::Domain { key, reason, line },
            ConfigError::UnknownKey { key, line: None } => ConfigError::UnknownKey { key, line },
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(ConfigError::domain(
                "format",
                format!("expected csv or json, got `{other}`"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    pub fn spec(self) -> SweepSpec {
        match self {
            Preset::Fig2 => sweep::fig2_spec(),
            Preset::Fig3 => sweep::fig3_spec(),
            Preset::Fig4 => sweep::fig4_spec(),
        }
    }
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            other => Err(ConfigError::Usage(format!(
                "unknown preset `{other}` (expected fig2, fig3 or fig4)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub integrator: IntegratorSettings,
    pub frame: Frame,
    /// Drop the atoms and keep only the thermally driven cavity.
    pub cavity_only: bool,
    pub axis1: Option<Axis>,
    pub axis2: Option<Axis>,
    /// Sweep evaluation time; `1/(2g)` when unset.
    pub evaluation_time: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemConfig::default(),
            integrator: IntegratorSettings::default(),
            frame: Frame::Interaction,
            cavity_only: false,
            axis1: None,
            axis2: None,
            evaluation_time: None,
            out: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    /// Defaults with a figure preset's axes and parameters.
    pub fn from_preset(preset: Preset) -> Self {
        let spec = preset.spec();
        Self {
            system: spec.base,
            frame: spec.frame,
            axis1: Some(spec.axis1),
            axis2: spec.axis2,
            evaluation_time: Some(spec.evaluation_time),
            ..Self::default()
        }
    }

    /// Assigns one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let s = &mut self.system;
        let i = &mut self.integrator;
        match key {
            "omega" => s.omega = parse_f64(key, value)?,
            "omega_f" => s.omega_f = parse_f64(key, value)?,
            "g_a" => s.g_a = parse_f64(key, value)?,
            "g_b" => s.g_b = parse_f64(key, value)?,
            "kappa" => s.kappa = parse_f64(key, value)?,
            "gamma" => s.gamma = parse_f64(key, value)?,
            "n_thermal" => s.n_thermal = parse_f64(key, value)?,
            "cutoff" => s.cutoff = parse_usize(key, value)?,
            "dt" => i.dt = parse_f64(key, value)?,
            "t_max" => i.t_max = parse_f64(key, value)?,
            "tolerance" => i.tolerance = parse_f64(key, value)?,
            "record_stride" => i.record_stride = parse_usize(key, value)?,
            "frame" => {
                self.frame = match value {
                    "interaction" => Frame::Interaction,
                    "lab" => Frame::Lab,
                    other => {
                        return Err(ConfigError::domain(
                            key,
                            format!("expected interaction or lab, got `{other}`"),
                        ))
                    }
                }
            }
            "cavity_only" => {
                self.cavity_only = value
                    .parse()
                    .map_err(|_| ConfigError::domain(key, format!("expected true or false, got `{value}`")))?
            }
            "axis1" => self.axis1 = Some(parse_axis(key, value)?),
            "axis2" => self.axis2 = Some(parse_axis(key, value)?),
            "evaluation_time" => self.evaluation_time = Some(parse_f64(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    key: key.to_string(),
                    line: None,
                })
            }
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::Usage(format!("--set expects key=value, got `{assignment}`")))?;
        self.set(key.trim(), value.trim())
    }

    /// Applies every assignment of a document on top of `self`.
    pub fn apply_document(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = HashSet::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    message: "missing key".into(),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("missing value for `{key}`"),
                });
            }
            if !seen.insert(key.to_string()) && KEYS.contains(&key) {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("`{key}` is set twice"),
                });
            }
            self.set(key, value).map_err(|e| e.on_line(Some(line)))?;
        }
        Ok(())
    }

    /// Checks every nested invariant.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.system.validate().map_err(core_to_config)?;
        self.integrator.validate().map_err(core_to_config)?;
        if let Some(t) = self.evaluation_time {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ConfigError::domain(
                    "evaluation_time",
                    format!("must be positive, got {t}"),
                ));
            }
        }
        if self.axis2.is_some() && self.axis1.is_none() {
            return Err(ConfigError::domain("axis2", "requires axis1"));
        }
        Ok(())
    }

    /// Sweep description, if axes are configured.
    pub fn sweep_spec(&self) -> Result<SweepSpec, ConfigError> {
        let axis1 = self
            .axis1
            .clone()
            .ok_or_else(|| ConfigError::Usage("sweep needs `axis1` in the config or a --preset".into()))?;
        let spec = SweepSpec {
            base: self.system.clone(),
            frame: self.frame,
            axis1,
            axis2: self.axis2.clone(),
            evaluation_time: self
                .evaluation_time
                .unwrap_or_else(|| sweep::half_inverse_coupling_time(&self.system)),
            initial_state: Default::default(),
        };
        spec.validate().map_err(core_to_config)?;
        Ok(spec)
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Parses a whole document on top of the defaults and validates it.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    cfg.apply_document(text)?;
    cfg.validate()?;
    Ok(cfg)
}

fn core_to_config(err: atomcav::Error) -> ConfigError {
    match err {
        atomcav::Error::InvalidConfig { key, reason } => ConfigError::domain(key, reason),
        other => ConfigError::Usage(other.to_string()),
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value
        .parse()
        .map_err(|_| ConfigError::domain(key, format!("`{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(ConfigError::domain(key, format!("`{value}` is not finite")));
    }
    Ok(v)
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::domain(key, format!("`{value}` is not a nonnegative integer")))
}

fn parse_axis(key: &str, value: &str) -> Result<Axis, ConfigError> {
    let (name, rest) = value
        .split_once(':')
        .ok_or_else(|| ConfigError::domain(key, "expected `name:start:stop:count` or `name:v1,v2,...`"))?;
    let parameter: Parameter = name
        .trim()
        .parse()
        .map_err(|e: atomcav::Error| ConfigError::domain(key, e.to_string()))?;
    let fields: Vec<&str> = rest.split(':').map(str::trim).collect();
    let axis = match fields.as_slice() {
        [start, stop, count] => Axis::linspace(
            parameter,
            parse_f64(key, start)?,
            parse_f64(key, stop)?,
            parse_usize(key, count)?,
        ),
        [list] => Axis::new(
            parameter,
            list.split(',')
                .map(|v| parse_f64(key, v.trim()))
                .collect::<Result<_, _>>()?,
        ),
        _ => return Err(ConfigError::domain(key, format!("cannot parse axis `{value}`"))),
    };
    if axis.values.is_empty() {
        return Err(ConfigError::domain(key, "axis has no values"));
    }
    Ok(axis)
}
