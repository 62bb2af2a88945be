//! Run configuration: defaults, `key = value` config files and flag overrides.

use std::path::{Path, PathBuf};

use thiserror::Error;

use super::format::OutputFormat;
use crate::bateman::{BatemanParams, KineticMode};
use crate::conformable::{FractionalOrder, Grid1D};
use crate::density::Frame;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config line {line}: unknown key '{key}' (known keys: {})", CONFIG_KEYS.join(", "))]
    UnknownKey { line: usize, key: String },

    #[error("invalid value for {key}: {message}")]
    Invalid { key: &'static str, message: String },

    #[error(transparent)]
    Physics(#[from] crate::Error),
}

/// `min,max,count` specification of a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridRange {
    pub const fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn grid(&self) -> crate::Result<Grid1D> {
        Grid1D::uniform(self.min, self.max, self.count)
    }
}

impl std::str::FromStr for GridRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [min, max, count] = parts[..] else {
            return Err(format!("expected min,max,count, got '{s}'"));
        };
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("'{v}' is not a number"));
        let range = GridRange {
            min: num(min)?,
            max: num(max)?,
            count: count.parse().map_err(|_| format!("'{count}' is not a point count"))?,
        };
        range.grid().map_err(|e| e.to_string())?;
        Ok(range)
    }
}

/// Values supplied by one source (config file or command line); `None`
/// means "not given here".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub lambda: Option<f64>,
    pub mass: Option<f64>,
    pub hbar: Option<f64>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub mode: Option<KineticMode>,
    pub frame: Option<Frame>,
    pub y: Option<GridRange>,
    pub t: Option<GridRange>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// Keys accepted in config files, spelled like the long flags.
pub const CONFIG_KEYS: [&str; 13] = [
    "alpha", "omega", "lambda", "mass", "hbar", "n", "n-max", "mode", "frame", "y", "t", "out", "format",
];

impl Overrides {
    /// Later values win.
    pub fn merge(self, over: Overrides) -> Overrides {
        Overrides {
            alpha: over.alpha.or(self.alpha),
            omega: over.omega.or(self.omega),
            lambda: over.lambda.or(self.lambda),
            mass: over.mass.or(self.mass),
            hbar: over.hbar.or(self.hbar),
            n: over.n.or(self.n),
            n_max: over.n_max.or(self.n_max),
            mode: over.mode.or(self.mode),
            frame: over.frame.or(self.frame),
            y: over.y.or(self.y),
            t: over.t.or(self.t),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<bool, String> {
        fn num(v: &str) -> Result<f64, String> {
            v.parse::<f64>().map_err(|_| format!("'{v}' is not a number"))
        }
        fn count(v: &str) -> Result<usize, String> {
            v.parse::<usize>()
                .map_err(|_| format!("'{v}' is not a non-negative integer"))
        }
        match key {
            "alpha" => self.alpha = Some(num(value)?),
            "omega" => self.omega = Some(num(value)?),
            "lambda" => self.lambda = Some(num(value)?),
            "mass" => self.mass = Some(num(value)?),
            "hbar" => self.hbar = Some(num(value)?),
            "n" => self.n = Some(count(value)?),
            "n-max" | "n_max" => self.n_max = Some(count(value)?),
            "mode" => self.mode = Some(value.parse().map_err(|e: crate::Error| e.to_string())?),
            "frame" => self.frame = Some(value.parse().map_err(|e: crate::Error| e.to_string())?),
            "y" => self.y = Some(value.parse()?),
            "t" => self.t = Some(value.parse()?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Checks each supplied value against its own domain.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key, message: String| ConfigError::Invalid { key, message };
        if let Some(a) = self.alpha {
            FractionalOrder::new(a).map_err(|e| invalid("alpha", e.to_string()))?;
        }
        for (key, v) in [("omega", self.omega), ("mass", self.mass), ("hbar", self.hbar)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(invalid(key, format!("must be positive and finite, got {v}")));
                }
            }
        }
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l >= 0.0) {
                return Err(invalid("lambda", format!("must be non-negative and finite, got {l}")));
            }
        }
        Ok(())
    }
}

/// Parses config-file text into overrides.
pub fn parse_config(text: &str) -> Result<Overrides, ConfigError> {
    let mut out = Overrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                message: format!("expected 'key = value', got '{content}'"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        match out.set(key, value) {
            Ok(true) => out.validate().map_err(|e| ConfigError::Parse {
                line,
                message: e.to_string(),
            })?,
            Ok(false) => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
            Err(message) => {
                return Err(ConfigError::Parse {
                    line,
                    message: format!("{key}: {message}"),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Overrides, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: BatemanParams,
    pub mode: KineticMode,
    pub frame: Frame,
    pub y: GridRange,
    pub t: GridRange,
    pub n: usize,
    pub n_max: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub const DEFAULT_Y: GridRange = GridRange::new(1e-3, 8.0, 800);
    pub const DEFAULT_T: GridRange = GridRange::new(1e-3, 5.0, 50);
    pub const DEFAULT_N_MAX: usize = 3;

    /// Applies `layers` in order (later wins) on top of the defaults.
    pub fn resolve(layers: impl IntoIterator<Item = Overrides>) -> Result<Self, ConfigError> {
        let o = layers.into_iter().fold(Overrides::default(), Overrides::merge);
        o.validate()?;
        let params = BatemanParams::new(
            o.mass.unwrap_or(1.0),
            o.omega.unwrap_or(1.0),
            o.lambda.unwrap_or(0.0),
            o.hbar.unwrap_or(1.0),
            o.alpha.unwrap_or(1.0),
        )?;
        Ok(Self {
            params,
            mode: o.mode.unwrap_or_default(),
            frame: o.frame.unwrap_or_default(),
            y: o.y.unwrap_or(Self::DEFAULT_Y),
            t: o.t.unwrap_or(Self::DEFAULT_T),
            n: o.n.unwrap_or(0),
            n_max: o.n_max.unwrap_or(Self::DEFAULT_N_MAX),
            out: o.out,
            format: o.format.unwrap_or_default(),
        })
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::resolve([]).expect("defaults are valid")
    }
}

/// Reads a config file and merges it with the defaults.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    RunConfig::resolve([read_config(path)?])
}
