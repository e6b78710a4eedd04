//! Run configuration layered as flags over environment over a key=value file
//! over built-in defaults.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use catalan_cf::challenge::DataFormat;
use catalan_cf::{DEFAULT_DEPTH, DEFAULT_DIGITS};

use crate::CliError;

pub const CONFIG_ENV: &str = "CATCF_CONFIG";
pub const DIGITS_ENV: &str = "CATCF_DIGITS";
pub const DEPTH_ENV: &str = "CATCF_DEPTH";
pub const JOBS_ENV: &str = "CATCF_JOBS";
pub const FORMAT_ENV: &str = "CATCF_FORMAT";
pub const PARAMS_ENV: &str = "CATCF_PARAMS_DIR";
pub use catalan_cf::numerics::CACHE_ENV;

pub const MIN_DIGITS: u32 = 30;
pub const MIN_DEPTH: u64 = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub digits: u32,
    pub depth: u64,
    pub c_range: Option<RangeInclusive<i64>>,
    pub kappa_range: Option<RangeInclusive<u32>>,
    pub cache_dir: Option<PathBuf>,
    pub format: DataFormat,
    pub jobs: Option<usize>,
    pub params_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            digits: DEFAULT_DIGITS,
            depth: DEFAULT_DEPTH,
            c_range: None,
            kappa_range: None,
            cache_dir: None,
            format: DataFormat::Brace,
            jobs: None,
            params_dir: PathBuf::from("params"),
        }
    }
}

/// One configuration source; unset fields defer to the layer below.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    pub digits: Option<u32>,
    pub depth: Option<u64>,
    pub c_range: Option<RangeInclusive<i64>>,
    pub kappa_range: Option<RangeInclusive<u32>>,
    pub cache_dir: Option<PathBuf>,
    pub format: Option<DataFormat>,
    pub jobs: Option<usize>,
    pub params_dir: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("invalid value {value:?} for {key}")))
}

/// Parses `a..b`, `a..=b` or a single value as an inclusive range.
pub fn parse_range<T>(s: &str) -> Result<RangeInclusive<T>, CliError>
where
    T: FromStr + PartialOrd + Copy,
{
    let s = s.trim();
    let bad = || CliError::usage(format!("invalid range {s:?}; expected a..b"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let v = s.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(CliError::usage(format!("empty range {s:?}")));
    }
    Ok(lo..=hi)
}

impl Layer {
    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "digits" => self.digits = Some(parse_value(key, value)?),
            "depth" => self.depth = Some(parse_value(key, value)?),
            "jobs" => self.jobs = Some(parse_value(key, value)?),
            "c" | "c_range" => self.c_range = Some(parse_range(value)?),
            "kappa" | "kappa_range" => self.kappa_range = Some(parse_range(value)?),
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value.trim())),
            "params_dir" => self.params_dir = Some(PathBuf::from(value.trim())),
            "format" => {
                self.format = Some(DataFormat::parse(value.trim()).map_err(|e| CliError::usage(e.to_string()))?)
            }
            _ => return Err(CliError::usage(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str, origin: &Path) -> Result<Self, CliError> {
        let mut layer = Layer::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("{}:{}: expected key = value", origin.display(), i + 1))
            })?;
            layer
                .set(k.trim(), v)
                .map_err(|e| CliError::usage(format!("{}:{}: {}", origin.display(), i + 1, e.message)))?;
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_text(&text, path)
    }

    /// Reads the `CATCF_*` variables through `get`.
    pub fn from_env(get: impl Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        let mut layer = Layer::default();
        for (var, key) in [
            (DIGITS_ENV, "digits"),
            (DEPTH_ENV, "depth"),
            (JOBS_ENV, "jobs"),
            (FORMAT_ENV, "format"),
            (CACHE_ENV, "cache_dir"),
            (PARAMS_ENV, "params_dir"),
        ] {
            if let Some(v) = get(var) {
                layer
                    .set(key, &v)
                    .map_err(|e| CliError::usage(format!("{var}: {}", e.message)))?;
            }
        }
        Ok(layer)
    }

    fn apply(self, cfg: &mut RunConfig) {
        if let Some(v) = self.digits {
            cfg.digits = v;
        }
        if let Some(v) = self.depth {
            cfg.depth = v;
        }
        if let Some(v) = self.c_range {
            cfg.c_range = Some(v);
        }
        if let Some(v) = self.kappa_range {
            cfg.kappa_range = Some(v);
        }
        if let Some(v) = self.cache_dir {
            cfg.cache_dir = Some(v);
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = self.jobs {
            cfg.jobs = Some(v);
        }
        if let Some(v) = self.params_dir {
            cfg.params_dir = v;
        }
    }
}

impl RunConfig {
    /// Defaults, then file, then environment, then flags.
    pub fn resolve(file: Option<Layer>, env: Layer, flags: Layer) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for layer in file.into_iter().chain([env, flags]) {
            layer.apply(&mut cfg);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.digits < MIN_DIGITS {
            return Err(CliError::usage(format!("digits must be >= {MIN_DIGITS}, got {}", self.digits)));
        }
        if self.depth < MIN_DEPTH {
            return Err(CliError::usage(format!("depth must be >= {MIN_DEPTH}, got {}", self.depth)));
        }
        if self.jobs == Some(0) {
            return Err(CliError::usage("jobs must be >= 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range::<i64>("2..10").unwrap(), 2..=10);
        assert_eq!(parse_range::<i64>("2..=10").unwrap(), 2..=10);
        assert_eq!(parse_range::<u32>("4").unwrap(), 4..=4);
        assert!(parse_range::<i64>("5..2").is_err());
        assert!(parse_range::<i64>("a..b").is_err());
    }

    #[test]
    fn precedence() {
        let file = Layer::from_text("digits = 100\ndepth=500 # comment\nformat = csv\n", Path::new("f")).unwrap();
        let env = Layer::from_env(|k| (k == DIGITS_ENV).then(|| "120".to_string())).unwrap();
        let flags = Layer {
            depth: Some(900),
            ..Layer::default()
        };
        let cfg = RunConfig::resolve(Some(file), env, flags).unwrap();
        assert_eq!(cfg.digits, 120);
        assert_eq!(cfg.depth, 900);
        assert_eq!(cfg.format, DataFormat::Csv);
    }

    #[test]
    fn validation() {
        let low = Layer {
            digits: Some(20),
            ..Layer::default()
        };
        assert!(RunConfig::resolve(None, Layer::default(), low).is_err());
        let shallow = Layer {
            depth: Some(50),
            ..Layer::default()
        };
        assert!(RunConfig::resolve(None, Layer::default(), shallow).is_err());
    }

    #[test]
    fn bad_file_lines() {
        assert!(Layer::from_text("digits\n", Path::new("f")).is_err());
        assert!(Layer::from_text("colour = red\n", Path::new("f")).is_err());
        assert!(Layer::from_text("digits = many\n", Path::new("f")).is_err());
    }
}
