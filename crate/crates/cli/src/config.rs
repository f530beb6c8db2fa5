//! Run configuration: a flat `key=value` file merged under command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use deltap::elliptic::WeierstrassCurve;
use deltap::PrimeSet;
use num_integer::Integer;

use crate::CliError;

/// Directory that relative `--output` paths are resolved against.
pub const OUTPUT_DIR_ENV: &str = "DELTAP_OUTPUT_DIR";

const KEYS: &[&str] = &["bound", "curve", "depth", "format", "m", "order", "output", "prec", "primes", "samples", "seed"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(CliError::Usage(format!("unknown format {s:?}; expected json, csv or text"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    /// Lines are `key = value`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!("config line {}: unknown key {k:?}", lineno + 1)));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Flag value if given, else the config file entry, parsed.
pub fn pick<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|s| s.parse::<T>().map_err(|_| CliError::Usage(format!("invalid value {s:?} for {key}"))))
        .transpose()
}

pub fn parse_primes(s: &str) -> Result<PrimeSet, CliError> {
    let mut v = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        v.push(part.parse::<u64>().map_err(|_| CliError::Usage(format!("invalid prime {part:?}")))?);
    }
    PrimeSet::new(v).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn parse_curve(s: &str) -> Result<WeierstrassCurve, CliError> {
    s.parse().map_err(|e: deltap::Error| CliError::Usage(format!("curve {s:?}: {e}")))
}

/// Validated settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub primes: PrimeSet,
    pub curve: Option<WeierstrassCurve>,
    pub m: u64,
    /// Series truncation N_T.
    pub order: u32,
    /// p-adic precision N_p.
    pub prec: u32,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

/// Raw values before merging with the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub primes: Option<String>,
    pub curve: Option<String>,
    pub m: Option<u64>,
    pub order: Option<u32>,
    pub prec: Option<u32>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
}

pub struct Defaults {
    pub primes: &'static str,
    pub order: u32,
    pub prec: u32,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults { primes: "3,5", order: 10, prec: 15 }
    }
}

impl RunConfig {
    pub fn resolve(flags: Overrides, file: &ConfigFile, defaults: Defaults) -> Result<Self, CliError> {
        let primes = parse_primes(&pick(flags.primes, file, "primes")?.unwrap_or_else(|| defaults.primes.to_string()))?;
        let curve = pick(flags.curve, file, "curve")?.map(|s: String| parse_curve(&s)).transpose()?;
        let m = pick(flags.m, file, "m")?.unwrap_or(1);
        let order = pick(flags.order, file, "order")?.unwrap_or(defaults.order);
        let prec = pick(flags.prec, file, "prec")?.unwrap_or(defaults.prec);
        let format = pick(flags.format, file, "format")?.map(|s: String| s.parse()).transpose()?.unwrap_or_default();
        let output = pick(flags.output, file, "output")?;
        let seed = pick(flags.seed, file, "seed")?.unwrap_or(0);
        if m == 0 {
            return Err(CliError::Usage("m must be positive".into()));
        }
        if let Some(&p) = primes.primes().iter().find(|&&p| m.gcd(&p) != 1) {
            return Err(CliError::Usage(format!("m = {m} is divisible by {p}")));
        }
        if order < 2 || prec < 2 {
            return Err(CliError::Usage("order and precision must be at least 2".into()));
        }
        Ok(RunConfig { primes, curve, m, order, prec, output, format, seed })
    }

    pub fn require_curve(&self) -> Result<&WeierstrassCurve, CliError> {
        self.curve.as_ref().ok_or_else(|| CliError::Usage("this command needs --curve".into()))
    }

    /// Where to write output, if anywhere.
    pub fn output_path(&self) -> Option<PathBuf> {
        let path = self.output.as_ref()?;
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if path.is_relative() => Some(Path::new(&dir).join(path)),
            _ => Some(path.clone()),
        }
    }
}
