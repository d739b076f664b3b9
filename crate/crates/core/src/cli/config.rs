//! Run configuration: defaults, presets, `key=value` files and flags, in increasing priority.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::gaussian::parse_seed;
use crate::groupring::{Quotient, RingSpec};
use crate::groups::GroupSpec;

pub const KEYS: &[&str] = &[
    "family", "m", "n", "p", "k", "quotient", "q", "alpha", "width", "seed", "trials", "jobs", "preset", "out",
    "count", "r", "dim", "lattice", "coin",
];

const DEFAULTS: &[(&str, &str)] = &[
    ("family", "I"),
    ("m", "2"),
    ("n", "4"),
    ("p", "5"),
    ("k", "1"),
    ("quotient", "none"),
    ("q", "17"),
    ("alpha", "0.01"),
    ("width", "1"),
    ("seed", "0"),
    ("trials", "100"),
    ("jobs", "1"),
    ("count", "10"),
    ("r", "4"),
    ("dim", "8"),
    ("lattice", "Zn"),
    ("coin", "real"),
];

/// Parameter bundles used by the acceptance checks.
fn preset(name: &str) -> Option<&'static [(&'static str, &'static str)]> {
    match name {
        "desk" => Some(&[("family", "I"), ("m", "2"), ("n", "8"), ("quotient", "auto"), ("q", "257"), ("width", "1"), ("trials", "1000")]),
        _ => None,
    }
}

/// Fully resolved settings; every key has a value.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got {raw:?}", no + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(CliError::Usage(format!("config line {}: unknown key {k:?}", no + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

impl Config {
    /// Layers defaults, the preset, the file and the flags.
    pub fn resolve(file: Option<&Path>, flags: &[(String, String)]) -> Result<Self, CliError> {
        let file_entries = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => Vec::new(),
        };
        let preset_name = flags
            .iter()
            .chain(&file_entries)
            .find(|(k, _)| k == "preset")
            .map(|(_, v)| v.clone());
        let mut values: BTreeMap<String, String> =
            DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        if let Some(name) = &preset_name {
            let entries = preset(name).ok_or_else(|| CliError::Usage(format!("unknown preset {name:?}")))?;
            values.extend(entries.iter().map(|(k, v)| (k.to_string(), v.to_string())));
            values.insert("preset".into(), name.clone());
        }
        values.extend(file_entries);
        values.extend(flags.iter().cloned());
        let cfg = Config { values };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        for key in ["m", "n", "p", "k", "trials", "jobs", "count", "dim"] {
            self.usize(key)?;
        }
        for key in ["alpha", "width", "r"] {
            self.f64(key)?;
        }
        self.i64("q")?;
        self.seed()?;
        self.quotient()?;
        match self.str("family") {
            "I" | "II" => {}
            other => return Err(CliError::Usage(format!("family must be I or II, got {other:?}"))),
        }
        Ok(())
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T, CliError> {
        self.str(key).parse().map_err(|_| CliError::Usage(format!("{key} must be {what}, got {:?}", self.str(key))))
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn i64(&self, key: &str) -> Result<i64, CliError> {
        self.parsed(key, "an integer")
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let x: f64 = self.parsed(key, "a real number")?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(CliError::Usage(format!("{key} must be finite")))
        }
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        parse_seed(self.str("seed")).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn jobs(&self) -> Result<usize, CliError> {
        Ok(self.usize("jobs")?.max(1))
    }

    pub fn quotient(&self) -> Result<bool, CliError> {
        match self.str("quotient") {
            "none" => Ok(false),
            "auto" => Ok(true),
            other => Err(CliError::Usage(format!("quotient must be none or auto, got {other:?}"))),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }

    pub fn group(&self) -> Result<GroupSpec, CliError> {
        let g = match self.str("family") {
            "I" => GroupSpec::type_i(self.usize("m")?, self.usize("n")?),
            _ => {
                let k = u32::try_from(self.usize("k")?).map_err(|_| CliError::Usage("k too large".into()))?;
                GroupSpec::type_ii(self.usize("p")?, k)
            }
        };
        Ok(g?)
    }

    pub fn ring(&self) -> Result<RingSpec, CliError> {
        let group = self.group()?;
        if self.quotient()? {
            Ok(RingSpec::quotient_of(group)?)
        } else {
            Ok(RingSpec::new(group, Quotient::None)?)
        }
    }
}
