//! `key=value` config files and flag/config/default resolution.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::UsageError;

/// Every key any subcommand understands. Unknown keys are rejected so typos surface.
const KNOWN_KEYS: &[&str] = &[
    "out", "format", "seed", "timings", "N", "k", "p", "s", "s-max", "samples", "raster", "raster-size",
    "x-min", "x-max", "y-max", "n-list", "lambda", "Lre", "Lim", "r-max", "tol", "output-step", "R",
    "p-list", "check", "only", "perturb-integrability",
];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(UsageError(format!("config line {}: expected key=value, got {raw:?}", i + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            return Err(UsageError(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Resolves each parameter as flag, then config file, then built-in default, and
/// remembers the effective value for the report header.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    pub effective: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(file: BTreeMap<String, String>) -> Self {
        Self { file, effective: BTreeMap::new() }
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, UsageError>
    where
        T: FromStr + Display,
    {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(text) => text
                    .parse()
                    .map_err(|_| UsageError(format!("config value {key}={text:?} does not parse")))?,
                None => default,
            },
        };
        self.effective.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Like [`Settings::get`] without a default; absent values are not echoed.
    pub fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, UsageError>
    where
        T: FromStr + Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(text) => Some(
                    text.parse()
                        .map_err(|_| UsageError(format!("config value {key}={text:?} does not parse")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.effective.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    pub fn flag(&mut self, key: &str, flag: bool) -> Result<bool, UsageError> {
        let set = flag || self.get_opt::<bool>(key, None)?.unwrap_or(false);
        self.effective.insert(key.to_string(), set.to_string());
        Ok(set)
    }
}

/// Comma-separated list, as given on the command line or in a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|part| part.trim().parse::<T>().map_err(|_| format!("bad list entry {part:?}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

impl<T: Display> Display for List<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let m = parse_config("# header\nN = 5\n\np=1.5 # trailing\n").unwrap();
        assert_eq!(m.get("N").map(String::as_str), Some("5"));
        assert_eq!(m.get("p").map(String::as_str), Some("1.5"));
        assert!(parse_config("bogus=1").is_err());
        assert!(parse_config("N 3").is_err());
    }

    #[test]
    fn flags_override_file() {
        let mut s = Settings::new(parse_config("N=5\nk=2").unwrap());
        assert_eq!(s.get("N", Some(3u32), 1).unwrap(), 3);
        assert_eq!(s.get("k", None, 0u32).unwrap(), 2);
        assert_eq!(s.get("p", None, 1.0f64).unwrap(), 1.0);
        assert_eq!(s.effective.get("N").map(String::as_str), Some("3"));
        assert!(Settings::new(parse_config("N=x").unwrap()).get("N", None, 1u32).is_err());
    }

    #[test]
    fn lists_round_trip() {
        let l: List<u32> = "4, 8,16".parse().unwrap();
        assert_eq!(l.0, vec![4, 8, 16]);
        assert_eq!(l.to_string(), "4,8,16");
        assert!("4,x".parse::<List<u32>>().is_err());
    }
}
