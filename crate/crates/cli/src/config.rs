//! Flat `key = value` settings shared by config files and flags.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use swanson_core::NormKind;

use crate::error::{CliError, CliResult};

/// Every key accepted in a config file; each also has a `--key` flag.
pub const KNOWN_KEYS: &[&str] = &[
    "omega",
    "alpha",
    "beta",
    "delta",
    "z-min",
    "z-max",
    "z-steps",
    "grid",
    "alpha-min",
    "alpha-max",
    "beta-min",
    "beta-max",
    "norm",
    "out",
    "seed",
    "t",
    "sites",
    "omegas",
    "alphas",
    "betas",
    "steps",
    "n-min",
    "n-max",
    "random-chain",
    "tol",
];

fn canonical(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

/// Parse config text. Blank lines and anything after `#` are ignored.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected `key = value`", n + 1))
        })?;
        let key = canonical(key);
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key `{key}`",
                n + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

/// Merged settings; flag values override file values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn merge(file: BTreeMap<String, String>, flags: BTreeMap<String, String>) -> Self {
        let mut values = file;
        values.extend(flags);
        Self { values }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn parse<T: FromStr>(&self, key: &str, value: &str) -> CliResult<T> {
        value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{key}: cannot parse `{value}`")))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        let x = match self.raw(key) {
            Some(v) => self.parse(key, v)?,
            None => default,
        };
        if !x.is_finite() {
            return Err(CliError::Usage(format!("{key} must be finite")));
        }
        Ok(x)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        self.raw(key).map_or(Ok(default), |v| self.parse(key, v))
    }

    pub fn u64_or(&self, key: &str, default: u64) -> CliResult<u64> {
        self.raw(key).map_or(Ok(default), |v| self.parse(key, v))
    }

    pub fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        self.raw(key).map_or(Ok(default), |v| self.parse(key, v))
    }

    /// Comma-separated list.
    pub fn list_or<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> CliResult<Vec<T>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v.split(',').map(|item| self.parse(key, item)).collect(),
        }
    }

    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> CliResult<Vec<f64>> {
        let xs = self.list_or(key, default)?;
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Usage(format!("{key} entries must be finite")));
        }
        Ok(xs)
    }

    /// `N` or `NxM`; each axis needs at least two points.
    pub fn grid_or(&self, default: usize) -> CliResult<(usize, usize)> {
        let (nx, ny) = match self.raw("grid") {
            None => (default, default),
            Some(v) => match v.split_once(['x', 'X']) {
                Some((a, b)) => (self.parse("grid", a)?, self.parse("grid", b)?),
                None => {
                    let n = self.parse("grid", v)?;
                    (n, n)
                }
            },
        };
        if nx < 2 || ny < 2 {
            return Err(CliError::Usage(format!(
                "grid needs at least 2 points per axis, got {nx}x{ny}"
            )));
        }
        Ok((nx, ny))
    }

    pub fn norm_kind(&self) -> CliResult<NormKind> {
        match self.raw("norm").map(|s| s.trim().to_ascii_lowercase()) {
            None => Ok(NormKind::default()),
            Some(s) if s == "left" => Ok(NormKind::DiracLeft),
            Some(s) if s == "right" => Ok(NormKind::DiracRight),
            Some(s) => Err(CliError::Usage(format!(
                "norm must be `left` or `right`, got `{s}`"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_spacing() {
        let map = parse_config("# header\nomega = 0.25  # trailing\n\n  z_min=-1\n").unwrap();
        assert_eq!(map.get("omega").unwrap(), "0.25");
        assert_eq!(map.get("z-min").unwrap(), "-1");
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn rejects_unknown_and_malformed_lines() {
        assert!(matches!(
            parse_config("colour = red"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_config("omega 0.25"),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config("omega = 0.1\nalpha = 2").unwrap();
        let flags = BTreeMap::from([("omega".to_string(), "0.3".to_string())]);
        let s = Settings::merge(file, flags);
        assert_eq!(s.f64_or("omega", 0.0).unwrap(), 0.3);
        assert_eq!(s.f64_or("alpha", 0.0).unwrap(), 2.0);
        assert_eq!(s.f64_or("beta", 7.0).unwrap(), 7.0);
    }

    #[test]
    fn typed_accessors() {
        let s = Settings::merge(
            parse_config("grid = 3x5\ndelta = 0, 0.25,0.5\nnorm = LEFT\nomega = nan").unwrap(),
            BTreeMap::new(),
        );
        assert_eq!(s.grid_or(9).unwrap(), (3, 5));
        assert_eq!(s.f64_list_or("delta", &[]).unwrap(), vec![0.0, 0.25, 0.5]);
        assert_eq!(s.norm_kind().unwrap(), NormKind::DiracLeft);
        assert!(s.f64_or("omega", 0.0).is_err());
        let one = Settings::merge(parse_config("grid = 1").unwrap(), BTreeMap::new());
        assert!(one.grid_or(9).is_err());
    }
}
