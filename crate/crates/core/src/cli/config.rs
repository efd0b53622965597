//! Flat key-value config files.
//!
//! A config file is TOML without tables. Keys are the long flag names
//! without the leading dashes, e.g.
//!
//! ```toml
//! eta1 = 0.8
//! eta3 = 0.8
//! eta2-range = "0.9:0.999:50"
//! format = "json"
//! ```
//!
//! Flags given on the command line win over the file.

use std::collections::BTreeMap;
use std::path::Path;

use super::CliError;

pub const KEYS: &[&str] = &[
    "eta1",
    "eta2",
    "eta3",
    "g",
    "g1",
    "g2",
    "tail-tol",
    "n-max",
    "no-auto-grow",
    "tolerance",
    "grid",
    "dump-marginals",
    "eta2-range",
    "eps-range",
    "g-range",
    "levels",
    "delta-w-min",
    "range",
    "target",
    "out",
    "format",
    "svg",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    values: BTreeMap<String, toml::Value>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            CliError::Validation(format!("invalid config: {}", e.message()))
        })?;
        let mut values = BTreeMap::new();
        for (k, v) in table {
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Validation(format!("unknown config key `{k}`")));
            }
            if v.is_table() {
                return Err(CliError::Validation(format!(
                    "config key `{k}` must not be a table"
                )));
            }
            values.insert(k, v);
        }
        Ok(Self { values })
    }

    fn wrong(key: &str, want: &str) -> CliError {
        CliError::Validation(format!("config key `{key}` must be {want}"))
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(x)) => Ok(Some(*x)),
            Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(Self::wrong(key, "a number")),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(_) => Err(Self::wrong(key, "a non-negative integer")),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(Self::wrong(key, "true or false")),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(Self::wrong(key, "a string")),
        }
    }

    /// A string list, written either as an array or as one comma-separated
    /// string.
    pub fn strings(&self, key: &str) -> Result<Option<Vec<String>>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => {
                Ok(Some(s.split(',').map(|p| p.trim().to_string()).collect()))
            }
            Some(toml::Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Self::wrong(key, "a list of strings"))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(_) => Err(Self::wrong(key, "a list of strings")),
        }
    }

    /// A number list, written either as an array or as one comma-separated
    /// string.
    pub fn f64s(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    toml::Value::Float(x) => Ok(*x),
                    toml::Value::Integer(i) => Ok(*i as f64),
                    _ => Err(Self::wrong(key, "a list of numbers")),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(toml::Value::String(s)) => s
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Self::wrong(key, "a list of numbers"))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(_) => Err(Self::wrong(key, "a list of numbers")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typed_access() {
        let c = FileConfig::parse(
            "eta1 = 0.8\ng = 1\nn-max = 40\nno-auto-grow = true\nlevels = [0, 0.5]\ntarget = \"witness, n_a\"\n",
        )
        .unwrap();
        assert_eq!(c.f64("eta1").unwrap(), Some(0.8));
        assert_eq!(c.f64("g").unwrap(), Some(1.0));
        assert_eq!(c.usize("n-max").unwrap(), Some(40));
        assert_eq!(c.bool("no-auto-grow").unwrap(), Some(true));
        assert_eq!(c.f64s("levels").unwrap(), Some(vec![0.0, 0.5]));
        assert_eq!(c.strings("target").unwrap().unwrap(), ["witness", "n_a"]);
        assert_eq!(c.f64("eta2").unwrap(), None);
        assert!(c.string("eta1").is_err());
    }

    #[test]
    fn rejects_unknown_and_nested() {
        assert!(FileConfig::parse("bogus = 1").is_err());
        assert!(FileConfig::parse("[eta1]\nx = 1").is_err());
        assert!(FileConfig::parse("eta1 = ").is_err());
    }
}
