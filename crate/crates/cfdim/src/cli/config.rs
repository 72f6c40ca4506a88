//! `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are the long flag
//! names (`B`, `alpha`, `tol`, `leaf_budget`, ...). Command-line flags win over
//! the file, which wins over built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn get_raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parsed value for `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("config key {key:?}: cannot parse {v:?}"))),
        }
    }

    /// `cli`, else the file's value, else `default`.
    pub fn pick<T: FromStr>(&self, cli: Option<T>, key: &str, default: T) -> Result<T> {
        match cli {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// As [`pick`](Self::pick) without a default.
    pub fn require<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<T> {
        match cli {
            Some(v) => Ok(v),
            None => self.get(key)?.ok_or_else(|| Error::Config(format!("missing required parameter {key:?}"))),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

impl FromStr for ConfigFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", i + 1)));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }
}

/// Comma-separated list, e.g. `1,3` or `1, 2, 3`.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad list element {t:?} in {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let c: ConfigFile = "# comment\nB = 3\n\nalpha=4\n".parse().unwrap();
        assert_eq!(c.pick(None, "alpha", 2u64).unwrap(), 4);
        assert_eq!(c.pick(Some(7u64), "alpha", 2).unwrap(), 7);
        assert_eq!(c.pick(None, "n", 1usize).unwrap(), 1);
        assert_eq!(c.get_raw("B"), Some("3"));
        assert!(matches!(c.get::<u64>("B"), Ok(Some(3))));
        assert!("junk".parse::<ConfigFile>().is_err());
        let c: ConfigFile = "alpha = x".parse().unwrap();
        assert!(matches!(c.pick(None, "alpha", 1u64), Err(Error::Config(_))));
        assert_eq!(parse_list::<usize>("1, 3,4").unwrap(), vec![1, 3, 4]);
    }
}
