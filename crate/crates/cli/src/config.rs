//! `key = value` defaults, one per line; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CliError;

pub const KEYS: [&str; 11] = [
    "calculus", "level", "strategy", "max-steps", "kind", "emit", "seed", "count", "max-size", "depth", "suite",
];

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", n + 1)));
            }
            let v = v.trim();
            let v = v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v);
            values.insert(key, v.to_string());
        }
        Ok(Config { values })
    }

    /// The value under `key`, converted with `parse`.
    pub fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => parse(v)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))),
        }
    }
}

pub fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("not a number: `{s}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_keys_and_skips_comments() {
        let c = Config::parse("# defaults\nseed = 11\nmax_size=9  # smaller\nkind = \"cgps\"\n").unwrap();
        assert_eq!(c.get("seed", parse_num::<u64>).unwrap(), Some(11));
        assert_eq!(c.get("max-size", parse_num::<usize>).unwrap(), Some(9));
        assert_eq!(c.get("kind", |s| Ok(s.to_string())).unwrap().as_deref(), Some("cgps"));
        assert_eq!(c.get("count", parse_num::<usize>).unwrap(), None);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(matches!(Config::parse("colour = red"), Err(CliError::Usage(_))));
        assert!(matches!(Config::parse("seed"), Err(CliError::Usage(_))));
        let c = Config::parse("seed = x").unwrap();
        assert!(c.get("seed", parse_num::<u64>).is_err());
    }
}
