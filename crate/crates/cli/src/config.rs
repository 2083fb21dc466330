//! Optional `key = value` defaults, overridden by command-line flags.
//!
//! Recognized keys: `terms` (q-expansion length), `kmax` (ratio and sweep
//! bound), `primes` (comma-separated sweep primes).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub terms: usize,
    pub kmax: i64,
    pub primes: Vec<u64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            terms: 20,
            kmax: 48,
            primes: vec![5, 7, 11, 13],
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        let mut config = Self::default();
        for (key, value) in entries {
            let bad = |e: std::num::ParseIntError| format!("{key}: {e}");
            match key.as_str() {
                "terms" => config.terms = value.parse().map_err(bad)?,
                "kmax" => config.kmax = value.parse().map_err(bad)?,
                "primes" => {
                    config.primes = value
                        .split(',')
                        .map(|p| p.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(bad)?
                }
                _ => return Err(format!("unknown config key `{key}`")),
            }
        }
        Ok(config)
    }
}
