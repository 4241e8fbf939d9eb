//! Run-time limits.

use std::str::FromStr;

/// Deepest level used when nothing else is configured.
pub const DEFAULT_MAX_LEVEL: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Level guard for quotients and family indices.
    pub max_level: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { max_level: DEFAULT_MAX_LEVEL }
    }
}

impl Config {
    /// Defaults, overridden by the `GRIG_MAX_LEVEL` environment variable.
    pub fn from_env() -> Config {
        let mut c = Config::default();
        if let Some(level) = std::env::var("GRIG_MAX_LEVEL").ok().and_then(|v| v.trim().parse().ok()) {
            c.max_level = level;
        }
        c
    }

    /// Applies `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply(&mut self, text: &str) -> Result<(), String> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", no + 1))?;
            match key.trim() {
                "max_level" => {
                    self.max_level = parse(value, no)?;
                }
                other => return Err(format!("line {}: unknown key '{other}'", no + 1)),
            }
        }
        Ok(())
    }
}

fn parse<T: FromStr>(value: &str, no: usize) -> Result<T, String> {
    value.trim().parse().map_err(|_| format!("line {}: bad value '{}'", no + 1, value.trim()))
}
