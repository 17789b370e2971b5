//! Flat key-value configuration files and CLI/file/default precedence.
//!
//! Files hold one `key = value` pair per line with `#` comments. Every
//! command consumes its own keys; anything left over is rejected by name.

use anyhow::{anyhow, bail, Result};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct FileConfig {
    entries: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow!("cannot read config {}: {e}", path.display()))?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                anyhow!("config line {} is not `key = value`: {raw:?}", lineno + 1)
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                bail!("config line {} has an empty key", lineno + 1);
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                bail!("config key {key:?} appears twice");
            }
        }
        Ok(FileConfig { entries })
    }

    /// Removes and parses a key if present.
    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow!("config key {key:?}: invalid value {raw:?} ({e})")),
        }
    }

    /// Errors on any key no command consumed.
    pub fn reject_unknown(self) -> Result<()> {
        if let Some(key) = self.entries.keys().next() {
            bail!("unknown config key {key:?}");
        }
        Ok(())
    }
}

/// Command line beats config file beats built-in default.
pub fn resolve<T>(cli: Option<T>, file: Option<T>, default: T) -> T {
    cli.or(file).unwrap_or(default)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_and_consumes_keys() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nbeta = 2.5\ncount=7\n\nseed = 11").unwrap();
        let mut cfg = FileConfig::load(f.path()).unwrap();
        assert_eq!(cfg.take::<f64>("beta").unwrap(), Some(2.5));
        assert_eq!(cfg.take::<usize>("count").unwrap(), Some(7));
        assert_eq!(cfg.take::<u64>("seed").unwrap(), Some(11));
        assert_eq!(cfg.take::<u64>("absent").unwrap(), None);
        cfg.reject_unknown().unwrap();
    }

    #[test]
    fn rejects_unknown_keys_by_name() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "mystery = 1").unwrap();
        let cfg = FileConfig::load(f.path()).unwrap();
        let err = cfg.reject_unknown().unwrap_err().to_string();
        assert!(err.contains("mystery"), "{err}");
    }

    #[test]
    fn rejects_bad_values_by_key() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "count = holes").unwrap();
        let mut cfg = FileConfig::load(f.path()).unwrap();
        let err = cfg.take::<usize>("count").unwrap_err().to_string();
        assert!(err.contains("count"), "{err}");
    }

    #[test]
    fn precedence_order() {
        assert_eq!(resolve(Some(1), Some(2), 3), 1);
        assert_eq!(resolve(None, Some(2), 3), 2);
        assert_eq!(resolve::<i32>(None, None, 3), 3);
    }
}
