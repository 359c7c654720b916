//! Optional JSON configuration file whose keys mirror the long flag names.

use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Default)]
pub struct FileConfig(Map<String, Value>);

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        match serde_json::from_str(text)? {
            Value::Object(map) => Ok(Self(map)),
            _ => anyhow::bail!("config must be a JSON object"),
        }
    }

    /// Value of `key` (flag spelling, dashes or underscores) if present.
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        let value = self
            .0
            .get(key)
            .or_else(|| self.0.get(&key.replace('-', "_")));
        value
            .map(|v| {
                serde_json::from_value(v.clone()).with_context(|| format!("config key `{key}`"))
            })
            .transpose()
    }

    /// The flag if given, else the config entry, else `default`.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    pub fn pick_opt<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.get(key)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let c = FileConfig::parse(r#"{"seed": 5, "trials": 10, "dims": "2x2"}"#).unwrap();
        assert_eq!(c.pick(Some(7u64), "seed", 0).unwrap(), 7);
        assert_eq!(c.pick(None, "trials", 1usize).unwrap(), 10);
        assert_eq!(c.pick(None, "missing", 3usize).unwrap(), 3);
        assert_eq!(
            c.pick_opt::<String>(None, "dims").unwrap().as_deref(),
            Some("2x2")
        );
        assert!(c.pick::<u64>(None, "dims", 0).is_err());
        assert!(FileConfig::parse("[1, 2]").is_err());
    }
}
