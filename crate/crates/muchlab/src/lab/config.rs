//! Plain-text `key = value` config files mirroring the CLI flags. Flags given
//! on the command line override file values.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use super::LabError;

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    entries: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut entries = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(LabError::BadConfig(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Parse the value stored under `key`, if any.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, LabError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                LabError::BadConfig(format!("key '{key}': cannot parse '{raw}'"))
            }),
        }
    }

    pub fn get_string(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_blanks() {
        let cfg = FileConfig::parse(
            "# solver\nn = 256\ndt = 5e-4\n\ndealias = true\nseed=9\n",
        )
        .unwrap();
        assert_eq!(cfg.get::<usize>("n").unwrap(), Some(256));
        assert_eq!(cfg.get::<f64>("dt").unwrap(), Some(5e-4));
        assert_eq!(cfg.get::<bool>("dealias").unwrap(), Some(true));
        assert_eq!(cfg.get::<u64>("seed").unwrap(), Some(9));
        assert_eq!(cfg.get::<f64>("missing").unwrap(), None);
    }

    #[test]
    fn rejects_malformed_lines_and_values() {
        assert!(FileConfig::parse("just words\n").is_err());
        let cfg = FileConfig::parse("n = banana\n").unwrap();
        assert!(cfg.get::<usize>("n").is_err());
    }
}
