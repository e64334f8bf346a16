//! Flat `key = value` configuration files.
//!
//! One entry per line; `#` starts a comment. Lists are comma separated and a
//! numeric list may also be written as an inclusive range `start:step:stop`.
//! Every key must be consumed by the command reading the file, so a typo is
//! reported instead of silently falling back to a default.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, or 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config:{}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn at(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
pub struct Config {
    entries: Vec<Entry>,
    used: HashSet<String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: Vec<Entry> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(at(line, format!("expected 'key = value', got '{content}'")));
            };
            let key = k.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(at(line, format!("invalid key '{key}'")));
            }
            if let Some(prev) = entries.iter().find(|e| e.key == key) {
                return Err(at(line, format!("duplicate key '{key}' (first set on line {})", prev.line)));
            }
            entries.push(Entry { key: key.to_string(), value: v.trim().to_string(), line });
        }
        Ok(Self { entries, used: HashSet::new() })
    }

    fn entry(&mut self, key: &str) -> Option<Entry> {
        let e = self.entries.iter().find(|e| e.key == key)?.clone();
        self.used.insert(key.to_string());
        Some(e)
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.iter().any(|e| e.key == key)
    }

    pub fn line_of(&self, key: &str) -> usize {
        self.entries.iter().find(|e| e.key == key).map_or(0, |e| e.line)
    }

    pub fn optional<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(e) = self.entry(key) else { return Ok(None) };
        e.value
            .parse()
            .map(Some)
            .map_err(|err| at(e.line, format!("bad value for '{key}': {err}")))
    }

    pub fn get_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        Ok(self.optional(key)?.unwrap_or(default))
    }

    pub fn required<T: FromStr>(&mut self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.optional(key)?.ok_or_else(|| at(0, format!("missing required key '{key}'")))
    }

    pub fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(e) = self.entry(key) else { return Ok(None) };
        let items: Vec<&str> = e.value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        items
            .iter()
            .map(|s| s.parse().map_err(|err| at(e.line, format!("bad item '{s}' in '{key}': {err}"))))
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    /// Numbers as a list or an inclusive `start:step:stop` range.
    pub fn numbers(&mut self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(e) = self.entry(key) else { return Ok(None) };
        let bad = |what: &str| at(e.line, format!("bad value for '{key}': {what}"));
        if e.value.contains(':') {
            let parts: Vec<f64> = e
                .value
                .split(':')
                .map(|s| s.trim().parse::<f64>().map_err(|err| bad(&err.to_string())))
                .collect::<Result<_, _>>()?;
            let [start, step, stop] = parts[..] else {
                return Err(bad("a range needs start:step:stop"));
            };
            if !(step > 0.0) || stop < start {
                return Err(bad("range needs a positive step and stop >= start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 100_000 {
                return Err(bad("range has too many points"));
            }
            // rounded to the step's decimal grid so 0.1 + 2 * 0.05 prints as 0.2
            return Ok(Some((0..=n).map(|i| round12(start + step * i as f64)).collect()));
        }
        self.used.remove(key);
        self.list(key)
    }

    /// Reject keys nobody asked for.
    pub fn finish(self) -> Result<(), ConfigError> {
        match self.entries.iter().find(|e| !self.used.contains(&e.key)) {
            Some(e) => Err(at(e.line, format!("unknown key '{}'", e.key))),
            None => Ok(()),
        }
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}
