//! Run configuration: a versioned JSON file merged with command-line flags.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Trace,
    Char,
    Index,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Trace => "trace",
            Command::Char => "char",
            Command::Index => "index",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    #[default]
    S3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Example {
    BottToeplitz,
    Resolvent,
    Automorphism,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connection {
    #[default]
    Levi,
    Flat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TraceTable,
    Vacuum,
    HzStructure,
    Mehler,
    CurvatureTraces,
    TraceProperty,
    All,
}

/// Everything a run depends on. Absent knobs take the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default)]
    pub manifold: Manifold,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<Example>,
    #[serde(default)]
    pub connection: Connection,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<i32>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_cutoff")]
    pub fock_cutoff: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emit_samples: Option<PathBuf>,
}

fn default_n() -> usize {
    1
}

fn default_grid() -> usize {
    32
}

fn default_cutoff() -> u32 {
    24
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: SCHEMA,
            command: None,
            manifold: Manifold::S3,
            suite: None,
            symbol: None,
            example: None,
            connection: Connection::Levi,
            n: default_n(),
            grade: None,
            grid: default_grid(),
            fock_cutoff: default_cutoff(),
            depth: None,
            seed: 0,
            output: None,
            emit_samples: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if c.schema != SCHEMA {
            return Err(Error::Config(format!(
                "schema {} is not supported (expected {SCHEMA})",
                c.schema
            )));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn depth(&self) -> usize {
        self.depth.unwrap_or(crate::moyal::expansion::default_depth(self.n))
    }

    /// Checks that the knobs make sense for the command.
    pub fn validate(&self) -> Result<Command> {
        let cmd = self
            .command
            .ok_or_else(|| Error::Config("no command given".into()))?;
        if self.n == 0 || self.n > 3 {
            return Err(Error::Config(format!("n = {} is outside 1..=3", self.n)));
        }
        if self.grid < 8 {
            return Err(Error::Config(format!("grid {} is below 8 nodes", self.grid)));
        }
        match cmd {
            Command::Trace if self.symbol.is_none() && self.example.is_none() => {
                Err(Error::Config("trace needs --symbol or --example".into()))
            }
            Command::Char | Command::Index if self.symbol.is_none() && self.example.is_none() => {
                Err(Error::Config(format!("{} needs --example or --symbol", cmd.name())))
            }
            _ if self.symbol.is_some() && self.example.is_some() => {
                Err(Error::Config("--symbol and --example are exclusive".into()))
            }
            _ => Ok(cmd),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let e = RunConfig::from_json(r#"{"schema": 1, "gird": 32}"#).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn wrong_schema_is_rejected() {
        assert!(RunConfig::from_json(r#"{"schema": 2}"#).is_err());
    }

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::from_json(r#"{"schema": 1, "command": "index", "example": "bott-toeplitz"}"#)
            .unwrap();
        assert_eq!(c.grid, 32);
        assert_eq!(c.fock_cutoff, 24);
        assert_eq!(c.validate().unwrap(), Command::Index);
        let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
