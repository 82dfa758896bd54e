//! Defaults from an optional `key = value` file.
//!
//! Recognised keys: `grid`, `samples`, `seed`, `threads`, `budget`. Blank
//! lines and `#` comments are ignored.

use std::path::Path;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub budget: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            grid: 2048,
            samples: 1_000_000,
            seed: 0,
            threads: None,
            budget: crate::lattice::DEFAULT_BUDGET,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        let mut offset = 0;
        for line in text.lines() {
            let body = line.split('#').next().unwrap_or("").trim();
            let here = offset;
            offset += line.len() + 1;
            if body.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse { pos: here, message };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got '{body}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<u64> {
                v.replace('_', "")
                    .parse::<u64>()
                    .map_err(|_| bad(format!("'{key}' needs a non-negative integer")))
            };
            match key {
                "grid" => cfg.grid = num(value)? as usize,
                "samples" => cfg.samples = num(value)? as usize,
                "seed" => cfg.seed = num(value)?,
                "threads" => cfg.threads = Some(num(value)? as usize),
                "budget" => cfg.budget = num(value)?,
                other => return Err(bad(format!("unknown config key '{other}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
