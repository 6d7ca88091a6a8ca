//! Effective parameters: built-in defaults, then an optional TOML file,
//! then command-line flags.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use librate_core::params::{DEFAULT_CD, DEFAULT_MU};
use librate_core::SystemParams;
use serde::Deserialize;

use crate::Format;

/// Oblateness used when neither the file nor the flags set one.
pub const DEFAULT_A2: f64 = 0.0024;

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mu: Option<f64>,
    pub q1: Option<f64>,
    pub a2: Option<f64>,
    pub cd: Option<f64>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Values given on the command line, each optional.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct FlagValues {
    pub mu: Option<f64>,
    pub q1: Option<f64>,
    pub a2: Option<f64>,
    pub cd: Option<f64>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effective {
    pub params: SystemParams,
    pub format: Format,
    pub threads: Option<usize>,
}

pub fn resolve(file: &FileConfig, flags: &FlagValues) -> Result<Effective> {
    let pick =
        |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
    let params = SystemParams::new(
        pick(flags.mu, file.mu, DEFAULT_MU),
        pick(flags.q1, file.q1, 1.0),
        pick(flags.a2, file.a2, DEFAULT_A2),
        pick(flags.cd, file.cd, DEFAULT_CD),
    )?;
    Ok(Effective {
        params,
        format: flags.format.or(file.format).unwrap_or_default(),
        threads: file.threads,
    })
}
