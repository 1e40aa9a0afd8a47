//! TOML run configuration.
//!
//! A config file mirrors the command-line flags with `snake_case` keys (see
//! `docs/config.schema.toml` for the annotated schema). Values resolve in
//! this order: command-line flag, config file, built-in default. Flags that
//! override a config value are recorded in the artifact metadata.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

/// Errors that make a run unusable before it starts (exit code 2).
#[derive(Debug)]
pub enum ConfigError {
    /// Unreadable file.
    Io(String),
    /// Syntactically invalid TOML; message carries line and column.
    Parse(String),
    /// Well-formed TOML with an invalid key or value.
    Schema(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(msg) => write!(f, "config: {msg}"),
            ConfigError::Parse(msg) => write!(f, "config parse error: {msg}"),
            ConfigError::Schema(msg) => write!(f, "config schema error: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Raw file contents; every key optional so flags can fill the gaps.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub group: Option<String>,
    pub out: Option<String>,
    pub threshold: Option<i64>,
    pub ue_count: Option<i64>,
    pub corrupt: Option<Vec<i64>>,
    pub ue_counts: Option<String>,
    pub protocols: Option<Vec<String>>,
    pub kind: Option<String>,
    pub trials: Option<i64>,
    pub supi_from_id: Option<bool>,
    pub per_ue_demand_mbps: Option<f64>,
    pub terrestrial_capacity_mbps: Option<f64>,
    pub uxnb_capacity_mbps: Option<f64>,
}

/// Parse and schema-check a config file. The returned digest is the SHA-256
/// of the raw file bytes, for the artifact metadata.
pub fn load_config(path: &Path) -> Result<(FileConfig, String), ConfigError> {
    let bytes =
        std::fs::read(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| ConfigError::Parse("file is not valid UTF-8".into()))?;
    let config: FileConfig = toml::from_str(&text).map_err(classify_toml_error)?;
    validate(&config)?;
    let digest = {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(&bytes))
    };
    Ok((config, digest))
}

fn classify_toml_error(err: toml::de::Error) -> ConfigError {
    let msg = err.to_string();
    // serde-level rejections (unknown/invalid fields) are schema errors;
    // anything carrying a line/column is a syntax error
    if msg.contains("unknown field") || msg.contains("invalid type") {
        ConfigError::Schema(msg)
    } else {
        ConfigError::Parse(msg)
    }
}

fn validate(config: &FileConfig) -> Result<(), ConfigError> {
    if let Some(command) = &config.command {
        const COMMANDS: [&str; 6] = [
            "keygen",
            "authenticate-uxnb",
            "handover",
            "sweep",
            "adversary",
            "capacity",
        ];
        if !COMMANDS.contains(&command.as_str()) {
            return Err(ConfigError::Schema(format!(
                "`command` must be one of {COMMANDS:?}, got {command:?}"
            )));
        }
    }
    if let Some(group) = &config.group {
        if group != "toy" && group != "standard" {
            return Err(ConfigError::Schema(format!(
                "`group` must be \"toy\" or \"standard\", got {group:?}"
            )));
        }
    }
    for (key, value) in [
        ("threshold", config.threshold),
        ("ue_count", config.ue_count),
        ("trials", config.trials),
    ] {
        if let Some(v) = value {
            if v < 1 || v > u32::MAX as i64 {
                return Err(ConfigError::Schema(format!(
                    "`{key}` must be in 1..={}, got {v}",
                    u32::MAX
                )));
            }
        }
    }
    if let Some(corrupt) = &config.corrupt {
        if let Some(bad) = corrupt.iter().find(|&&i| i < 0) {
            return Err(ConfigError::Schema(format!(
                "`corrupt` entries must be >= 0, got {bad}"
            )));
        }
    }
    for (key, value) in [
        ("per_ue_demand_mbps", config.per_ue_demand_mbps),
        (
            "terrestrial_capacity_mbps",
            config.terrestrial_capacity_mbps,
        ),
        ("uxnb_capacity_mbps", config.uxnb_capacity_mbps),
    ] {
        if let Some(v) = value {
            if v <= 0.0 {
                return Err(ConfigError::Schema(format!(
                    "`{key}` must be positive, got {v}"
                )));
            }
        }
    }
    Ok(())
}

/// `"A:B"` (inclusive) or a comma list `"1,5,10"`, ascending not required.
pub fn parse_ue_counts(spec: &str) -> Result<Vec<u32>, String> {
    if let Some((lo, hi)) = spec.split_once(':') {
        let lo: u32 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range start {lo:?}"))?;
        let hi: u32 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range end {hi:?}"))?;
        if lo == 0 {
            return Err("UE counts start at 1".into());
        }
        if lo > hi {
            return Err(format!("empty range {lo}:{hi}"));
        }
        return Ok((lo..=hi).collect());
    }
    let counts: Result<Vec<u32>, _> = spec.split(',').map(|s| s.trim().parse::<u32>()).collect();
    let counts = counts.map_err(|_| format!("bad UE count list {spec:?}"))?;
    if counts.is_empty() || counts.contains(&0) {
        return Err("UE counts must be >= 1".into());
    }
    Ok(counts)
}

/// Comma list of UE indices, e.g. `"17"` or `"1,2,3"`.
pub fn parse_corrupt(spec: &str) -> Result<BTreeSet<u32>, String> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad UE index {s:?}"))
        })
        .collect()
}
