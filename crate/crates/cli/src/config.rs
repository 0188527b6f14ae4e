//! Run configuration: flat `key = value` file, then `RS_LAB_SEED`, then
//! command-line flags, each layer overriding the previous one.

use std::path::PathBuf;

use rslab_core::verify::DEFAULT_SEED;
use rslab_core::ScalarMode;

use crate::CliError;

pub const N_LIMIT: u64 = 1_000_000;
pub const SEED_ENV: &str = "RS_LAB_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: ScalarMode,
    /// Truncation; each subcommand has its own default.
    pub n: Option<u64>,
    pub p_max: Option<u64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { mode: ScalarMode::Exact, n: None, p_max: None, seed: DEFAULT_SEED, out: None }
    }
}

pub fn parse_mode(s: &str) -> Result<ScalarMode, CliError> {
    match s.trim() {
        "exact" => Ok(ScalarMode::Exact),
        "float" => Ok(ScalarMode::Float),
        other => Err(CliError::BadInput(format!("mode must be exact or float, got `{other}`"))),
    }
}

fn parse_u64(key: &str, v: &str) -> Result<u64, CliError> {
    v.trim().parse().map_err(|_| CliError::BadInput(format!("{key}: expected a nonnegative integer, got `{v}`")))
}

impl RunConfig {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file(mut self, text: &str) -> Result<Self, CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::BadInput(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "mode" => self.mode = parse_mode(value)?,
                "N" | "n" => self.n = Some(parse_u64(key, value)?),
                "pmax" | "p_max" => self.p_max = Some(parse_u64(key, value)?),
                "seed" => self.seed = parse_u64(key, value)?,
                "out" => self.out = Some(PathBuf::from(value)),
                _ => return Err(CliError::BadInput(format!("config line {}: unknown key `{key}`", lineno + 1))),
            }
        }
        Ok(self)
    }

    pub fn apply_env(mut self, seed: Option<&str>) -> Result<Self, CliError> {
        if let Some(s) = seed {
            self.seed = parse_u64(SEED_ENV, s)?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.n {
            Some(n) if n == 0 || n > N_LIMIT => Err(CliError::BadInput(format!("N = {n} must lie in 1..={N_LIMIT}"))),
            _ => Ok(()),
        }
    }

    pub fn n_or(&self, default: u64) -> u64 {
        self.n.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env_layers() {
        let text = "# run\nmode = float\nN=300 # truncation\nseed = 5\nout = r.jsonl\n";
        let c = RunConfig::default().apply_file(text).unwrap();
        assert_eq!(c.mode, ScalarMode::Float);
        assert_eq!(c.n, Some(300));
        assert_eq!(c.seed, 5);
        assert_eq!(c.out, Some(PathBuf::from("r.jsonl")));
        assert_eq!(c.clone().apply_env(Some("11")).unwrap().seed, 11);
        assert_eq!(c.apply_env(None).unwrap().seed, 5);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(RunConfig::default().apply_file("colour = red").is_err());
        assert!(RunConfig::default().apply_file("N 5").is_err());
        assert!(RunConfig::default().apply_file("mode = fuzzy").is_err());
        let big = RunConfig { n: Some(N_LIMIT + 1), ..RunConfig::default() };
        assert!(big.validate().is_err());
    }
}
