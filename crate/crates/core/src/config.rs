use std::env;

use serde::{Deserialize, Serialize};

pub const ENV_MAX_COLORINGS: &str = "POSET_RAMSEY_MAX_COLORINGS";
pub const ENV_MAX_GROUND_SIZE: &str = "POSET_RAMSEY_MAX_GROUND_SIZE";
pub const ENV_MAX_DOMAIN: &str = "POSET_RAMSEY_MAX_DOMAIN";
pub const ENV_JOBS: &str = "POSET_RAMSEY_JOBS";
pub const ENV_SEED: &str = "POSET_RAMSEY_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
    Dot,
}

/// Ceilings and knobs shared by every search.
///
/// `max_colorings` bounds the number of partial colorings the coloring search
/// may visit. `max_domain` bounds the number of colored objects and
/// `max_ground_size` the size of any structure a search builds. Exceeding
/// any of them is a hard [`Error::Infeasible`](crate::Error::Infeasible).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub max_colorings: u64,
    pub max_ground_size: usize,
    pub max_domain: usize,
    pub jobs: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_colorings: 1 << 24,
            max_ground_size: 4096,
            max_domain: 1 << 16,
            jobs: 1,
            seed: 0x5eed,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    /// Defaults overridden by the `POSET_RAMSEY_*` environment variables.
    pub fn from_env() -> crate::Result<Self> {
        let mut config = RunConfig::default();
        if let Some(v) = read_env(ENV_MAX_COLORINGS)? {
            config.max_colorings = v;
        }
        if let Some(v) = read_env(ENV_MAX_GROUND_SIZE)? {
            config.max_ground_size = v as usize;
        }
        if let Some(v) = read_env(ENV_MAX_DOMAIN)? {
            config.max_domain = v as usize;
        }
        if let Some(v) = read_env(ENV_JOBS)? {
            config.jobs = v as usize;
        }
        if let Some(v) = read_env(ENV_SEED)? {
            config.seed = v;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.max_colorings == 0 || self.max_ground_size == 0 || self.max_domain == 0 {
            return Err(crate::Error::Precondition("ceilings must be positive".into()));
        }
        if self.jobs == 0 {
            return Err(crate::Error::Precondition("jobs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_max_colorings(mut self, max: u64) -> Self {
        self.max_colorings = max;
        self
    }
}

fn read_env(key: &str) -> crate::Result<Option<u64>> {
    match env::var(key) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| crate::Error::Parse(format!("{key}={raw:?} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}
