// SPDX-License-Identifier: Apache-2.0

//! Run configuration shared by the library entry points and the CLI.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Maximum number of links in a factorization.
    pub step_cap: usize,
    /// Number of curve points used by sample-based checks.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { step_cap: 64, sample_count: 10, seed: DEFAULT_SEED }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.step_cap < 1 {
            return Err(Error::Parse("step_cap must be at least 1".into()));
        }
        if self.sample_count < 3 {
            return Err(Error::Parse("sample_count must be at least 3".into()));
        }
        Ok(())
    }

    /// The single generator all randomness flows from.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(Config::default().validate().is_ok());
        let c: Config = serde_json::from_str(r#"{"seed": 3}"#).unwrap();
        assert_eq!(c.step_cap, 64);
        assert_eq!(c.seed, 3);
        assert!(Config { sample_count: 2, ..Config::default() }.validate().is_err());
    }
}
