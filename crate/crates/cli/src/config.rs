//! Run configuration, loaded from a TOML file. Every field has a default,
//! so an empty file is valid.
//!
//! ```toml
//! seed = 7
//! dir = "artifacts"
//! year = 2023
//! freshness_secs = 10
//!
//! [revocation]
//! degree = 16
//! capacity = 100
//!
//! [bench]
//! trials = 20
//!
//! [sim]
//! scenario = "all"
//! consumers = 5
//! file_bytes = 4600000
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use timesub::revocation::DEFAULT_DEGREE;
use timesub::scheme::DEFAULT_FRESHNESS_SECS;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    /// Artifact directory; relative artifact paths resolve against it.
    pub dir: PathBuf,
    pub year: i32,
    pub freshness_secs: u64,
    pub prefix: String,
    pub revocation: RevocationSection,
    pub bench: BenchSection,
    pub sim: SimSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: None,
            dir: PathBuf::from("."),
            year: 2023,
            freshness_secs: DEFAULT_FRESHNESS_SECS,
            prefix: "/com/test".into(),
            revocation: RevocationSection::default(),
            bench: BenchSection::default(),
            sim: SimSection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RevocationSection {
    pub degree: usize,
    pub capacity: usize,
}

impl Default for RevocationSection {
    fn default() -> Self {
        Self {
            degree: DEFAULT_DEGREE,
            capacity: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSection {
    pub trials: usize,
    pub heights: Vec<usize>,
    pub revoked: Vec<usize>,
    pub payload_bytes: usize,
}

impl Default for BenchSection {
    fn default() -> Self {
        Self {
            trials: 20,
            heights: vec![3, 5, 7, 9],
            revoked: vec![1, 4, 7, 11],
            payload_bytes: 1024,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    /// "i", "ii", "iii" or "all".
    pub scenario: String,
    /// Topology file; the bundled testbed when absent.
    pub topology: Option<PathBuf>,
    pub consumers: usize,
    pub file_bytes: usize,
    pub segment_size: usize,
    /// "concurrent" or "staggered".
    pub start: String,
    pub stagger_ms: u64,
    pub window: usize,
    pub cs_capacity: usize,
    pub loss_rate: f64,
    pub publish_date: String,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            scenario: "all".into(),
            topology: None,
            consumers: 5,
            file_bytes: 4_600_000,
            segment_size: 8192,
            start: "concurrent".into(),
            stagger_ms: 1000,
            window: 64,
            cs_capacity: 10_000,
            loss_rate: 0.0,
            publish_date: "2023-08-20".into(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Resolves an artifact path against the artifact directory.
    pub fn artifact(&self, name: impl AsRef<Path>) -> PathBuf {
        let name = name.as_ref();
        if name.is_absolute() {
            name.to_path_buf()
        } else {
            self.dir.join(name)
        }
    }
}
