//! Config-file schema and construction of sources from it.
//!
//! The format is TOML: flat `key = value` lines grouped into sections.
//! A minimal IID config:
//!
//! ```toml
//! seed = 42
//!
//! [process]
//! variant = "zipf"
//! beta = 0.5
//! kmax = 100000
//! ```
//!
//! A modulated chain replaces the `[process]` table:
//!
//! ```toml
//! [process]
//! variant = "markov"
//! states = 2
//! transition = [[0.9, 0.1], [0.1, 0.9]]
//!
//! [[process.emissions]]
//! variant = "zipf"
//! beta = 0.5
//! kmax = 500
//! ```
//!
//! An optional `[santa_fe]` section turns the narration into a paired
//! process with knowledge bits.

use std::fmt;
use std::path::Path;

use powerlaw_lab::law::DiscreteLaw;
use powerlaw_lab::sources::{MarkovSource, ProcessSpec, SantaFeConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Parse(toml::de::Error),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "cannot read config: {e}"),
            ConfigError::Parse(e) => write!(f, "cannot parse config: {e}"),
            ConfigError::Invalid(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LawConfig {
    Zipf { beta: f64, kmax: usize },
    Explicit { masses: Vec<f64> },
    Uniform { types: usize },
    Geometric { kmax: usize },
}

impl LawConfig {
    pub fn build(&self) -> Result<DiscreteLaw, ConfigError> {
        let law = match self {
            LawConfig::Zipf { beta, kmax } => DiscreteLaw::zipf(*beta, *kmax),
            LawConfig::Explicit { masses } => DiscreteLaw::from_masses(masses.clone()),
            LawConfig::Uniform { types } => DiscreteLaw::uniform(*types),
            LawConfig::Geometric { kmax } => DiscreteLaw::geometric_halving(*kmax),
        };
        law.map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProcessConfig {
    Zipf {
        beta: f64,
        kmax: usize,
    },
    Explicit {
        masses: Vec<f64>,
    },
    Uniform {
        types: usize,
    },
    Geometric {
        kmax: usize,
    },
    Markov {
        #[serde(skip_serializing_if = "Option::is_none")]
        states: Option<usize>,
        transition: Vec<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        stationary: Option<Vec<f64>>,
        emissions: Vec<LawConfig>,
    },
}

impl ProcessConfig {
    pub fn build(&self) -> Result<ProcessSpec, ConfigError> {
        match self {
            ProcessConfig::Zipf { beta, kmax } => {
                Ok(ProcessSpec::Iid(LawConfig::Zipf { beta: *beta, kmax: *kmax }.build()?))
            }
            ProcessConfig::Explicit { masses } => {
                Ok(ProcessSpec::Iid(LawConfig::Explicit { masses: masses.clone() }.build()?))
            }
            ProcessConfig::Uniform { types } => {
                Ok(ProcessSpec::Iid(LawConfig::Uniform { types: *types }.build()?))
            }
            ProcessConfig::Geometric { kmax } => {
                Ok(ProcessSpec::Iid(LawConfig::Geometric { kmax: *kmax }.build()?))
            }
            ProcessConfig::Markov { states, transition, stationary, emissions } => {
                if let Some(s) = states {
                    if *s != transition.len() {
                        return Err(ConfigError::Invalid(format!(
                            "states = {s} but transition has {} rows",
                            transition.len()
                        )));
                    }
                }
                let laws = emissions.iter().map(LawConfig::build).collect::<Result<Vec<_>, _>>()?;
                let source = match stationary {
                    Some(pi) => MarkovSource::with_stationary(transition.clone(), pi.clone(), laws),
                    None => MarkovSource::new(transition.clone(), laws),
                }
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
                Ok(ProcessSpec::MarkovModulated(source))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SantaFeSection {
    #[serde(default = "default_knowledge_entropy")]
    pub knowledge_entropy: f64,
}

fn default_knowledge_entropy() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub process: ProcessConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub santa_fe: Option<SantaFeSection>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        toml::from_str(&text).map_err(ConfigError::Parse)
    }

    pub fn process_spec(&self) -> Result<ProcessSpec, ConfigError> {
        self.process.build()
    }

    /// Paired-process view; `base_seed` is the resolved run seed.
    pub fn santa_fe(&self, base_seed: u64) -> Result<SantaFeConfig, ConfigError> {
        let bits = self.santa_fe.as_ref().map_or(1.0, |s| s.knowledge_entropy);
        SantaFeConfig::new(self.process_spec()?, bits, base_seed)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}
