//! Settings for the command line: built-in defaults, overridden by an
//! `osc.toml` file, overridden by `OASIS_OSC_*` environment variables and
//! flags.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use oasis_core::cost::CostModel;
use oasis_core::vocab::DEFAULT_BASE;
use oasis_core::{Decimal, Vocabulary};
use serde::Deserialize;

/// Looked up in the working directory when no `--config` is given.
pub const DEFAULT_CONFIG_FILE: &str = "osc.toml";
pub const DEFAULT_STORE: &str = ".osc/store";
pub const DEFAULT_LEDGER: &str = ".osc/ledger.jsonl";
pub const DEFAULT_SENDER: &str = "0x0";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid config {}: {source}", path.display())]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid value for {key}: {message}")]
    Value { key: &'static str, message: String },
}

/// A number written either as a TOML number or as a decimal string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn to_decimal(&self, key: &'static str) -> Result<Decimal, ConfigError> {
        let text = match self {
            Number::Int(i) => i.to_string(),
            Number::Float(f) => f.to_string(),
            Number::Text(s) => s.clone(),
        };
        text.parse().map_err(|_| ConfigError::Value { key, message: format!("{text:?} is not a decimal number") })
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    store: Option<PathBuf>,
    ledger: Option<PathBuf>,
    vocab_base: Option<String>,
    sender: Option<String>,
    gas_per_word: Option<u64>,
    gas_price_gwei: Option<Number>,
    usd_per_eth: Option<Number>,
}

impl FileConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Toml { path: path.to_path_buf(), source })
    }

    /// Reads `explicit` if given (it must exist), else the default file if
    /// present.
    pub fn load(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        let (path, required) = match explicit {
            Some(p) => (p.to_path_buf(), true),
            None => (PathBuf::from(DEFAULT_CONFIG_FILE), false),
        };
        match fs::read_to_string(&path) {
            Ok(text) => Self::parse(&text, &path),
            Err(e) if e.kind() == io::ErrorKind::NotFound && !required => Ok(Self::default()),
            Err(source) => Err(ConfigError::Io { path, source }),
        }
    }
}

/// Values given on the command line or through the environment.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub store: Option<PathBuf>,
    pub ledger: Option<PathBuf>,
    pub vocab_base: Option<String>,
    pub sender: Option<String>,
    pub gas_per_word: Option<u64>,
    pub gas_price_gwei: Option<Decimal>,
    pub usd_per_eth: Option<Decimal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub store: PathBuf,
    pub ledger: PathBuf,
    pub vocab: Vocabulary,
    pub sender: String,
    pub cost: CostModel,
}

impl CliConfig {
    pub fn resolve(o: Overrides, file: FileConfig) -> Result<Self, ConfigError> {
        let base = o.vocab_base.or(file.vocab_base).unwrap_or_else(|| DEFAULT_BASE.into());
        let vocab = Vocabulary::new(&base)
            .map_err(|e| ConfigError::Value { key: "vocab_base", message: e.to_string() })?;
        let mut cost = CostModel::default();
        if let Some(g) = o.gas_per_word.or(file.gas_per_word) {
            cost.gas_per_word = g.into();
        }
        let gwei = match o.gas_price_gwei {
            Some(d) => Some(d),
            None => file.gas_price_gwei.map(|n| n.to_decimal("gas_price_gwei")).transpose()?,
        };
        if let Some(g) = gwei {
            cost = cost
                .with_gas_price_gwei(&g)
                .map_err(|e| ConfigError::Value { key: "gas_price_gwei", message: e.to_string() })?;
        }
        cost.usd_per_eth = match o.usd_per_eth {
            Some(d) => Some(d),
            None => file.usd_per_eth.map(|n| n.to_decimal("usd_per_eth")).transpose()?,
        };
        cost.validate().map_err(|e| ConfigError::Value { key: "cost model", message: e.to_string() })?;
        Ok(Self {
            store: o.store.or(file.store).unwrap_or_else(|| DEFAULT_STORE.into()),
            ledger: o.ledger.or(file.ledger).unwrap_or_else(|| DEFAULT_LEDGER.into()),
            vocab,
            sender: o.sender.or(file.sender).unwrap_or_else(|| DEFAULT_SENDER.into()),
            cost,
        })
    }
}
