//! Settings file and the merge with command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use prefadvisor::nnet::NetworkConfig;
use prefadvisor::report::Format;

use crate::Failure;

/// Settings accepted in the TOML file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub preset: Option<String>,
    pub layers: Option<Vec<usize>>,
    pub learning_rate: Option<f64>,
    pub momentum: Option<f64>,
    pub max_epochs: Option<usize>,
    pub target_mse: Option<f64>,
    pub init_half_range: Option<f64>,
    pub use_bias: Option<bool>,
    pub fixture: Option<String>,
    pub data: Option<PathBuf>,
    pub samples: Option<usize>,
    pub model: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub nn_weight: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))
    }
}

/// Flags that may override network settings.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct NetFlags {
    /// Topology preset: paper52 (8-30-52) or eval8 (8-30-8)
    #[arg(long)]
    pub preset: Option<String>,
    /// Comma-separated layer sizes, e.g. 8,30,8
    #[arg(long, value_delimiter = ',')]
    pub layers: Option<Vec<usize>>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub momentum: Option<f64>,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    #[arg(long)]
    pub target_mse: Option<f64>,
    #[arg(long)]
    pub init_half_range: Option<f64>,
    /// Add a bias input to every non-input layer
    #[arg(long)]
    pub use_bias: bool,
}

/// Where the purchase data comes from.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct DataFlags {
    /// Built-in table (only `table2`)
    #[arg(long, conflicts_with = "data")]
    pub fixture: Option<String>,
    /// Records CSV with header gender,age_band,sample
    #[arg(long)]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Fixture,
    File(PathBuf),
}

/// Resolved settings for one run.
#[derive(Debug)]
pub struct RunConfig {
    pub file: FileConfig,
    pub seed: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(
        config_path: Option<&Path>,
        seed: Option<u64>,
        format: Option<&str>,
        out: Option<PathBuf>,
    ) -> Result<Self, Failure> {
        let file = match config_path {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let format = match format.map(str::to_string).or_else(|| file.format.clone()) {
            Some(f) => f.parse().map_err(Failure::Config)?,
            None => Format::default(),
        };
        Ok(RunConfig {
            seed: seed.or(file.seed),
            out: out.or_else(|| file.out.clone()),
            format,
            file,
        })
    }

    pub fn network(&self, flags: &NetFlags) -> Result<NetworkConfig, Failure> {
        let f = &self.file;
        let mut cfg = match flags.preset.as_deref().or(f.preset.as_deref()) {
            Some(name) => NetworkConfig::preset(name).ok_or_else(|| {
                Failure::Config(format!(
                    "unknown preset `{name}` (expected paper52 or eval8)"
                ))
            })?,
            None => NetworkConfig::default(),
        };
        if let Some(v) = flags.layers.clone().or_else(|| f.layers.clone()) {
            cfg.layer_sizes = v;
        }
        if let Some(v) = flags.learning_rate.or(f.learning_rate) {
            cfg.learning_rate = v;
        }
        if let Some(v) = flags.momentum.or(f.momentum) {
            cfg.momentum = v;
        }
        if let Some(v) = flags.max_epochs.or(f.max_epochs) {
            cfg.max_epochs = v;
        }
        if let Some(v) = flags.target_mse.or(f.target_mse) {
            cfg.target_mse = v;
        }
        if let Some(v) = flags.init_half_range.or(f.init_half_range) {
            cfg.init_half_range = v;
        }
        cfg.use_bias = flags.use_bias || f.use_bias.unwrap_or(false);
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn data_source(&self, flags: &DataFlags) -> Result<DataSource, Failure> {
        let pick = match (&flags.fixture, &flags.data) {
            (Some(name), _) => Some(Err(name.clone())),
            (None, Some(path)) => Some(Ok(path.clone())),
            (None, None) => match (&self.file.fixture, &self.file.data) {
                (Some(_), Some(_)) => {
                    return Err(Failure::Config(
                        "config sets both `fixture` and `data`".into(),
                    ))
                }
                (Some(name), None) => Some(Err(name.clone())),
                (None, Some(path)) => Some(Ok(path.clone())),
                (None, None) => None,
            },
        };
        match pick {
            Some(Err(name)) if name.eq_ignore_ascii_case("table2") => Ok(DataSource::Fixture),
            Some(Err(name)) => Err(Failure::Config(format!(
                "unknown fixture `{name}` (expected table2)"
            ))),
            Some(Ok(path)) => Ok(DataSource::File(path)),
            None => Err(Failure::Config(
                "no data source: pass --fixture table2 or --data <path> (see --help)".into(),
            )),
        }
    }
}
