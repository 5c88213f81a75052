//! Configuration files: a TOML rendering of [`PipelineConfig`], with
//! pipeline-level keys at the top and `[classifier]` / `[fragment]` tables
//! for the stage parameters. Every key is optional and defaults apply;
//! unknown keys are rejected. Command-line flags override file values.
//!
//! ```toml
//! temporal_budget = 10
//! model_path = "model.json"
//! concurrency = 4
//!
//! [classifier]
//! alpha = 0.5
//! pgc_ogc_threshold = 0.75
//!
//! [fragment]
//! grid_size = 7
//! patch_size = 32
//! seed = 0
//! ```

use std::path::{Path, PathBuf};

use crate::pipeline::PipelineConfig;

/// Configuration-file failure; the CLI maps these to the precondition exit
/// code.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    /// File could not be read.
    #[error("config file {path}: {source}")]
    Io {
        /// Config file path.
        path: PathBuf,
        /// OS-level error.
        source: std::io::Error,
    },
    /// File is not valid configuration TOML.
    #[error("config file {path}: {source}")]
    Parse {
        /// Config file path.
        path: PathBuf,
        /// TOML diagnostic.
        source: Box<toml::de::Error>,
    },
}

/// Load a configuration file; absent keys take their defaults.
pub fn load_config(path: &Path) -> Result<PipelineConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source: Box::new(source),
    })
}
