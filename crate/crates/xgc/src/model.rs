//! Quality-model files: JSON (de)serialization of [`SvrModel`] and the
//! flag / environment-variable resolution of which model file to use.

use std::path::{Path, PathBuf};

use xgc_core::brisque::{BrisqueError, SvrModel};

/// Environment variable naming a model file; an explicit `--model` flag or
/// config entry takes precedence over it.
pub const MODEL_ENV_VAR: &str = "XGC_MODEL";

/// Failure to obtain a usable model. The CLI maps every variant to the
/// model-loading exit code.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    /// File could not be read or written.
    #[error("model file {path}: {source}")]
    Io {
        /// Model file path.
        path: PathBuf,
        /// OS-level error.
        source: std::io::Error,
    },
    /// File is not valid model JSON.
    #[error("model file {path}: {source}")]
    Parse {
        /// Model file path.
        path: PathBuf,
        /// Serde diagnostic.
        source: serde_json::Error,
    },
    /// JSON parsed but the model is internally inconsistent.
    #[error("model file {path}: {source}")]
    Invalid {
        /// Model file path.
        path: PathBuf,
        /// Validation failure.
        source: BrisqueError,
    },
    /// No model was configured at all.
    #[error("no model configured; pass --model, set {MODEL_ENV_VAR}, or add model_path to the config")]
    Missing,
}

/// Load a model from JSON and validate it.
pub fn load_model(path: &Path) -> Result<SvrModel, ModelError> {
    let bytes = std::fs::read(path).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let model: SvrModel = serde_json::from_slice(&bytes).map_err(|source| ModelError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    model.validate().map_err(|source| ModelError::Invalid {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(model)
}

/// Serialize a model to pretty JSON, written atomically.
pub fn save_model(path: &Path, model: &SvrModel) -> Result<(), ModelError> {
    let json = serde_json::to_vec_pretty(model).expect("model serialization is infallible");
    crate::write_atomic(path, &json).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Pick the model path. Precedence: an explicit flag beats the `XGC_MODEL`
/// environment variable, which beats the configuration file.
pub fn resolve_model_path(flag: Option<&Path>, configured: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(MODEL_ENV_VAR).map(PathBuf::from))
        .or_else(|| configured.map(Path::to_path_buf))
}
