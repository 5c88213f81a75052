//! Standard-library companion to [`xgc_core`]: decoders, model files, the
//! end-to-end scoring pipeline, benchmark evaluation, fixture generation,
//! and the `xgc` command-line interface.

use std::io::Write;
use std::path::Path;

pub mod cli;
pub mod config;
pub mod evaluate;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod pipeline;

pub use xgc_core;

/// Write a file atomically: the bytes land in a temporary sibling which is
/// renamed over the destination, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
