//! Dataset manifests: a CSV file naming each clip, where to find it, how to
//! decode it, and its subjective score.
//!
//! Schema (header required, no quoting):
//!
//! ```text
//! clip_id,path,kind,mos[,width,height,bit_depth]
//! ```
//!
//! `kind` is one of `y4m`, `raw_yuv`, `image_seq`, `scores_file`. The three
//! geometry columns are required for `raw_yuv` rows and ignored otherwise.
//! Relative paths resolve against the manifest's directory.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

/// Manifest problems are configuration errors, distinct from decode failures
/// in [`super::MediaError`]; the CLI maps them to a different exit code.
#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    /// Underlying file read failed.
    #[error("reading {path}: {source}")]
    Io {
        /// Manifest file.
        path: PathBuf,
        /// OS-level error.
        source: std::io::Error,
    },
    /// CSV layer rejected the file (field count, encoding).
    #[error("manifest {path}, {source}")]
    Csv {
        /// Manifest file.
        path: PathBuf,
        /// CSV diagnostic.
        source: csv::Error,
    },
    /// Header row does not start with the required columns.
    #[error("manifest header must begin `clip_id,path,kind,mos`, got {0:?}")]
    Header(String),
    /// A field failed to parse.
    #[error("manifest row {row} ({clip_id}): {message}")]
    Field {
        /// 1-based data row number.
        row: usize,
        /// Clip the row describes (or the raw first field).
        clip_id: String,
        /// What went wrong.
        message: String,
    },
    /// Two rows share a clip id.
    #[error("duplicate clip_id {0:?}")]
    DuplicateClipId(String),
    /// The manifest has a header but no rows.
    #[error("manifest {0} lists no clips")]
    Empty(PathBuf),
}

/// How to decode a manifest entry's media.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// YUV4MPEG2 stream.
    Y4m,
    /// Headerless planar YUV; needs the geometry columns.
    RawYuv,
    /// Directory of image files.
    ImageSeq,
    /// Precomputed scores, no decodable media.
    ScoresFile,
}

impl InputKind {
    fn parse(value: &str) -> Option<Self> {
        match value {
            "y4m" => Some(InputKind::Y4m),
            "raw_yuv" => Some(InputKind::RawYuv),
            "image_seq" => Some(InputKind::ImageSeq),
            "scores_file" => Some(InputKind::ScoresFile),
            _ => None,
        }
    }
}

/// Decode geometry for `raw_yuv` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawParams {
    /// Frame width in samples.
    pub width: usize,
    /// Frame height in samples.
    pub height: usize,
    /// Sample depth, 8 or 10.
    pub bit_depth: u8,
}

/// One manifest row.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    /// Unique clip identifier.
    pub clip_id: String,
    /// Media location, resolved against the manifest directory.
    pub path: PathBuf,
    /// Decoder to use.
    pub kind: InputKind,
    /// Mean opinion score; `None` when the column was left empty.
    pub mos: Option<f64>,
    /// Geometry for raw YUV; `None` for self-describing kinds.
    pub raw: Option<RawParams>,
}

/// A parsed manifest.
#[derive(Debug, Clone)]
pub struct DatasetManifest {
    /// Rows in file order.
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Entries that carry a subjective score.
    pub fn scored_entries(&self) -> impl Iterator<Item = (&ManifestEntry, f64)> {
        self.entries
            .iter()
            .filter_map(|e| e.mos.map(|mos| (e, mos)))
    }
}

const REQUIRED_COLUMNS: [&str; 4] = ["clip_id", "path", "kind", "mos"];
const GEOMETRY_COLUMNS: [&str; 3] = ["width", "height", "bit_depth"];

/// Load and validate a manifest CSV.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest, ManifestError> {
    let file = std::fs::File::open(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .quoting(false)
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|source| ManifestError::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.len() < REQUIRED_COLUMNS.len() || names[..4] != REQUIRED_COLUMNS {
        return Err(ManifestError::Header(names.join(",")));
    }
    let has_geometry = names.len() >= 7 && names[4..7] == GEOMETRY_COLUMNS;
    if names.len() > 4 && !has_geometry {
        return Err(ManifestError::Header(names.join(",")));
    }

    let base = path.parent().unwrap_or(Path::new(""));
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        let record = record.map_err(|source| ManifestError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let entry = parse_row(&record, row, has_geometry, base)?;
        if !seen.insert(entry.clip_id.clone()) {
            return Err(ManifestError::DuplicateClipId(entry.clip_id));
        }
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(ManifestError::Empty(path.to_path_buf()));
    }
    Ok(DatasetManifest { entries })
}

fn parse_row(
    record: &csv::StringRecord,
    row: usize,
    has_geometry: bool,
    base: &Path,
) -> Result<ManifestEntry, ManifestError> {
    let clip_id = record.get(0).unwrap_or("").to_string();
    let field_err = |message: String| ManifestError::Field {
        row,
        clip_id: clip_id.clone(),
        message,
    };

    if clip_id.is_empty() {
        return Err(field_err("empty clip_id".into()));
    }
    let rel = record
        .get(1)
        .filter(|p| !p.is_empty())
        .ok_or_else(|| field_err("empty path".into()))?;
    let rel = Path::new(rel);
    let path = if rel.is_absolute() {
        rel.to_path_buf()
    } else {
        base.join(rel)
    };

    let kind_field = record.get(2).unwrap_or("");
    let kind = InputKind::parse(kind_field)
        .ok_or_else(|| field_err(format!("unknown kind {kind_field:?}")))?;

    let mos_field = record.get(3).unwrap_or("");
    let mos = if mos_field.is_empty() {
        None
    } else {
        Some(
            mos_field
                .parse::<f64>()
                .ok()
                .filter(|m| m.is_finite())
                .ok_or_else(|| field_err(format!("unparsable mos {mos_field:?}")))?,
        )
    };

    let raw = if kind == InputKind::RawYuv {
        if !has_geometry {
            return Err(field_err(
                "raw_yuv entries need width,height,bit_depth columns".into(),
            ));
        }
        let geometry: Vec<&str> = (4..7).map(|i| record.get(i).unwrap_or("")).collect();
        let parse_dim = |value: &str, name: &str| {
            value
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| field_err(format!("bad {name} {value:?}")))
        };
        let width = parse_dim(geometry[0], "width")?;
        let height = parse_dim(geometry[1], "height")?;
        let bit_depth: u8 = geometry[2]
            .parse()
            .ok()
            .filter(|d| [8, 10].contains(d))
            .ok_or_else(|| field_err(format!("bad bit_depth {:?}", geometry[2])))?;
        Some(RawParams {
            width,
            height,
            bit_depth,
        })
    } else {
        None
    };

    Ok(ManifestEntry {
        clip_id,
        path,
        kind,
        mos,
        raw,
    })
}
