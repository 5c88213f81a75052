//! Decoders and dataset plumbing: Y4M and raw planar YUV readers, image
//! sequences, and the CSV dataset manifest.
//!
//! All decoders emit the luminance plane only, normalized so that code value
//! `c` at bit depth `d` becomes `c / (2^d − 1)`. Chroma planes are parsed for
//! their byte extent and skipped.

use std::borrow::Cow;
use std::fmt;
use std::path::{Path, PathBuf};

use xgc_core::{Clip, FrameError, LumaFrame};

pub mod manifest;
pub mod raw;
pub mod seq;
pub mod y4m;

pub use manifest::{
    load_manifest, DatasetManifest, InputKind, ManifestEntry, ManifestError, RawParams,
};
pub use raw::read_raw_yuv;
pub use seq::read_image_sequence;
pub use y4m::{read_y4m, write_y4m};

/// Smallest frame edge any decoder will emit; smaller media is rejected at
/// open time so downstream stages can rely on the bound.
pub const MIN_FRAME_EDGE: usize = 32;

/// Failure while opening or decoding media.
#[derive(Debug, thiserror::Error)]
pub enum MediaError {
    /// Underlying file read failed.
    #[error("reading {path}: {source}")]
    Io {
        /// File being read.
        path: PathBuf,
        /// OS-level error.
        source: std::io::Error,
    },
    /// Stream header could not be parsed.
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    /// Header parsed but describes media this reader does not handle.
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    /// Stream ended inside a frame payload.
    #[error("frame {frame} payload is truncated")]
    TruncatedPayload {
        /// Index of the incomplete frame.
        frame: usize,
    },
    /// Raw file size is not a positive multiple of the frame size.
    #[error("file size {file_size} is not a positive multiple of the {frame_bytes}-byte frame")]
    SizeMismatch {
        /// Observed file length in bytes.
        file_size: u64,
        /// Bytes per frame implied by the supplied geometry.
        frame_bytes: u64,
    },
    /// Frames of an image sequence disagree on geometry.
    #[error("image {path} is {width}x{height}, expected {expected_width}x{expected_height}")]
    MixedDimensions {
        /// Offending image.
        path: PathBuf,
        /// Its width.
        width: usize,
        /// Its height.
        height: usize,
        /// Width of the first image.
        expected_width: usize,
        /// Height of the first image.
        expected_height: usize,
    },
    /// No frames were found.
    #[error("clip at {0} contains no frames")]
    EmptyClip(PathBuf),
    /// Decoded frames are below the supported minimum size.
    #[error("frame is {width}x{height}; both edges must be at least {MIN_FRAME_EDGE}")]
    FrameTooSmall {
        /// Decoded width.
        width: usize,
        /// Decoded height.
        height: usize,
    },
    /// Image file failed to decode.
    #[error("decoding image {path}: {message}")]
    ImageDecode {
        /// Offending image.
        path: PathBuf,
        /// Decoder diagnostic.
        message: String,
    },
    /// Frame construction failed after decoding.
    #[error(transparent)]
    Frame(#[from] FrameError),
}

impl MediaError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        MediaError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Chroma subsampling of a planar YUV stream. Only the plane sizes matter
/// here; chroma samples are never decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChromaLayout {
    /// 4:2:0 — both chroma planes are (w/2)×(h/2).
    C420,
    /// 4:2:2 — both chroma planes are (w/2)×h.
    C422,
    /// 4:4:4 — chroma planes match the luma plane.
    C444,
}

impl ChromaLayout {
    /// Total chroma samples (both planes) per frame.
    pub fn chroma_samples(self, width: usize, height: usize) -> usize {
        match self {
            ChromaLayout::C420 => 2 * (width / 2) * (height / 2),
            ChromaLayout::C422 => 2 * (width / 2) * height,
            ChromaLayout::C444 => 2 * width * height,
        }
    }

    /// Dimensions the layout can represent without fractional chroma planes.
    fn check_dimensions(self, width: usize, height: usize) -> Result<(), MediaError> {
        let ok = match self {
            ChromaLayout::C420 => width % 2 == 0 && height % 2 == 0,
            ChromaLayout::C422 => width % 2 == 0,
            ChromaLayout::C444 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(MediaError::UnsupportedFormat(format!(
                "{width}x{height} cannot carry {self} chroma (odd dimension)"
            )))
        }
    }
}

impl fmt::Display for ChromaLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            ChromaLayout::C420 => "4:2:0",
            ChromaLayout::C422 => "4:2:2",
            ChromaLayout::C444 => "4:4:4",
        };
        f.write_str(tag)
    }
}

/// A planar YUV clip held as raw bytes and decoded to luma lazily, one frame
/// per request. Backs both the Y4M and headerless raw readers.
pub struct PlanarClip {
    data: Vec<u8>,
    /// Byte offset of each frame's luma plane inside `data`.
    luma_offsets: Vec<usize>,
    width: usize,
    height: usize,
    bit_depth: u8,
    fps: Option<f64>,
}

impl PlanarClip {
    /// Assemble a clip from pre-indexed plane offsets. Validates geometry,
    /// minimum frame size, and that every luma plane lies inside `data`.
    pub(crate) fn new(
        data: Vec<u8>,
        luma_offsets: Vec<usize>,
        width: usize,
        height: usize,
        bit_depth: u8,
        fps: Option<f64>,
        source: &Path,
    ) -> Result<Self, MediaError> {
        if luma_offsets.is_empty() {
            return Err(MediaError::EmptyClip(source.to_path_buf()));
        }
        if width < MIN_FRAME_EDGE || height < MIN_FRAME_EDGE {
            return Err(MediaError::FrameTooSmall { width, height });
        }
        let bytes = luma_plane_bytes(width, height, bit_depth);
        for (frame, &offset) in luma_offsets.iter().enumerate() {
            if offset.checked_add(bytes).map_or(true, |end| end > data.len()) {
                return Err(MediaError::TruncatedPayload { frame });
            }
        }
        Ok(Self {
            data,
            luma_offsets,
            width,
            height,
            bit_depth,
            fps,
        })
    }

    fn decode_luma(&self, index: usize) -> Result<LumaFrame, FrameError> {
        let offset = self.luma_offsets[index];
        let bytes = luma_plane_bytes(self.width, self.height, self.bit_depth);
        let plane = &self.data[offset..offset + bytes];
        let samples = decode_plane(plane, self.bit_depth);
        LumaFrame::new(self.width, self.height, self.bit_depth, samples)
    }
}

impl Clip for PlanarClip {
    fn frame_count(&self) -> usize {
        self.luma_offsets.len()
    }

    fn width(&self) -> usize {
        self.width
    }

    fn height(&self) -> usize {
        self.height
    }

    fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    fn frame(&self, index: usize) -> Result<Cow<'_, LumaFrame>, FrameError> {
        if index >= self.luma_offsets.len() {
            return Err(FrameError::IndexOutOfRange {
                index,
                count: self.luma_offsets.len(),
            });
        }
        self.decode_luma(index).map(Cow::Owned)
    }

    fn fps(&self) -> Option<f64> {
        self.fps
    }
}

/// Bytes occupied by one luma plane.
pub(crate) fn luma_plane_bytes(width: usize, height: usize, bit_depth: u8) -> usize {
    width * height * bytes_per_sample(bit_depth)
}

/// Storage width of one sample: 1 byte through 8 bits, 2 bytes above.
pub(crate) fn bytes_per_sample(bit_depth: u8) -> usize {
    if bit_depth > 8 {
        2
    } else {
        1
    }
}

/// Normalize a stored plane to [0,1]. Samples above 8 bits are two bytes,
/// little endian; codes past the nominal maximum clamp to 1.0 so malformed
/// payloads cannot violate the sample-range invariant.
fn decode_plane(plane: &[u8], bit_depth: u8) -> Vec<f64> {
    let max_code = f64::from((1u32 << bit_depth) - 1);
    if bytes_per_sample(bit_depth) == 1 {
        plane.iter().map(|&b| f64::from(b) / max_code).collect()
    } else {
        plane
            .chunks_exact(2)
            .map(|pair| {
                let code = f64::from(u16::from_le_bytes([pair[0], pair[1]]));
                (code / max_code).min(1.0)
            })
            .collect()
    }
}

/// Read a whole file, wrapping IO failures with the offending path.
pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>, MediaError> {
    std::fs::read(path).map_err(|source| MediaError::io(path, source))
}

/// Open the media a manifest entry points at, dispatching on its kind.
/// `scores_file` rows carry no decodable media and fail here, which callers
/// treat as a per-clip decode failure.
pub fn open_clip(entry: &ManifestEntry) -> Result<Box<dyn Clip>, MediaError> {
    match entry.kind {
        InputKind::Y4m => Ok(Box::new(read_y4m(&entry.path)?)),
        InputKind::RawYuv => {
            let params = entry.raw.as_ref().ok_or_else(|| {
                MediaError::MalformedHeader(format!(
                    "raw_yuv entry {} lacks width/height/bit_depth",
                    entry.clip_id
                ))
            })?;
            // Headerless raw video via a manifest defaults to 4:2:0 chroma,
            // the only layout the manifest schema can express.
            Ok(Box::new(read_raw_yuv(
                &entry.path,
                params.width,
                params.height,
                params.bit_depth,
                ChromaLayout::C420,
            )?))
        }
        InputKind::ImageSeq => Ok(Box::new(read_image_sequence(&entry.path)?)),
        InputKind::ScoresFile => Err(MediaError::UnsupportedFormat(format!(
            "entry {} is a scores_file and has no decodable media",
            entry.clip_id
        ))),
    }
}

/// Open a standalone input for single-clip commands, inferring the kind from
/// the path: directories are image sequences, `.y4m` files are Y4M streams.
/// Headerless raw video needs explicit geometry, so bare `.yuv` paths are
/// rejected here.
pub fn open_input(path: &Path) -> Result<Box<dyn Clip>, MediaError> {
    if path.is_dir() {
        return Ok(Box::new(read_image_sequence(path)?));
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("y4m") => Ok(Box::new(read_y4m(path)?)),
        other => Err(MediaError::UnsupportedFormat(format!(
            "cannot infer input kind of {} (extension {:?}); use a manifest for raw YUV",
            path.display(),
            other.unwrap_or("none"),
        ))),
    }
}
