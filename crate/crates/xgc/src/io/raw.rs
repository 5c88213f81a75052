//! Headerless planar YUV reader. Geometry comes from the caller; the file
//! must be a whole number of frames at that geometry.

use std::path::Path;

use super::{
    bytes_per_sample, luma_plane_bytes, read_file, ChromaLayout, MediaError, PlanarClip,
};

/// Open a raw planar YUV file: repeated Y-then-chroma frames, no header or
/// separators, two little-endian bytes per sample above 8 bits.
pub fn read_raw_yuv(
    path: &Path,
    width: usize,
    height: usize,
    bit_depth: u8,
    chroma: ChromaLayout,
) -> Result<PlanarClip, MediaError> {
    chroma.check_dimensions(width, height)?;
    let data = read_file(path)?;
    let frame_bytes = luma_plane_bytes(width, height, bit_depth)
        + chroma.chroma_samples(width, height) * bytes_per_sample(bit_depth);
    if frame_bytes == 0 || data.is_empty() || data.len() % frame_bytes != 0 {
        return Err(MediaError::SizeMismatch {
            file_size: data.len() as u64,
            frame_bytes: frame_bytes as u64,
        });
    }
    let luma_offsets = (0..data.len() / frame_bytes)
        .map(|frame| frame * frame_bytes)
        .collect();
    PlanarClip::new(data, luma_offsets, width, height, bit_depth, None, path)
}
