//! Image-sequence reader: a directory of stills becomes a clip, one image
//! per frame, ordered by file name.

use std::path::Path;

use xgc_core::{LumaFrame, MemoryClip};

use super::{MediaError, MIN_FRAME_EDGE};

/// Image extensions considered part of a sequence; anything else in the
/// directory (manifests, notes) is ignored.
const IMAGE_EXTENSIONS: [&str; 6] = ["png", "pgm", "ppm", "pnm", "jpg", "jpeg"];

/// Rec. 709 luma weights applied to normalized linear-scale channels.
const LUMA_WEIGHTS: [f64; 3] = [0.2126, 0.7152, 0.0722];

/// Read every image in `dir` (lexicographic file-name order) as one clip.
/// Color images reduce to luma via Rec. 709 weights; grayscale images pass
/// through. All images must share dimensions.
pub fn read_image_sequence(dir: &Path) -> Result<MemoryClip, MediaError> {
    let mut paths = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|source| MediaError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for entry in entries {
        let entry = entry.map_err(|source| MediaError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .map_or(false, |e| {
                IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str())
            });
        if is_image && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if paths.is_empty() {
        return Err(MediaError::EmptyClip(dir.to_path_buf()));
    }

    let mut frames = Vec::with_capacity(paths.len());
    let mut expected: Option<(usize, usize)> = None;
    for path in &paths {
        let image = image::open(path).map_err(|e| MediaError::ImageDecode {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let frame = luma_frame_of(&image)?;
        match expected {
            None => {
                if frame.width() < MIN_FRAME_EDGE || frame.height() < MIN_FRAME_EDGE {
                    return Err(MediaError::FrameTooSmall {
                        width: frame.width(),
                        height: frame.height(),
                    });
                }
                expected = Some((frame.width(), frame.height()));
            }
            Some((w, h)) => {
                if (frame.width(), frame.height()) != (w, h) {
                    return Err(MediaError::MixedDimensions {
                        path: path.clone(),
                        width: frame.width(),
                        height: frame.height(),
                        expected_width: w,
                        expected_height: h,
                    });
                }
            }
        }
        frames.push(frame);
    }
    MemoryClip::new(frames).map_err(MediaError::Frame)
}

/// Reduce one decoded image to a normalized luma plane. Works in 16-bit RGB
/// so 8- and 16-bit sources normalize identically; the emitted frames are
/// tagged 8-bit, matching the precision class of typical stills.
fn luma_frame_of(image: &image::DynamicImage) -> Result<LumaFrame, MediaError> {
    let rgb = image.to_rgb16();
    let (width, height) = (rgb.width() as usize, rgb.height() as usize);
    let mut samples = Vec::with_capacity(width * height);
    for pixel in rgb.pixels() {
        let [r, g, b] = pixel.0.map(|c| f64::from(c) / f64::from(u16::MAX));
        let luma = LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b;
        samples.push(luma.clamp(0.0, 1.0));
    }
    LumaFrame::new(width, height, 8, samples).map_err(MediaError::Frame)
}
