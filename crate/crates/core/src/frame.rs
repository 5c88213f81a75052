//! Luminance frames and frame-indexed clip access.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::vec::Vec;

/// Errors from frame construction and clip access.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    /// Width or height is zero.
    #[error("frame dimensions {width}x{height} must be nonzero")]
    EmptyDimensions {
        /// Requested width in pixels.
        width: usize,
        /// Requested height in pixels.
        height: usize,
    },
    /// Bit depth other than 8 or 10.
    #[error("bit depth {0} unsupported (expected 8 or 10)")]
    BitDepth(u8),
    /// Sample buffer does not match width × height.
    #[error("expected {expected} samples for the frame geometry, got {actual}")]
    SampleCount {
        /// width × height.
        expected: usize,
        /// Length of the provided buffer.
        actual: usize,
    },
    /// A sample is outside [0,1] or not finite.
    #[error("sample {index} is {value}, outside [0,1]")]
    SampleRange {
        /// Flat index of the offending sample.
        index: usize,
        /// The offending value.
        value: f64,
    },
    /// Frame index past the end of the clip.
    #[error("frame index {index} out of range for clip of {count} frames")]
    IndexOutOfRange {
        /// Requested index.
        index: usize,
        /// Clip length.
        count: usize,
    },
    /// A clip must contain at least one frame.
    #[error("clip has no frames")]
    EmptyClip,
    /// Frames of one clip must share width/height/bit depth.
    #[error("frame {index} geometry differs from the clip's first frame")]
    MixedGeometry {
        /// Index of the mismatched frame.
        index: usize,
    },
    /// A lazy frame source (decoder) failed.
    #[error("frame source failed: {0}")]
    Source(String),
}

/// A single luminance plane, row-major, samples normalized to [0,1]
/// (code values divided by 2^bit_depth − 1).
#[derive(Debug, Clone, PartialEq)]
pub struct LumaFrame {
    width: usize,
    height: usize,
    bit_depth: u8,
    samples: Vec<f64>,
}

impl LumaFrame {
    /// Build a frame from a row-major sample buffer, validating geometry,
    /// bit depth, and the [0,1] sample range.
    pub fn new(
        width: usize,
        height: usize,
        bit_depth: u8,
        samples: Vec<f64>,
    ) -> Result<Self, FrameError> {
        if width == 0 || height == 0 {
            return Err(FrameError::EmptyDimensions { width, height });
        }
        if bit_depth != 8 && bit_depth != 10 {
            return Err(FrameError::BitDepth(bit_depth));
        }
        let expected = width * height;
        if samples.len() != expected {
            return Err(FrameError::SampleCount {
                expected,
                actual: samples.len(),
            });
        }
        for (index, &value) in samples.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(FrameError::SampleRange { index, value });
            }
        }
        Ok(Self {
            width,
            height,
            bit_depth,
            samples,
        })
    }

    /// Build a frame by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        bit_depth: u8,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, FrameError> {
        let mut samples = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                samples.push(f(row, col));
            }
        }
        Self::new(width, height, bit_depth, samples)
    }

    /// A frame with every sample equal to `value`.
    pub fn constant(
        width: usize,
        height: usize,
        bit_depth: u8,
        value: f64,
    ) -> Result<Self, FrameError> {
        Self::new(width, height, bit_depth, alloc::vec![value; width * height])
    }

    /// Width in pixels.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Height in pixels.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Source bit depth (8 or 10). Samples are already normalized.
    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    /// Row-major samples.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// One row of samples.
    pub fn row(&self, row: usize) -> &[f64] {
        &self.samples[row * self.width..(row + 1) * self.width]
    }

    /// Sample at (row, col).
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.samples[row * self.width + col]
    }
}

/// Frame-indexed access to a video clip.
///
/// Implementations may decode lazily; the contract is immutable geometry,
/// `frame_count ≥ 1`, identical geometry for every frame, and random access
/// by index. Implementations must be shareable across threads.
pub trait Clip: Sync {
    /// Number of frames.
    fn frame_count(&self) -> usize;
    /// Frame width in pixels.
    fn width(&self) -> usize;
    /// Frame height in pixels.
    fn height(&self) -> usize;
    /// Source bit depth (8 or 10).
    fn bit_depth(&self) -> u8;
    /// Fetch (and decode, if lazy) frame `index`.
    fn frame(&self, index: usize) -> Result<Cow<'_, LumaFrame>, FrameError>;
    /// Declared frame rate, when the container carries one.
    fn fps(&self) -> Option<f64> {
        None
    }
}

/// A fully materialized clip.
#[derive(Debug, Clone)]
pub struct MemoryClip {
    frames: Vec<LumaFrame>,
    fps: Option<f64>,
}

impl MemoryClip {
    /// Build a clip from owned frames, validating that all frames share
    /// one geometry and that at least one frame is present.
    pub fn new(frames: Vec<LumaFrame>) -> Result<Self, FrameError> {
        let first = frames.first().ok_or(FrameError::EmptyClip)?;
        let (w, h, d) = (first.width(), first.height(), first.bit_depth());
        for (index, f) in frames.iter().enumerate().skip(1) {
            if f.width() != w || f.height() != h || f.bit_depth() != d {
                return Err(FrameError::MixedGeometry { index });
            }
        }
        Ok(Self { frames, fps: None })
    }

    /// Same as [`MemoryClip::new`] with a declared frame rate.
    pub fn with_fps(frames: Vec<LumaFrame>, fps: f64) -> Result<Self, FrameError> {
        let mut clip = Self::new(frames)?;
        clip.fps = Some(fps);
        Ok(clip)
    }

    /// Borrow the underlying frames.
    pub fn frames(&self) -> &[LumaFrame] {
        &self.frames
    }
}

impl Clip for MemoryClip {
    fn frame_count(&self) -> usize {
        self.frames.len()
    }

    fn width(&self) -> usize {
        self.frames[0].width()
    }

    fn height(&self) -> usize {
        self.frames[0].height()
    }

    fn bit_depth(&self) -> u8 {
        self.frames[0].bit_depth()
    }

    fn frame(&self, index: usize) -> Result<Cow<'_, LumaFrame>, FrameError> {
        self.frames
            .get(index)
            .map(Cow::Borrowed)
            .ok_or(FrameError::IndexOutOfRange {
                index,
                count: self.frames.len(),
            })
    }

    fn fps(&self) -> Option<f64> {
        self.fps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_validates_geometry_and_range() {
        assert!(LumaFrame::new(2, 2, 8, vec![0.0, 0.5, 1.0, 0.25]).is_ok());
        assert!(matches!(
            LumaFrame::new(0, 2, 8, vec![]),
            Err(FrameError::EmptyDimensions { .. })
        ));
        assert!(matches!(
            LumaFrame::new(2, 2, 12, vec![0.0; 4]),
            Err(FrameError::BitDepth(12))
        ));
        assert!(matches!(
            LumaFrame::new(2, 2, 8, vec![0.0; 3]),
            Err(FrameError::SampleCount { expected: 4, actual: 3 })
        ));
        assert!(matches!(
            LumaFrame::new(2, 2, 8, vec![0.0, 0.5, 1.5, 0.0]),
            Err(FrameError::SampleRange { index: 2, .. })
        ));
        assert!(matches!(
            LumaFrame::new(2, 2, 8, vec![0.0, f64::NAN, 0.0, 0.0]),
            Err(FrameError::SampleRange { index: 1, .. })
        ));
    }

    #[test]
    fn row_and_get_agree() {
        let f = LumaFrame::from_fn(3, 2, 8, |r, c| (r * 3 + c) as f64 / 10.0).unwrap();
        assert_eq!(f.row(1), &[0.3, 0.4, 0.5]);
        assert_eq!(f.get(1, 2), 0.5);
    }

    #[test]
    fn memory_clip_rejects_mixed_geometry() {
        let a = LumaFrame::constant(4, 4, 8, 0.5).unwrap();
        let b = LumaFrame::constant(4, 5, 8, 0.5).unwrap();
        assert!(matches!(
            MemoryClip::new(vec![a.clone(), b]),
            Err(FrameError::MixedGeometry { index: 1 })
        ));
        assert!(matches!(MemoryClip::new(vec![]), Err(FrameError::EmptyClip)));
        let clip = MemoryClip::new(vec![a.clone(), a]).unwrap();
        assert_eq!(clip.frame_count(), 2);
        assert!(clip.frame(2).is_err());
        assert_eq!(clip.frame(1).unwrap().get(0, 0), 0.5);
    }
}
