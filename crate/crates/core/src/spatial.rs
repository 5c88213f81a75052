//! Confidence-driven central cropping and grid-fragment splicing.
//!
//! Cropping keeps the central (8 − 2x)/8 band of each dimension, so higher
//! confidence x discards more border content. Fragment splicing then draws
//! one fixed-size patch per grid cell at a seeded random in-cell offset and
//! packs the patches into a small composite frame for cheap scoring.

// f64 math under no_std; redundant (and flagged unused) whenever some
// dependency in the graph links std, as happens for test builds.
#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::{FrameError, LumaFrame};

/// Errors from cropping and fragment sampling.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpatialError {
    /// Confidence outside [0, 1].
    #[error("confidence {0} must lie in [0, 1]")]
    ConfidenceOutOfRange(f64),
    /// Frame smaller than the operation requires.
    #[error("frame {width}x{height} is smaller than the required {min_width}x{min_height}")]
    FrameTooSmall {
        /// Frame width.
        width: usize,
        /// Frame height.
        height: usize,
        /// Minimum acceptable width.
        min_width: usize,
        /// Minimum acceptable height.
        min_height: usize,
    },
    /// Crop rectangle empty or outside the frame.
    #[error("crop rect rows [{row_start},{row_end}) cols [{col_start},{col_end}) invalid for {width}x{height} frame")]
    RectOutOfBounds {
        /// Rectangle start row.
        row_start: usize,
        /// Rectangle end row (exclusive).
        row_end: usize,
        /// Rectangle start column.
        col_start: usize,
        /// Rectangle end column (exclusive).
        col_end: usize,
        /// Frame width.
        width: usize,
        /// Frame height.
        height: usize,
    },
    /// Grid or patch size is zero.
    #[error("grid_size and patch_size must be at least 1")]
    InvalidFragmentConfig,
    /// Frame construction failed (propagated from [`LumaFrame`]).
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// A half-open pixel rectangle: rows `[row_start, row_end)`, columns
/// `[col_start, col_end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CropRect {
    /// First row inside the rectangle.
    pub row_start: usize,
    /// One past the last row.
    pub row_end: usize,
    /// First column inside the rectangle.
    pub col_start: usize,
    /// One past the last column.
    pub col_end: usize,
}

impl CropRect {
    /// Rectangle height in pixels.
    pub fn height(&self) -> usize {
        self.row_end - self.row_start
    }

    /// Rectangle width in pixels.
    pub fn width(&self) -> usize {
        self.col_end - self.col_start
    }
}

/// Central crop keeping rows `[floor(x·h/8), ceil((8−x)·h/8))` and the
/// analogous columns; x = 0 keeps the full frame, x = 1 keeps the central
/// 6/8 of each dimension.
pub fn central_crop_rect(height: usize, width: usize, x: f64) -> Result<CropRect, SpatialError> {
    if !(x.is_finite() && (0.0..=1.0).contains(&x)) {
        return Err(SpatialError::ConfidenceOutOfRange(x));
    }
    if height < 8 || width < 8 {
        return Err(SpatialError::FrameTooSmall {
            width,
            height,
            min_width: 8,
            min_height: 8,
        });
    }
    let start = |n: usize| (x * n as f64 / 8.0) as usize;
    let end = |n: usize| {
        let raw = (8.0 - x) * n as f64 / 8.0;
        let ceil = raw as usize + usize::from(raw.fract() != 0.0);
        ceil.min(n)
    };
    Ok(CropRect {
        row_start: start(height),
        row_end: end(height),
        col_start: start(width),
        col_end: end(width),
    })
}

/// Extracts the sub-image under `rect`; samples are bit-identical to the
/// source region.
pub fn apply_crop(frame: &LumaFrame, rect: &CropRect) -> Result<LumaFrame, SpatialError> {
    let ok = rect.row_start < rect.row_end
        && rect.col_start < rect.col_end
        && rect.row_end <= frame.height()
        && rect.col_end <= frame.width();
    if !ok {
        return Err(SpatialError::RectOutOfBounds {
            row_start: rect.row_start,
            row_end: rect.row_end,
            col_start: rect.col_start,
            col_end: rect.col_end,
            width: frame.width(),
            height: frame.height(),
        });
    }
    let mut samples = Vec::with_capacity(rect.width() * rect.height());
    for row in rect.row_start..rect.row_end {
        samples.extend_from_slice(&frame.row(row)[rect.col_start..rect.col_end]);
    }
    Ok(LumaFrame::new(
        rect.width(),
        rect.height(),
        frame.bit_depth(),
        samples,
    )?)
}

/// Configuration for fragment sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct FragmentConfig {
    /// Cells per axis; the frame is split into `grid_size²` cells.
    pub grid_size: usize,
    /// Side length of the square patch sampled from each cell.
    pub patch_size: usize,
    /// Seed for the per-cell offset RNG.
    pub seed: u64,
}

impl Default for FragmentConfig {
    fn default() -> Self {
        Self {
            grid_size: 7,
            patch_size: 32,
            seed: 0,
        }
    }
}

/// Source offset of one spliced patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FragmentCell {
    /// Grid row of the cell.
    pub cell_row: usize,
    /// Grid column of the cell.
    pub cell_col: usize,
    /// Source row of the patch's top-left pixel.
    pub src_row: usize,
    /// Source column of the patch's top-left pixel.
    pub src_col: usize,
}

/// A spliced composite of per-cell patches plus their source offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct FragmentImage {
    /// The composite frame, `grid_size·patch_size` pixels per side.
    pub frame: LumaFrame,
    /// Source offsets in grid order (row-major).
    pub cells: Vec<FragmentCell>,
}

/// Per-cell RNG: seeding from (seed, row, col) makes each cell's offset
/// independent of iteration order.
fn cell_rng(seed: u64, cell_row: usize, cell_col: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(cell_row as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(cell_col as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Splits `frame` into `grid_size²` cells (integer division; remainder
/// pixels extend the last cell row/column), samples one `patch_size²` patch
/// per cell at a seeded uniform in-cell offset (row drawn before column),
/// and splices the patches in grid order.
pub fn fragment_sample(
    frame: &LumaFrame,
    cfg: &FragmentConfig,
) -> Result<FragmentImage, SpatialError> {
    if cfg.grid_size == 0 || cfg.patch_size == 0 {
        return Err(SpatialError::InvalidFragmentConfig);
    }
    let side = cfg.grid_size * cfg.patch_size;
    if frame.height() < side || frame.width() < side {
        return Err(SpatialError::FrameTooSmall {
            width: frame.width(),
            height: frame.height(),
            min_width: side,
            min_height: side,
        });
    }
    let cell_h = frame.height() / cfg.grid_size;
    let cell_w = frame.width() / cfg.grid_size;
    let mut samples = alloc::vec![0.0; side * side];
    let mut cells = Vec::with_capacity(cfg.grid_size * cfg.grid_size);
    for cell_row in 0..cfg.grid_size {
        for cell_col in 0..cfg.grid_size {
            let base_row = cell_row * cell_h;
            let base_col = cell_col * cell_w;
            let extent_h = if cell_row + 1 == cfg.grid_size {
                frame.height() - base_row
            } else {
                cell_h
            };
            let extent_w = if cell_col + 1 == cfg.grid_size {
                frame.width() - base_col
            } else {
                cell_w
            };
            let mut rng = cell_rng(cfg.seed, cell_row, cell_col);
            let src_row = base_row + rng.gen_range(0..=extent_h - cfg.patch_size);
            let src_col = base_col + rng.gen_range(0..=extent_w - cfg.patch_size);
            for i in 0..cfg.patch_size {
                let src = &frame.row(src_row + i)[src_col..src_col + cfg.patch_size];
                let out_row = cell_row * cfg.patch_size + i;
                let out_col = cell_col * cfg.patch_size;
                samples[out_row * side + out_col..out_row * side + out_col + cfg.patch_size]
                    .copy_from_slice(src);
            }
            cells.push(FragmentCell {
                cell_row,
                cell_col,
                src_row,
                src_col,
            });
        }
    }
    Ok(FragmentImage {
        frame: LumaFrame::new(side, side, frame.bit_depth(), samples)?,
        cells,
    })
}
