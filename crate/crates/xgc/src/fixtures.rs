//! Synthetic corpora: deterministic procedural clips for demos, calibration
//! walkthroughs, and end-to-end verification, plus writers that lay them out
//! on disk as Y4M files with a dataset manifest.

use std::path::{Path, PathBuf};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xgc_core::brisque::{SvrKernel, SvrModel, FEATURE_COUNT};
use xgc_core::spatial::central_crop_rect;
use xgc_core::{LumaFrame, MemoryClip};

use crate::io::{write_y4m, ChromaLayout, MediaError};

/// Frames per ablation clip.
pub const ABLATION_FRAME_COUNT: usize = 40;
/// Ablation clip width; together with the height this puts the resolution
/// term at exactly 0.5, so classification yields confidence x = 0.25.
pub const ABLATION_WIDTH: usize = 640;
/// Ablation clip height.
pub const ABLATION_HEIGHT: usize = 360;
/// Confidence the ablation geometry produces: α · min(unevenness, 0.5).
pub const ABLATION_CONFIDENCE: f64 = 0.25;
/// Frames carrying score-correlated noise; later frames carry unrelated
/// noise. At 40 frames and budget 10, density sampling at x = 0.25 selects
/// five of these but uniform sampling only four, so ablating the temporal
/// stage dilutes the signal.
pub const ABLATION_SIGNAL_FRAMES: usize = 18;

/// Fixture generation failure.
#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    /// Clip or manifest could not be written.
    #[error(transparent)]
    Media(#[from] MediaError),
    /// Manifest write failed.
    #[error("writing {path}: {source}")]
    Io {
        /// Destination.
        path: PathBuf,
        /// OS-level error.
        source: std::io::Error,
    },
}

/// A full-frame noise clip: every sample drawn uniformly from [0,1]. Used
/// for latency measurement and as generic hardware-limited content.
pub fn noise_clip(width: usize, height: usize, frames: usize, seed: u64) -> MemoryClip {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bytes = vec![0u8; width * height];
    let frames: Vec<_> = (0..frames)
        .map(|_| {
            rng.fill_bytes(&mut bytes);
            let samples = bytes.iter().map(|&b| f64::from(b) / 255.0).collect();
            LumaFrame::new(width, height, 8, samples).expect("noise samples lie in [0,1]")
        })
        .collect();
    MemoryClip::new(frames).expect("noise clip is non-empty and uniform")
}

/// A low-resolution, unevenly lit clip: diagonal luminance gradient plus
/// noise at 320×180, three frames. Its resolution term is 0.25, so the
/// hardware score stays well below saturation.
pub fn classifier_lowres_clip(seed: u64) -> MemoryClip {
    let (width, height) = (320usize, 180usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bytes = vec![0u8; width * height];
    let frames: Vec<_> = (0..3)
        .map(|_| {
            rng.fill_bytes(&mut bytes);
            LumaFrame::from_fn(width, height, 8, |r, c| {
                let gradient =
                    0.15 + 0.6 * (r as f64 / height as f64 + c as f64 / width as f64) / 2.0;
                let noise = (2.0 * f64::from(bytes[r * width + c]) / 255.0 - 1.0) * 0.1;
                (gradient + noise).clamp(0.0, 1.0)
            })
            .expect("gradient samples lie in [0,1]")
        })
        .collect();
    MemoryClip::new(frames).expect("three uniform frames")
}

/// A high-resolution, perfectly even clip: constant luminance, three frames.
/// Constant frames make the unevenness term exactly 1 and any geometry at or
/// above the reference resolution saturates the hardware score at 1.
pub fn classifier_highres_clip(width: usize, height: usize) -> MemoryClip {
    let frames: Vec<_> = (0..3)
        .map(|_| LumaFrame::constant(width, height, 8, 0.5).expect("constant 0.5 is valid"))
        .collect();
    MemoryClip::new(frames).expect("three uniform frames")
}

/// One ablation clip. Noise amplitude inside the central crop region of the
/// first [`ABLATION_SIGNAL_FRAMES`] frames follows `mos`; the border ring
/// (the region a confidence-0.25 crop discards) and the remaining frames
/// carry amplitudes drawn from `seed` with no relation to `mos`. The full
/// pipeline therefore sees almost pure signal, while disabling the spatial
/// or temporal stage admits the distractors.
pub fn ablation_clip(seed: u64, mos: f64) -> Vec<LumaFrame> {
    let (width, height) = (ABLATION_WIDTH, ABLATION_HEIGHT);
    let rect = central_crop_rect(height, width, ABLATION_CONFIDENCE)
        .expect("fixture geometry is valid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring_amplitude = rng.gen_range(0.10..0.30);
    let back_amplitude = rng.gen_range(0.04..0.20);
    let signal_amplitude = 0.04 * mos;

    let mut bytes = vec![0u8; width * height];
    (0..ABLATION_FRAME_COUNT)
        .map(|frame| {
            let interior = if frame < ABLATION_SIGNAL_FRAMES {
                signal_amplitude
            } else {
                back_amplitude
            };
            rng.fill_bytes(&mut bytes);
            LumaFrame::from_fn(width, height, 8, |r, c| {
                let inside = (rect.row_start..rect.row_end).contains(&r)
                    && (rect.col_start..rect.col_end).contains(&c);
                let amplitude = if inside { interior } else { ring_amplitude };
                0.5 + amplitude * (2.0 * f64::from(bytes[r * width + c]) / 255.0 - 1.0)
            })
            .expect("amplitudes keep samples in [0.2, 0.8]")
        })
        .collect()
}

/// A deterministic linear model over the feature vector, suitable for demos
/// and latency measurements: positive weight on the variance features, which
/// grow with distortion.
pub fn fixture_model() -> SvrModel {
    let mut weights = vec![0.0; FEATURE_COUNT];
    for scale in [0usize, 18] {
        weights[scale] = -4.0;
        weights[scale + 1] = 8.0;
        for orientation in 0..4 {
            weights[scale + 2 + 4 * orientation] = 1.0;
        }
    }
    SvrModel {
        kernel: SvrKernel::Linear {
            weights,
            bias: 35.0,
        },
        feature_min: vec![-2.0; FEATURE_COUNT],
        feature_max: vec![12.0; FEATURE_COUNT],
    }
}

fn clip_frames(clip: &MemoryClip) -> Vec<LumaFrame> {
    clip.frames().to_vec()
}

fn write_manifest(path: &Path, rows: &[(String, String, f64)]) -> Result<(), FixtureError> {
    let mut text = String::from("clip_id,path,kind,mos\n");
    for (clip_id, file, mos) in rows {
        text.push_str(&format!("{clip_id},{file},y4m,{mos}\n"));
    }
    crate::write_atomic(path, text.as_bytes()).map_err(|source| FixtureError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write a classifier demonstration corpus: `clips_per_side` low-resolution
/// uneven clips and as many high-resolution even ones (at 1280×720, the
/// reference geometry), plus a manifest. Returns the manifest path.
pub fn write_classifier_corpus(
    dir: &Path,
    clips_per_side: usize,
    seed: u64,
) -> Result<PathBuf, FixtureError> {
    let mut rows = Vec::new();
    for i in 0..clips_per_side {
        let clip_id = format!("lowres_{i:02}");
        let file = format!("{clip_id}.y4m");
        let clip = classifier_lowres_clip(seed.wrapping_add(i as u64));
        write_y4m(&dir.join(&file), &clip_frames(&clip), None, ChromaLayout::C420)?;
        rows.push((clip_id, file, 2.0));
    }
    for i in 0..clips_per_side {
        let clip_id = format!("highres_{i:02}");
        let file = format!("{clip_id}.y4m");
        let clip = classifier_highres_clip(1280, 720);
        write_y4m(&dir.join(&file), &clip_frames(&clip), None, ChromaLayout::C420)?;
        rows.push((clip_id, file, 4.0));
    }
    let manifest = dir.join("manifest.csv");
    write_manifest(&manifest, &rows)?;
    Ok(manifest)
}

/// Write an ablation corpus of `n_clips` clips whose subjective scores span
/// [1, 5], with score-correlated noise placed where only the full pipeline
/// isolates it. Returns the manifest path.
pub fn write_ablation_corpus(
    dir: &Path,
    n_clips: usize,
    seed: u64,
) -> Result<PathBuf, FixtureError> {
    let mut rows = Vec::new();
    for i in 0..n_clips {
        let clip_id = format!("clip_{i:02}");
        let file = format!("{clip_id}.y4m");
        let mos = if n_clips > 1 {
            1.0 + 4.0 * i as f64 / (n_clips - 1) as f64
        } else {
            3.0
        };
        let frames = ablation_clip(seed.wrapping_add(i as u64), mos);
        write_y4m(&dir.join(&file), &frames, None, ChromaLayout::C420)?;
        rows.push((clip_id, file, mos));
    }
    let manifest = dir.join("manifest.csv");
    write_manifest(&manifest, &rows)?;
    Ok(manifest)
}
