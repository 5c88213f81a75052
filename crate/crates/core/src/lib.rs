//! Core algorithms of the XGC video quality pipeline.
//!
//! Everything in this crate is pure computation over in-memory luminance
//! buffers: content-tier classification (UGC/PGC/OGC), confidence-driven
//! central cropping and grid-fragment splicing, non-uniform temporal frame
//! selection, natural-scene-statistics feature extraction with SVR scoring,
//! rank/linear correlation statistics, and segment-weight calibration.
//!
//! The crate is `no_std` (alloc required); decoding, file formats, timing,
//! and the CLI live in the companion `xgc` crate.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod brisque;
pub mod calibrate;
pub mod classify;
pub mod frame;
mod linalg;
pub mod spatial;
pub mod stats;
pub mod temporal;

pub use frame::{Clip, FrameError, LumaFrame, MemoryClip};

use alloc::string::String;

/// A frame-level no-reference quality predictor on the 0–100 distortion
/// scale (higher = more distorted).
///
/// The classification and calibration stages depend on this interface rather
/// than on a concrete model; [`brisque::SvrModel`] implements it, and tests
/// substitute stubs.
pub trait QualityPredictor: Sync {
    /// Predict the distortion score of a single frame.
    fn score_frame(&self, frame: &LumaFrame) -> Result<f64, PredictorError>;
}

/// Failure reported by a [`QualityPredictor`] implementation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("quality predictor failed: {0}")]
pub struct PredictorError(pub String);
