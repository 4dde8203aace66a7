//! Batch toolkit for rendering novel views from pre-trained 3D Gaussian
//! splat scenes, producing COLMAP-compatible augmented datasets, and
//! scoring image sets with SSIM, PSNR, and USAF-1951 resolution readings.
//!
//! The pipeline is organized around a handful of small modules:
//!
//! - [`splat`] loads trained splat scenes from PLY files.
//! - [`colmap`] reads and writes COLMAP camera/image models (text and binary).
//! - [`rig`] generates novel camera poses on rings and converts between
//!   graphics and vision camera conventions.
//! - [`render`] projects Gaussians to screen space and alpha-composites them
//!   front to back.
//! - [`metrics`] computes SSIM/PSNR reports and USAF chart readings.
//! - [`dataset`] merges ground-truth and novel-view models into augmented
//!   datasets and handles PNG I/O.

// Negated comparisons like `!(v > 0.0)` are deliberate: they reject NaN
// along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod colmap;
pub mod dataset;
pub mod error;
pub mod math;
pub mod metrics;
pub mod render;
pub mod rig;
pub mod sh;
pub mod splat;
pub mod synthetic;

pub use error::{Error, Result};
pub use math::{quat_to_rotmat, rotmat_to_quat, Quat, Sym2};

// Vector/matrix types in the public API come from glam; re-exported so
// downstream crates stay on the same version.
pub use glam;
