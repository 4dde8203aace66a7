//! Browser bindings for the splat renderer: an orbit camera over a scene,
//! a pose-offset quality probe, and the USAF chart formula.

// Exported render functions take one scalar per UI control.
#![allow(clippy::too_many_arguments)]

use splatkit::glam::DVec3;
use wasm_bindgen::prelude::*;

use splatkit::colmap::{camera_center, CameraIntrinsics, CameraModel, Pose};
use splatkit::metrics::{psnr, ssim, Psnr, SsimParams, UsafReading};
use splatkit::render::{render_view, ImageBuffer, RenderSettings};
use splatkit::rig::look_at_pose;
use splatkit::splat::{load_splat_ply_bytes, SplatCloud};
use splatkit::synthetic::demo_scene;

fn js_err(e: splatkit::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn orbit_pose(azimuth_deg: f64, elevation_deg: f64, radius: f64) -> Result<Pose, JsValue> {
    let azimuth = azimuth_deg.to_radians();
    // Stay clear of the straight-down pole where the up hint degenerates.
    let elevation = elevation_deg.clamp(-85.0, 85.0).to_radians();
    let eye = DVec3::new(
        radius * elevation.cos() * azimuth.cos(),
        radius * elevation.cos() * azimuth.sin(),
        radius * elevation.sin(),
    );
    look_at_pose(eye, DVec3::ZERO, DVec3::Z).map_err(js_err)
}

fn intrinsics(width: u32, height: u32, focal: f64) -> Result<CameraIntrinsics, JsValue> {
    CameraIntrinsics::new(
        1,
        CameraModel::SimplePinhole,
        width,
        height,
        focal,
        focal,
        width as f64 / 2.0,
        height as f64 / 2.0,
    )
    .map_err(js_err)
}

fn rgba_bytes(img: &ImageBuffer) -> Vec<u8> {
    let mut out = Vec::with_capacity(img.pixels.len() / 3 * 4);
    for px in img.pixels.chunks_exact(3) {
        for c in px {
            out.push((c.clamp(0.0, 1.0) * 255.0).round() as u8);
        }
        out.push(255);
    }
    out
}

/// SSIM/PSNR of a view pair; `psnr_db` is `Infinity` for identical images.
#[wasm_bindgen]
pub struct QualityScores {
    ssim: f64,
    psnr_db: f64,
    offset_distance: f64,
}

#[wasm_bindgen]
impl QualityScores {
    #[wasm_bindgen(getter)]
    pub fn ssim(&self) -> f64 {
        self.ssim
    }

    #[wasm_bindgen(getter)]
    pub fn psnr_db(&self) -> f64 {
        self.psnr_db
    }

    #[wasm_bindgen(getter)]
    pub fn offset_distance(&self) -> f64 {
        self.offset_distance
    }
}

/// A splat scene held on the wasm side.
#[wasm_bindgen]
pub struct Scene {
    cloud: SplatCloud,
}

#[wasm_bindgen]
impl Scene {
    /// Procedural demo scene, deterministic in `seed`.
    #[wasm_bindgen(constructor)]
    pub fn synthetic(count: usize, sh_degree: usize, seed: u32) -> Result<Scene, JsValue> {
        if count == 0 || count > 200_000 {
            return Err(JsValue::from_str("count must be in 1..=200000"));
        }
        if sh_degree > 3 {
            return Err(JsValue::from_str("sh degree must be 0..=3"));
        }
        Ok(Scene {
            cloud: demo_scene(count, sh_degree, seed as u64),
        })
    }

    /// Loads a trained splat scene from PLY bytes (binary little-endian).
    pub fn from_ply(bytes: &[u8]) -> Result<Scene, JsValue> {
        let cloud = load_splat_ply_bytes(bytes).map_err(js_err)?;
        Ok(Scene { cloud })
    }

    #[wasm_bindgen(getter)]
    pub fn gaussian_count(&self) -> usize {
        self.cloud.len()
    }

    #[wasm_bindgen(getter)]
    pub fn sh_degree(&self) -> usize {
        self.cloud.sh_degree
    }

    /// Renders an orbit view around the origin and returns RGBA bytes for
    /// `ImageData`.
    pub fn render_orbit(
        &self,
        azimuth_deg: f64,
        elevation_deg: f64,
        radius: f64,
        width: u32,
        height: u32,
        focal: f64,
        background: f64,
    ) -> Result<Vec<u8>, JsValue> {
        let pose = orbit_pose(azimuth_deg, elevation_deg, radius)?;
        let k = intrinsics(width, height, focal)?;
        let settings = RenderSettings {
            background: [background, background, background],
            ..Default::default()
        };
        let img = render_view(&self.cloud, &pose, &k, &settings).map_err(js_err)?;
        Ok(rgba_bytes(&img))
    }

    /// Renders the orbit view and a second view displaced sideways along
    /// the camera's x axis, and scores the pair. This makes the quality
    /// falloff of off-pose rendering directly measurable.
    pub fn probe_offset(
        &self,
        azimuth_deg: f64,
        elevation_deg: f64,
        radius: f64,
        offset: f64,
        width: u32,
        height: u32,
        focal: f64,
    ) -> Result<QualityScores, JsValue> {
        let pose = orbit_pose(azimuth_deg, elevation_deg, radius)?;
        let k = intrinsics(width, height, focal)?;
        let settings = RenderSettings::default();
        let reference = render_view(&self.cloud, &pose, &k, &settings).map_err(js_err)?;

        // Same orientation, camera center slid along the local x axis.
        let x_axis_world = pose.rotation().transpose() * DVec3::X;
        let new_center = camera_center(&pose) + offset * x_axis_world;
        let t = -(pose.rotation() * new_center);
        let shifted_pose = Pose::new(pose.q, t).map_err(js_err)?;
        let shifted = render_view(&self.cloud, &shifted_pose, &k, &settings).map_err(js_err)?;

        let ssim_score = ssim(&reference, &shifted, &SsimParams::default()).map_err(js_err)?;
        let psnr_score = match psnr(&reference, &shifted, 1.0).map_err(js_err)? {
            Psnr::Db(v) => v,
            Psnr::Infinite => f64::INFINITY,
        };
        Ok(QualityScores {
            ssim: ssim_score,
            psnr_db: psnr_score,
            offset_distance: offset.abs(),
        })
    }

    /// RGBA render of the offset view itself, for side-by-side display.
    pub fn render_offset(
        &self,
        azimuth_deg: f64,
        elevation_deg: f64,
        radius: f64,
        offset: f64,
        width: u32,
        height: u32,
        focal: f64,
        background: f64,
    ) -> Result<Vec<u8>, JsValue> {
        let pose = orbit_pose(azimuth_deg, elevation_deg, radius)?;
        let k = intrinsics(width, height, focal)?;
        let x_axis_world = pose.rotation().transpose() * DVec3::X;
        let new_center = camera_center(&pose) + offset * x_axis_world;
        let t = -(pose.rotation() * new_center);
        let shifted_pose = Pose::new(pose.q, t).map_err(js_err)?;
        let settings = RenderSettings {
            background: [background, background, background],
            ..Default::default()
        };
        let img = render_view(&self.cloud, &shifted_pose, &k, &settings).map_err(js_err)?;
        Ok(rgba_bytes(&img))
    }
}

/// USAF-1951 resolution in lp/mm for a group/element reading.
#[wasm_bindgen]
pub fn usaf_lp_per_mm(group: i32, element: i32) -> Result<f64, JsValue> {
    splatkit::metrics::usaf_lp_per_mm(UsafReading { group, element }).map_err(js_err)
}
