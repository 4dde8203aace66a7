//! Novel camera pose generation and camera-convention conversion.
//!
//! Poses are produced on circular rings around a scene center so every
//! camera keeps the same distance to the subject, plus an offset mode that
//! displaces existing poses sideways along their own image axes.

use std::fs;
use std::path::Path;

use glam::{DMat3, DVec3};

use crate::colmap::{camera_center, CameraIntrinsics, CameraModel, ImageRecord, Pose};
use crate::error::{Error, Result};
use crate::math::rotmat_to_quat;

/// Camera-frame axis conventions.
///
/// `Vision` is the COLMAP frame (+z forward, +y down); `Graphics` is the
/// Blender-style frame (-z forward, +y up). The two differ by the fixed
/// axis flip `F = diag(1, -1, -1)` applied to the camera-to-world rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Vision,
    Graphics,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vision" => Ok(Convention::Vision),
            "graphics" => Ok(Convention::Graphics),
            other => Err(Error::validation(format!(
                "unknown convention `{other}`; expected `vision` or `graphics`"
            ))),
        }
    }
}

/// One ring of cameras at a fixed elevation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    /// Elevation above the rig's equator, in degrees, strictly inside
    /// (-90, 90).
    pub elevation_deg: f64,
    pub count: u32,
}

/// Specification for ring-based pose generation.
#[derive(Debug, Clone, PartialEq)]
pub struct RigSpec {
    pub center: DVec3,
    pub radius: f64,
    pub rings: Vec<Ring>,
    pub intrinsics: CameraIntrinsics,
    pub up_hint: DVec3,
    pub name_prefix: String,
}

impl RigSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::validation("rig radius must be positive"));
        }
        if self.rings.is_empty() {
            return Err(Error::validation("rig needs at least one ring"));
        }
        for (i, ring) in self.rings.iter().enumerate() {
            if ring.count == 0 {
                return Err(Error::validation(format!("ring {i}: count must be >= 1")));
            }
            if ring.elevation_deg.abs() >= 90.0 {
                return Err(Error::validation(format!(
                    "ring {i}: elevation {} must be strictly inside (-90, 90)",
                    ring.elevation_deg
                )));
            }
        }
        if self.up_hint.length() == 0.0 {
            return Err(Error::validation("up hint must be non-zero"));
        }
        Ok(())
    }

    /// Parses a `key = value` rig description.
    ///
    /// Recognized keys: `center = x,y,z`, `radius = r`, repeated
    /// `ring = elevation_deg,count`, intrinsics fields (`width`, `height`,
    /// `fx`, `fy`, `cx`, `cy`), `up = x,y,z`, `prefix = name`. `cx`/`cy`
    /// default to the image center, `up` to +z, `prefix` to `novel`.
    pub fn from_str_spec(text: &str) -> Result<RigSpec> {
        let mut center = DVec3::ZERO;
        let mut radius = None;
        let mut rings = Vec::new();
        let mut width = None;
        let mut height = None;
        let mut fx = None;
        let mut fy = None;
        let mut cx = None;
        let mut cy = None;
        let mut up = DVec3::Z;
        let mut prefix = "novel".to_string();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::format(format!("line {line_no}: expected `key = value`")))?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| -> Result<f64> {
                v.parse()
                    .map_err(|_| Error::format(format!("line {line_no}: bad number `{v}`")))
            };
            let parse_u32 = |v: &str| -> Result<u32> {
                v.parse()
                    .map_err(|_| Error::format(format!("line {line_no}: bad integer `{v}`")))
            };
            match key {
                "center" => center = parse_vec3(value, line_no)?,
                "up" => up = parse_vec3(value, line_no)?,
                "radius" => radius = Some(parse_f64(value)?),
                "ring" => {
                    let (elev, count) = value.split_once(',').ok_or_else(|| {
                        Error::format(format!("line {line_no}: ring takes `elevation_deg,count`"))
                    })?;
                    rings.push(Ring {
                        elevation_deg: parse_f64(elev.trim())?,
                        count: count.trim().parse().map_err(|_| {
                            Error::format(format!("line {line_no}: bad ring count `{count}`"))
                        })?,
                    });
                }
                "width" => width = Some(parse_u32(value)?),
                "height" => height = Some(parse_u32(value)?),
                "fx" => fx = Some(parse_f64(value)?),
                "fy" => fy = Some(parse_f64(value)?),
                "cx" => cx = Some(parse_f64(value)?),
                "cy" => cy = Some(parse_f64(value)?),
                "prefix" => prefix = value.to_string(),
                other => {
                    return Err(Error::format(format!(
                        "line {line_no}: unknown rig key `{other}`"
                    )));
                }
            }
        }

        let radius = radius.ok_or_else(|| Error::format("rig spec is missing `radius`"))?;
        let width = width.ok_or_else(|| Error::format("rig spec is missing `width`"))?;
        let height = height.ok_or_else(|| Error::format("rig spec is missing `height`"))?;
        let fx = fx.ok_or_else(|| Error::format("rig spec is missing `fx`"))?;
        let fy = fy.unwrap_or(fx);
        let cx = cx.unwrap_or(width as f64 / 2.0);
        let cy = cy.unwrap_or(height as f64 / 2.0);
        let model = if fx == fy {
            CameraModel::SimplePinhole
        } else {
            CameraModel::Pinhole
        };
        let intrinsics = CameraIntrinsics::new(1, model, width, height, fx, fy, cx, cy)?;

        let spec = RigSpec {
            center,
            radius,
            rings,
            intrinsics,
            up_hint: up,
            name_prefix: prefix,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<RigSpec> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading rig spec {}", path.display()), e))?;
        Self::from_str_spec(&text)
    }
}

fn parse_vec3(value: &str, line_no: usize) -> Result<DVec3> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::format(format!(
            "line {line_no}: expected three comma-separated numbers, got `{value}`"
        )));
    }
    let mut v = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .parse()
            .map_err(|_| Error::format(format!("line {line_no}: bad number `{p}`")))?;
    }
    Ok(DVec3::from_array(v))
}

/// World-to-camera pose (vision convention) with the camera at `eye`
/// looking toward `target`.
///
/// The camera +z axis points at the target and +x is made perpendicular to
/// `up_hint`, so the image is upright with respect to it. Fails when the
/// viewing direction is parallel to `up_hint`.
pub fn look_at_pose(eye: DVec3, target: DVec3, up_hint: DVec3) -> Result<Pose> {
    if eye == target {
        return Err(Error::validation("look-at eye and target coincide"));
    }
    if up_hint.length() == 0.0 {
        return Err(Error::validation("look-at up hint must be non-zero"));
    }
    let forward = (target - eye).normalize();
    let up = up_hint.normalize();
    let side = forward.cross(up);
    if side.length() < 1e-8 {
        return Err(Error::validation(
            "degenerate look-at: viewing direction is parallel to the up hint",
        ));
    }
    let x_axis = side.normalize();
    let y_axis = forward.cross(x_axis); // +y down when up_hint points up
    let c2w = DMat3::from_cols(x_axis, y_axis, forward);
    let w2c = c2w.transpose();
    let q = rotmat_to_quat(&w2c)?;
    let t = -(w2c * eye);
    Pose::new(q, t)
}

/// Generates ring poses: ring `(elevation, n)` places camera `k` at
/// `center + radius * (cos e cos a, cos e sin a, sin e)` with
/// `a = 2 pi k / n`, looking at the center.
///
/// Records are named `{prefix}_{ring}_{k:04}.png` with sequential ids
/// starting at 1, all referencing the template camera.
pub fn generate_rig(spec: &RigSpec) -> Result<Vec<ImageRecord>> {
    spec.validate()?;
    let mut records = Vec::new();
    let mut image_id = 1u32;
    for (ring_idx, ring) in spec.rings.iter().enumerate() {
        let elevation = ring.elevation_deg.to_radians();
        for k in 0..ring.count {
            let azimuth = 2.0 * std::f64::consts::PI * k as f64 / ring.count as f64;
            let offset = DVec3::new(
                elevation.cos() * azimuth.cos(),
                elevation.cos() * azimuth.sin(),
                elevation.sin(),
            );
            let eye = spec.center + spec.radius * offset;
            let pose = look_at_pose(eye, spec.center, spec.up_hint)?;
            records.push(ImageRecord::new(
                image_id,
                pose,
                spec.intrinsics.camera_id,
                format!("{}_{}_{k:04}.png", spec.name_prefix, ring_idx),
                Vec::new(),
            )?);
            image_id += 1;
        }
    }
    Ok(records)
}

/// Displaces every pose sideways by `offset` along its own +x/-x/+y/-y
/// image axes (in the world frame), keeping the look direction. Produces
/// four poses per input with fresh sequential ids.
pub fn generate_offset_poses(records: &[ImageRecord], offset: f64) -> Result<Vec<ImageRecord>> {
    if records.is_empty() {
        return Err(Error::validation(
            "offset generation needs at least one pose",
        ));
    }
    if !(offset > 0.0) {
        return Err(Error::validation("offset distance must be positive"));
    }
    let mut out = Vec::with_capacity(records.len() * 4);
    let mut image_id = 1u32;
    for rec in records {
        let w2c = rec.pose.rotation();
        let c2w = w2c.transpose();
        let center = camera_center(&rec.pose);
        let axes = [c2w.col(0), -c2w.col(0), c2w.col(1), -c2w.col(1)];
        let suffixes = ["xp", "xn", "yp", "yn"];
        let stem = rec
            .name
            .rsplit_once('.')
            .map(|(s, _)| s)
            .unwrap_or(&rec.name);
        for (axis, suffix) in axes.iter().zip(suffixes) {
            let new_center = center + offset * *axis;
            let t = -(w2c * new_center);
            out.push(ImageRecord::new(
                image_id,
                Pose::new(rec.pose.q, t)?,
                rec.camera_id,
                format!("{stem}_{suffix}.png"),
                Vec::new(),
            )?);
            image_id += 1;
        }
    }
    Ok(out)
}

/// Re-expresses a world-to-camera pose in the other camera-axis convention.
/// The camera center is preserved exactly; converting twice returns the
/// original pose.
pub fn convert_convention(pose: &Pose, from: Convention, to: Convention) -> Result<Pose> {
    if from == to {
        return Ok(*pose);
    }
    let w2c = pose.rotation();
    let center = camera_center(pose);
    // R_c2w' = R_c2w * F with F = diag(1, -1, -1), so R_w2c' = F * R_w2c.
    let flip = DMat3::from_diagonal(DVec3::new(1.0, -1.0, -1.0));
    let new_w2c = flip * w2c;
    let q = rotmat_to_quat(&new_w2c)?;
    let t = -(new_w2c * center);
    Pose::new(q, t)
}
