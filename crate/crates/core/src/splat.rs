//! Trained Gaussian splat scenes: the in-memory model and the binary PLY
//! loader for the standard trained-splat layout.
//!
//! Stored PLY values are pre-activation: opacity is a logit, scales are
//! logarithms, and quaternions are unnormalized. Activation happens once at
//! load so in-memory values are always in their final form.

use std::fs;
use std::path::Path;

use glam::{DMat3, DVec3};

use crate::error::{Error, Result};
use crate::math::Quat;

/// Highest supported spherical-harmonics degree.
pub const MAX_SH_DEGREE: usize = 3;

/// One anisotropic 3D Gaussian primitive.
///
/// `sh_coeffs` holds `(degree + 1)^2` RGB triplets; entry 0 is the DC term.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub position: DVec3,
    /// Unit rotation, `(w, x, y, z)`.
    pub rotation: Quat,
    /// Per-axis standard deviations, strictly positive.
    pub scale: DVec3,
    /// Blend weight in `[0, 1]`.
    pub opacity: f64,
    pub sh_coeffs: Vec<[f64; 3]>,
}

impl Gaussian {
    /// 3D covariance `R * diag(scale)^2 * R^T`; symmetric positive
    /// semi-definite by construction.
    pub fn covariance_3d(&self) -> DMat3 {
        let r = self.rotation.to_mat3();
        let s2 = DMat3::from_diagonal(self.scale * self.scale);
        r * s2 * r.transpose()
    }

    pub fn sh_degree(&self) -> usize {
        (self.sh_coeffs.len() as f64).sqrt() as usize - 1
    }

    fn validate(&self, index: usize) -> Result<()> {
        if (self.rotation.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::validation(format!(
                "gaussian {index}: rotation is not unit length"
            )));
        }
        if !(self.scale.x > 0.0 && self.scale.y > 0.0 && self.scale.z > 0.0) {
            return Err(Error::validation(format!(
                "gaussian {index}: scale must be strictly positive, got {}",
                self.scale
            )));
        }
        if !(0.0..=1.0).contains(&self.opacity) {
            return Err(Error::validation(format!(
                "gaussian {index}: opacity {} outside [0, 1]",
                self.opacity
            )));
        }
        Ok(())
    }
}

/// A loaded splat scene. Immutable after load and safe to share across
/// threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SplatCloud {
    pub gaussians: Vec<Gaussian>,
    pub sh_degree: usize,
}

impl SplatCloud {
    /// Builds a cloud, checking the per-gaussian invariants and that every
    /// gaussian carries the same number of SH coefficients.
    pub fn new(gaussians: Vec<Gaussian>, sh_degree: usize) -> Result<Self> {
        if gaussians.is_empty() {
            return Err(Error::validation("splat cloud must not be empty"));
        }
        if sh_degree > MAX_SH_DEGREE {
            return Err(Error::validation(format!(
                "sh degree {sh_degree} exceeds maximum {MAX_SH_DEGREE}"
            )));
        }
        let expected = (sh_degree + 1) * (sh_degree + 1);
        for (i, g) in gaussians.iter().enumerate() {
            g.validate(i)?;
            if g.sh_coeffs.len() != expected {
                return Err(Error::validation(format!(
                    "gaussian {i}: expected {expected} sh coefficients, got {}",
                    g.sh_coeffs.len()
                )));
            }
        }
        Ok(SplatCloud {
            gaussians,
            sh_degree,
        })
    }

    pub fn len(&self) -> usize {
        self.gaussians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaussians.is_empty()
    }
}

/// Applies the storage activations: logistic opacity, exponential scale,
/// quaternion normalization.
pub fn activate_gaussian(
    raw_opacity: f64,
    raw_scale: DVec3,
    raw_rotation: [f64; 4],
) -> Result<(f64, DVec3, Quat)> {
    let opacity = 1.0 / (1.0 + (-raw_opacity).exp());
    let scale = DVec3::new(raw_scale.x.exp(), raw_scale.y.exp(), raw_scale.z.exp());
    let rotation = Quat::new(
        raw_rotation[0],
        raw_rotation[1],
        raw_rotation[2],
        raw_rotation[3],
    )
    .normalized()?;
    Ok((opacity, scale, rotation))
}

/// Solves `count = 3 * ((d + 1)^2 - 1)` for the SH degree.
pub fn infer_sh_degree(f_rest_count: usize) -> Result<usize> {
    for d in 0..=MAX_SH_DEGREE {
        if 3 * ((d + 1) * (d + 1) - 1) == f_rest_count {
            return Ok(d);
        }
    }
    Err(Error::format(format!(
        "cannot infer sh degree: {f_rest_count} f_rest properties match no degree in 0..={MAX_SH_DEGREE}"
    )))
}

/// Loads a trained splat scene from a binary little-endian PLY file.
pub fn load_splat_ply(path: impl AsRef<Path>) -> Result<SplatCloud> {
    let path = path.as_ref();
    let bytes = fs::read(path)
        .map_err(|e| Error::io(format!("reading splat file {}", path.display()), e))?;
    load_splat_ply_bytes(&bytes)
}

// Property slots the loader cares about. `Ignored` covers the normal fields
// (nx, ny, nz) that exporters commonly include.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Pos(usize),
    FDc(usize),
    FRest(usize),
    Opacity,
    Scale(usize),
    Rot(usize),
    Ignored,
}

fn classify_property(name: &str) -> Option<Slot> {
    match name {
        "x" => Some(Slot::Pos(0)),
        "y" => Some(Slot::Pos(1)),
        "z" => Some(Slot::Pos(2)),
        "nx" | "ny" | "nz" => Some(Slot::Ignored),
        "opacity" => Some(Slot::Opacity),
        _ => {
            if let Some(idx) = name.strip_prefix("f_dc_") {
                return idx.parse().ok().filter(|&i| i < 3).map(Slot::FDc);
            }
            if let Some(idx) = name.strip_prefix("f_rest_") {
                return idx.parse().ok().map(Slot::FRest);
            }
            if let Some(idx) = name.strip_prefix("scale_") {
                return idx.parse().ok().filter(|&i| i < 3).map(Slot::Scale);
            }
            if let Some(idx) = name.strip_prefix("rot_") {
                return idx.parse().ok().filter(|&i| i < 4).map(Slot::Rot);
            }
            None
        }
    }
}

/// Parses a splat PLY from memory. The body is read in header property
/// order, not an assumed canonical order.
pub fn load_splat_ply_bytes(bytes: &[u8]) -> Result<SplatCloud> {
    let (header, body_offset) = split_header(bytes)?;
    let mut lines = header.lines().map(str::trim);

    if lines.next() != Some("ply") {
        return Err(Error::format("not a PLY file: missing `ply` magic"));
    }

    let mut format_seen = false;
    let mut vertex_count: Option<usize> = None;
    let mut slots: Vec<Slot> = Vec::new();
    let mut seen_names: Vec<String> = Vec::new();

    for line in lines {
        if line.is_empty() || line.starts_with("comment") {
            continue;
        }
        if line == "end_header" {
            break;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("format") => {
                let rest: Vec<&str> = parts.collect();
                if rest != ["binary_little_endian", "1.0"] {
                    return Err(Error::format(format!(
                        "unsupported PLY format `{}`; expected binary_little_endian 1.0",
                        rest.join(" ")
                    )));
                }
                format_seen = true;
            }
            Some("element") => {
                let name = parts.next().unwrap_or("");
                let count: usize = parts
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| Error::format("malformed element line"))?;
                if name != "vertex" {
                    return Err(Error::format(format!(
                        "unsupported PLY element `{name}`; only `vertex` is accepted"
                    )));
                }
                if vertex_count.is_some() {
                    return Err(Error::format("duplicate vertex element"));
                }
                vertex_count = Some(count);
            }
            Some("property") => {
                if vertex_count.is_none() {
                    return Err(Error::format("property declared before vertex element"));
                }
                let ty = parts.next().unwrap_or("");
                let name = parts.next().unwrap_or("");
                if ty != "float" {
                    return Err(Error::format(format!(
                        "property `{name}` has type `{ty}`; only float32 is supported"
                    )));
                }
                if seen_names.iter().any(|n| n == name) {
                    return Err(Error::format(format!("duplicate property `{name}`")));
                }
                let slot = classify_property(name).ok_or_else(|| {
                    Error::format(format!("unexpected property `{name}` in splat PLY"))
                })?;
                seen_names.push(name.to_string());
                slots.push(slot);
            }
            Some(other) => {
                return Err(Error::format(format!("unsupported header line `{other}`")));
            }
            None => {}
        }
    }

    if !format_seen {
        return Err(Error::format("PLY header is missing a format line"));
    }
    let vertex_count =
        vertex_count.ok_or_else(|| Error::format("PLY header declares no vertex element"))?;

    // Every required property must be present exactly once.
    for (slot, label) in [
        (Slot::Pos(0), "x"),
        (Slot::Pos(1), "y"),
        (Slot::Pos(2), "z"),
        (Slot::FDc(0), "f_dc_0"),
        (Slot::FDc(1), "f_dc_1"),
        (Slot::FDc(2), "f_dc_2"),
        (Slot::Opacity, "opacity"),
        (Slot::Scale(0), "scale_0"),
        (Slot::Scale(1), "scale_1"),
        (Slot::Scale(2), "scale_2"),
        (Slot::Rot(0), "rot_0"),
        (Slot::Rot(1), "rot_1"),
        (Slot::Rot(2), "rot_2"),
        (Slot::Rot(3), "rot_3"),
    ] {
        if !slots.contains(&slot) {
            return Err(Error::format(format!(
                "missing required property `{label}`"
            )));
        }
    }

    let f_rest_count = slots.iter().filter(|s| matches!(s, Slot::FRest(_))).count();
    for i in 0..f_rest_count {
        if !slots.contains(&Slot::FRest(i)) {
            return Err(Error::format(format!(
                "f_rest properties are not contiguous: missing f_rest_{i}"
            )));
        }
    }
    let sh_degree = infer_sh_degree(f_rest_count)?;
    let rest_per_channel = (sh_degree + 1) * (sh_degree + 1) - 1;

    let body = &bytes[body_offset..];
    let stride = slots.len() * 4;
    let expected_len = stride * vertex_count;
    if body.len() < expected_len {
        let offset = body_offset + body.len();
        return Err(Error::io(
            format!(
                "splat PLY body truncated at byte offset {offset}: expected {expected_len} body bytes, got {}",
                body.len()
            ),
            std::io::Error::from(std::io::ErrorKind::UnexpectedEof),
        ));
    }
    if body.len() > expected_len {
        return Err(Error::format(format!(
            "{} trailing bytes after splat PLY body",
            body.len() - expected_len
        )));
    }

    let mut gaussians = Vec::with_capacity(vertex_count);
    for v in 0..vertex_count {
        let row = &body[v * stride..(v + 1) * stride];
        let mut pos = [0.0f64; 3];
        let mut f_dc = [0.0f64; 3];
        let mut f_rest = vec![0.0f64; f_rest_count];
        let mut raw_opacity = 0.0f64;
        let mut raw_scale = [0.0f64; 3];
        let mut raw_rot = [0.0f64; 4];

        for (i, slot) in slots.iter().enumerate() {
            let value = f32::from_le_bytes(row[i * 4..i * 4 + 4].try_into().unwrap()) as f64;
            match *slot {
                Slot::Pos(k) => pos[k] = value,
                Slot::FDc(k) => f_dc[k] = value,
                Slot::FRest(k) => f_rest[k] = value,
                Slot::Opacity => raw_opacity = value,
                Slot::Scale(k) => raw_scale[k] = value,
                Slot::Rot(k) => raw_rot[k] = value,
                Slot::Ignored => {}
            }
        }

        let (opacity, scale, rotation) = activate_gaussian(
            raw_opacity,
            DVec3::new(raw_scale[0], raw_scale[1], raw_scale[2]),
            raw_rot,
        )
        .map_err(|e| Error::validation(format!("vertex {v}: {e}")))?;

        // f_rest is channel-major: all red coefficients, then green, then blue.
        let mut sh_coeffs = Vec::with_capacity(rest_per_channel + 1);
        sh_coeffs.push(f_dc);
        for k in 0..rest_per_channel {
            sh_coeffs.push([
                f_rest[k],
                f_rest[rest_per_channel + k],
                f_rest[2 * rest_per_channel + k],
            ]);
        }

        gaussians.push(Gaussian {
            position: DVec3::new(pos[0], pos[1], pos[2]),
            rotation,
            scale,
            opacity,
            sh_coeffs,
        });
    }

    SplatCloud::new(gaussians, sh_degree)
}

/// Returns the header text and the byte offset of the binary body.
fn split_header(bytes: &[u8]) -> Result<(&str, usize)> {
    let marker = b"end_header\n";
    let pos = bytes
        .windows(marker.len())
        .position(|w| w == marker)
        .ok_or_else(|| Error::format("PLY header has no end_header line"))?;
    let body_offset = pos + marker.len();
    let header = std::str::from_utf8(&bytes[..body_offset])
        .map_err(|_| Error::format("PLY header is not valid UTF-8"))?;
    Ok((header, body_offset))
}
