//! Forward splat rendering: perspective projection of 3D Gaussians to 2D,
//! a global front-to-back depth sort, and per-pixel alpha compositing.
//!
//! Two render paths share one compositing kernel. [`render_view`] bins
//! splats into screen tiles so each pixel only visits nearby splats;
//! [`brute_force_render`] walks the full sorted list at every pixel. A
//! splat contributes to a pixel only inside its `sigma_extent` Mahalanobis
//! ellipse, and that ellipse is always contained in the tile-binned
//! bounding box, so the two paths composite identical sequences and agree
//! to the last bit.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use glam::{DVec2, DVec3};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::colmap::{camera_center, validate_image_name, CameraIntrinsics, ImageRecord, Pose};
use crate::dataset::write_png;
use crate::error::{Error, Result};
use crate::math::Sym2;
use crate::sh::evaluate_sh;
use crate::splat::{Gaussian, SplatCloud};

/// Tunables for the rasterizer. Defaults follow the reference trained-splat
/// renderer.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderSettings {
    /// Color composited behind the scene, RGB in [0, 1].
    pub background: [f64; 3],
    /// Camera-space z below which splats are culled (world units).
    pub near_plane: f64,
    /// Edge length of the rasterization tiles, pixels.
    pub tile_size: u32,
    /// Per-pixel alpha below this contributes nothing.
    pub alpha_cutoff: f64,
    /// Compositing stops once transmittance drops below this.
    pub transmittance_floor: f64,
    /// Isotropic variance added to every projected covariance (pixels^2).
    pub lowpass: f64,
    /// Splat influence radius in Mahalanobis units.
    pub sigma_extent: f64,
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            background: [0.0, 0.0, 0.0],
            near_plane: 0.1,
            tile_size: 16,
            alpha_cutoff: 1.0 / 255.0,
            transmittance_floor: 1e-4,
            lowpass: 0.3,
            sigma_extent: 3.0,
        }
    }
}

impl RenderSettings {
    pub fn validate(&self) -> Result<()> {
        for (v, what) in [
            (self.near_plane, "near plane"),
            (self.alpha_cutoff, "alpha cutoff"),
            (self.transmittance_floor, "transmittance floor"),
            (self.lowpass, "low-pass variance"),
            (self.sigma_extent, "sigma extent"),
        ] {
            if !(v > 0.0) {
                return Err(Error::validation(format!(
                    "{what} must be positive, got {v}"
                )));
            }
        }
        if self.tile_size == 0 {
            return Err(Error::validation("tile size must be positive"));
        }
        if self.alpha_cutoff >= 1.0 {
            return Err(Error::validation("alpha cutoff must be below 1"));
        }
        for c in self.background {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::validation(format!(
                    "background component {c} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// A Gaussian projected into screen space.
#[derive(Debug, Clone, PartialEq)]
pub struct Splat2D {
    /// Projected mean in pixel coordinates.
    pub mean2d: DVec2,
    /// Screen-space covariance after the low-pass addition, pixels^2.
    pub cov2d: Sym2,
    /// Camera-space depth, world units.
    pub depth: f64,
    /// View-dependent RGB in [0, 1].
    pub color: [f64; 3],
    pub opacity: f64,
}

/// Row-major H x W x 3 float image with values in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<f32>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32) -> Self {
        ImageBuffer {
            width,
            height,
            pixels: vec![0.0; width as usize * height as usize * 3],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> [f32; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: u32, y: u32, rgb: [f32; 3]) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.pixels[i] = rgb[0];
        self.pixels[i + 1] = rgb[1];
        self.pixels[i + 2] = rgb[2];
    }
}

/// Projects one Gaussian; `None` means culled (behind the near plane or
/// with a numerically degenerate footprint).
pub fn project_gaussian(
    g: &Gaussian,
    pose: &Pose,
    k: &CameraIntrinsics,
    s: &RenderSettings,
) -> Option<Splat2D> {
    let rot = pose.rotation();
    let mu_cam = rot * g.position + pose.t;
    if mu_cam.z <= s.near_plane {
        return None;
    }
    let z = mu_cam.z;
    let mean2d = DVec2::new(k.fx * mu_cam.x / z + k.cx, k.fy * mu_cam.y / z + k.cy);

    // EWA approximation: propagate the world covariance through the camera
    // rotation and the projective Jacobian at the mean.
    let sigma_cam = rot * g.covariance_3d() * rot.transpose();
    let jx = DVec3::new(k.fx / z, 0.0, -k.fx * mu_cam.x / (z * z));
    let jy = DVec3::new(0.0, k.fy / z, -k.fy * mu_cam.y / (z * z));
    let raw = Sym2::new(
        jx.dot(sigma_cam * jx),
        jx.dot(sigma_cam * jy),
        jy.dot(sigma_cam * jy),
    );

    // Edge-on splats produce covariances too ill-conditioned to invert.
    let (l_max, l_min) = raw.eigenvalues();
    if !(l_min > 0.0) || l_max / l_min > 1e12 {
        return None;
    }
    let cov2d = raw.add_diag(s.lowpass);

    let view_dir = (g.position - camera_center(pose)).normalize();
    let color = evaluate_sh(g, view_dir);

    Some(Splat2D {
        mean2d,
        cov2d,
        depth: z,
        color,
        opacity: g.opacity,
    })
}

/// Projects the whole cloud and sorts survivors front to back. The sort is
/// stable, so equal depths keep their input order.
pub fn project_and_sort(
    cloud: &SplatCloud,
    pose: &Pose,
    k: &CameraIntrinsics,
    s: &RenderSettings,
) -> Vec<Splat2D> {
    let mut splats: Vec<Splat2D> = cloud
        .gaussians
        .iter()
        .filter_map(|g| project_gaussian(g, pose, k, s))
        .collect();
    splats.sort_by(|a, b| a.depth.total_cmp(&b.depth));
    splats
}

/// Per-splat values the compositing kernel needs.
struct Prepared {
    mean: DVec2,
    inv: Sym2,
    opacity: f64,
    color: [f64; 3],
}

fn prepare(splats: &[Splat2D]) -> Vec<Prepared> {
    splats
        .iter()
        .map(|sp| match sp.cov2d.inverse() {
            Some(inv) => Prepared {
                mean: sp.mean2d,
                inv,
                opacity: sp.opacity,
                color: sp.color,
            },
            // Unreachable after projection culling; a zero opacity keeps the
            // splat inert without disturbing indices.
            None => Prepared {
                mean: sp.mean2d,
                inv: Sym2::new(0.0, 0.0, 0.0),
                opacity: 0.0,
                color: sp.color,
            },
        })
        .collect()
}

/// Compositing result at one pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelStats {
    /// Final color including the background term.
    pub color: [f64; 3],
    /// Sum of composited weights `alpha_i * T_i`; together with
    /// `transmittance` this partitions unity.
    pub weight_sum: f64,
    /// Transmittance left after the last composited splat.
    pub transmittance: f64,
}

/// Front-to-back compositing over splats in depth order. Both render paths
/// funnel through this loop so their arithmetic is identical.
fn composite<'a>(
    splats: impl Iterator<Item = &'a Prepared>,
    px: DVec2,
    s: &RenderSettings,
) -> ([f64; 3], f64, f64) {
    let ext2 = s.sigma_extent * s.sigma_extent;
    let mut rgb = [0.0f64; 3];
    let mut weight_sum = 0.0f64;
    let mut t = 1.0f64;
    for sp in splats {
        let d = px - sp.mean;
        let maha = sp.inv.xx * d.x * d.x + 2.0 * sp.inv.xy * d.x * d.y + sp.inv.yy * d.y * d.y;
        if maha > ext2 {
            continue;
        }
        let alpha = (sp.opacity * (-0.5 * maha).exp()).min(0.99);
        if alpha < s.alpha_cutoff {
            continue;
        }
        let w = alpha * t;
        rgb[0] += sp.color[0] * w;
        rgb[1] += sp.color[1] * w;
        rgb[2] += sp.color[2] * w;
        weight_sum += w;
        t *= 1.0 - alpha;
        if t < s.transmittance_floor {
            break;
        }
    }
    (rgb, weight_sum, t)
}

/// Composites a single pixel over an already depth-sorted splat list,
/// exposing the blend weights alongside the color.
pub fn composite_pixel(splats: &[Splat2D], x: f64, y: f64, s: &RenderSettings) -> PixelStats {
    let prepared = prepare(splats);
    let (rgb, weight_sum, t) = composite(prepared.iter(), DVec2::new(x, y), s);
    PixelStats {
        color: [
            rgb[0] + t * s.background[0],
            rgb[1] + t * s.background[1],
            rgb[2] + t * s.background[2],
        ],
        weight_sum,
        transmittance: t,
    }
}

/// Tile bins: for each tile, the indices of sorted splats whose bounding
/// box touches it. Indices stay in depth order.
fn bin_to_tiles(
    splats: &[Splat2D],
    width: u32,
    height: u32,
    s: &RenderSettings,
) -> (usize, Vec<Vec<u32>>) {
    let tile = s.tile_size as i64;
    let tiles_x = (width as i64 + tile - 1) / tile;
    let tiles_y = (height as i64 + tile - 1) / tile;
    let mut bins: Vec<Vec<u32>> = vec![Vec::new(); (tiles_x * tiles_y) as usize];

    for (idx, sp) in splats.iter().enumerate() {
        let (l_max, _) = sp.cov2d.eigenvalues();
        let radius = (s.sigma_extent * l_max.sqrt()).ceil();
        // One extra pixel of slack keeps the box conservatively larger than
        // the sigma_extent ellipse after float rounding.
        let x0 = (sp.mean2d.x - radius - 1.0).floor() as i64;
        let x1 = (sp.mean2d.x + radius + 1.0).ceil() as i64;
        let y0 = (sp.mean2d.y - radius - 1.0).floor() as i64;
        let y1 = (sp.mean2d.y + radius + 1.0).ceil() as i64;
        if x1 < 0 || y1 < 0 || x0 >= width as i64 || y0 >= height as i64 {
            continue;
        }
        let tx0 = x0.max(0) / tile;
        let tx1 = x1.min(width as i64 - 1) / tile;
        let ty0 = y0.max(0) / tile;
        let ty1 = y1.min(height as i64 - 1) / tile;
        for ty in ty0..=ty1 {
            for tx in tx0..=tx1 {
                bins[(ty * tiles_x + tx) as usize].push(idx as u32);
            }
        }
    }
    (tiles_x as usize, bins)
}

fn shade_row(
    y: usize,
    row: &mut [f32],
    prepared: &[Prepared],
    bins: &[Vec<u32>],
    tiles_x: usize,
    s: &RenderSettings,
) {
    let tile = s.tile_size as usize;
    let ty = y / tile;
    for (x, px) in row.chunks_mut(3).enumerate() {
        let bin = &bins[ty * tiles_x + x / tile];
        let center = DVec2::new(x as f64 + 0.5, y as f64 + 0.5);
        let (rgb, _, t) = composite(bin.iter().map(|&i| &prepared[i as usize]), center, s);
        for c in 0..3 {
            px[c] = (rgb[c] + t * s.background[c]).clamp(0.0, 1.0) as f32;
        }
    }
}

/// Renders the cloud through the tiled path.
pub fn render_view(
    cloud: &SplatCloud,
    pose: &Pose,
    k: &CameraIntrinsics,
    s: &RenderSettings,
) -> Result<ImageBuffer> {
    s.validate()?;
    if k.width == 0 || k.height == 0 {
        return Err(Error::validation("cannot render a zero-size image"));
    }
    let splats = project_and_sort(cloud, pose, k, s);
    let prepared = prepare(&splats);
    let (tiles_x, bins) = bin_to_tiles(&splats, k.width, k.height, s);

    let mut img = ImageBuffer::new(k.width, k.height);
    let row_len = k.width as usize * 3;

    #[cfg(feature = "parallel")]
    img.pixels
        .par_chunks_mut(row_len)
        .enumerate()
        .for_each(|(y, row)| shade_row(y, row, &prepared, &bins, tiles_x, s));

    #[cfg(not(feature = "parallel"))]
    for (y, row) in img.pixels.chunks_mut(row_len).enumerate() {
        shade_row(y, row, &prepared, &bins, tiles_x, s);
    }

    Ok(img)
}

/// Reference renderer: every pixel walks the full depth-sorted list with no
/// tiling and no bounding boxes. Intended for small scenes and testing.
pub fn brute_force_render(
    cloud: &SplatCloud,
    pose: &Pose,
    k: &CameraIntrinsics,
    s: &RenderSettings,
) -> Result<ImageBuffer> {
    s.validate()?;
    if k.width == 0 || k.height == 0 {
        return Err(Error::validation("cannot render a zero-size image"));
    }
    let splats = project_and_sort(cloud, pose, k, s);
    let prepared = prepare(&splats);

    let mut img = ImageBuffer::new(k.width, k.height);
    for y in 0..k.height {
        for x in 0..k.width {
            let center = DVec2::new(x as f64 + 0.5, y as f64 + 0.5);
            let (rgb, _, t) = composite(prepared.iter(), center, s);
            let mut out = [0.0f32; 3];
            for c in 0..3 {
                out[c] = (rgb[c] + t * s.background[c]).clamp(0.0, 1.0) as f32;
            }
            img.set(x, y, out);
        }
    }
    Ok(img)
}

/// Renders every record of a model to `out_dir/<record name>` as 8-bit PNG.
/// All camera references and names are checked before the first render.
pub fn render_batch(
    cloud: &SplatCloud,
    records: &[ImageRecord],
    cams: &[CameraIntrinsics],
    s: &RenderSettings,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    let by_id: HashMap<u32, &CameraIntrinsics> = cams.iter().map(|c| (c.camera_id, c)).collect();
    for rec in records {
        if !by_id.contains_key(&rec.camera_id) {
            return Err(Error::integrity(format!(
                "image `{}` references missing camera id {}",
                rec.name, rec.camera_id
            )));
        }
        validate_image_name(&rec.name)?;
    }
    if records.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(out_dir).map_err(|e| {
        Error::io(
            format!("creating output directory {}", out_dir.display()),
            e,
        )
    })?;

    let render_one = |rec: &ImageRecord| -> Result<PathBuf> {
        let k = by_id[&rec.camera_id];
        let img = render_view(cloud, &rec.pose, k, s)?;
        let path = out_dir.join(&rec.name);
        write_png(&img, &path)?;
        Ok(path)
    };

    #[cfg(feature = "parallel")]
    let paths: Result<Vec<PathBuf>> = records.par_iter().map(render_one).collect();
    #[cfg(not(feature = "parallel"))]
    let paths: Result<Vec<PathBuf>> = records.iter().map(render_one).collect();

    paths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colmap::CameraModel;
    use crate::math::Quat;
    use crate::sh::rgb_to_dc;

    fn cam(width: u32, height: u32, f: f64) -> CameraIntrinsics {
        CameraIntrinsics::new(
            1,
            CameraModel::Pinhole,
            width,
            height,
            f,
            f,
            width as f64 / 2.0,
            height as f64 / 2.0,
        )
        .unwrap()
    }

    fn point_gaussian(position: DVec3, sigma: f64, rgb: [f64; 3], opacity: f64) -> Gaussian {
        Gaussian {
            position,
            rotation: Quat::IDENTITY,
            scale: DVec3::splat(sigma),
            opacity,
            sh_coeffs: vec![rgb_to_dc(rgb)],
        }
    }

    #[test]
    fn on_axis_projection() {
        let g = point_gaussian(DVec3::new(0.0, 0.0, 5.0), 0.1, [1.0, 0.0, 0.0], 1.0);
        let k = cam(640, 480, 100.0);
        let s = RenderSettings::default();
        let sp = project_gaussian(&g, &Pose::IDENTITY, &k, &s).unwrap();
        assert!((sp.mean2d - DVec2::new(320.0, 240.0)).length() < 1e-12);
        assert_eq!(sp.depth, 5.0);

        let g = point_gaussian(DVec3::new(1.0, 0.0, 5.0), 0.1, [1.0, 0.0, 0.0], 1.0);
        let sp = project_gaussian(&g, &Pose::IDENTITY, &k, &s).unwrap();
        assert!((sp.mean2d - DVec2::new(340.0, 240.0)).length() < 1e-12);
    }

    #[test]
    fn isotropic_covariance_with_lowpass() {
        let g = point_gaussian(DVec3::new(0.0, 0.0, 5.0), 0.1, [1.0, 0.0, 0.0], 1.0);
        let k = cam(640, 480, 100.0);
        let s = RenderSettings::default();
        let sp = project_gaussian(&g, &Pose::IDENTITY, &k, &s).unwrap();
        // J = diag(20, 20), sigma = 0.01 I -> 4 I, plus 0.3 low-pass.
        assert!((sp.cov2d.xx - 4.3).abs() < 1e-12);
        assert!((sp.cov2d.yy - 4.3).abs() < 1e-12);
        assert!(sp.cov2d.xy.abs() < 1e-12);
    }

    #[test]
    fn behind_camera_is_culled() {
        let g = point_gaussian(DVec3::new(0.0, 0.0, -1.0), 0.1, [1.0, 0.0, 0.0], 1.0);
        let k = cam(64, 64, 50.0);
        assert!(project_gaussian(&g, &Pose::IDENTITY, &k, &RenderSettings::default()).is_none());
    }

    #[test]
    fn empty_scene_renders_background() {
        let cloud = SplatCloud::new(
            vec![point_gaussian(
                DVec3::new(0.0, 0.0, -5.0),
                0.1,
                [1.0, 0.0, 0.0],
                1.0,
            )],
            0,
        )
        .unwrap();
        let k = cam(32, 32, 30.0);
        let s = RenderSettings {
            background: [0.25, 0.5, 0.75],
            ..Default::default()
        };
        let img = render_view(&cloud, &Pose::IDENTITY, &k, &s).unwrap();
        for y in 0..32 {
            for x in 0..32 {
                assert_eq!(img.get(x, y), [0.25, 0.5, 0.75]);
            }
        }
    }

    #[test]
    fn centered_splat_blends_with_background() {
        // A splat dead-center on a pixel with opacity 0.5 contributes half
        // its color; the background fills the remaining transmittance.
        let k = cam(31, 31, 100.0);
        // Pixel (15, 15) has center (15.5, 15.5) = principal point.
        let g = point_gaussian(DVec3::new(0.0, 0.0, 5.0), 0.05, [1.0, 1.0, 1.0], 0.5);
        let cloud = SplatCloud::new(vec![g], 0).unwrap();
        let s = RenderSettings {
            background: [0.0, 0.0, 1.0],
            ..Default::default()
        };
        let img = render_view(&cloud, &Pose::IDENTITY, &k, &s).unwrap();
        let px = img.get(15, 15);
        assert!((px[0] as f64 - 0.5).abs() < 1e-6, "{px:?}");
        assert!((px[1] as f64 - 0.5).abs() < 1e-6);
        assert!((px[2] as f64 - 1.0).abs() < 1e-6); // 0.5 from splat + 0.5 background
    }

    #[test]
    fn two_splats_composite_front_to_back() {
        let k = cam(31, 31, 100.0);
        let near = point_gaussian(DVec3::new(0.0, 0.0, 5.0), 0.05, [1.0, 0.0, 0.0], 0.5);
        let far = point_gaussian(DVec3::new(0.0, 0.0, 10.0), 0.1, [0.0, 1.0, 0.0], 0.8);
        let cloud = SplatCloud::new(vec![far.clone(), near.clone()], 0).unwrap();
        let s = RenderSettings {
            background: [0.0, 0.0, 1.0],
            ..Default::default()
        };
        let img = render_view(&cloud, &Pose::IDENTITY, &k, &s).unwrap();
        let px = img.get(15, 15);
        // a1 = 0.5 (near), a2 = 0.8 (far): r = a1, g = a2 (1 - a1),
        // b = (1 - a1)(1 - a2).
        assert!((px[0] as f64 - 0.5).abs() < 1e-6, "{px:?}");
        assert!((px[1] as f64 - 0.4).abs() < 1e-6);
        assert!((px[2] as f64 - 0.1).abs() < 1e-6);

        // Matches the brute-force path exactly.
        let oracle = brute_force_render(&cloud, &Pose::IDENTITY, &k, &s).unwrap();
        assert_eq!(img, oracle);
    }

    #[test]
    fn input_order_does_not_matter_for_distinct_depths() {
        let k = cam(48, 48, 60.0);
        let mut gaussians = Vec::new();
        for i in 0..20 {
            let t = i as f64;
            gaussians.push(point_gaussian(
                DVec3::new(
                    (t * 0.07).sin() * 0.4,
                    (t * 0.13).cos() * 0.4,
                    3.0 + t * 0.1,
                ),
                0.05 + 0.01 * (i % 5) as f64,
                [0.1 + 0.04 * t, 0.9 - 0.04 * t, 0.5],
                0.3 + 0.03 * t.min(20.0),
            ));
        }
        let s = RenderSettings::default();
        let a = render_view(
            &SplatCloud::new(gaussians.clone(), 0).unwrap(),
            &Pose::IDENTITY,
            &k,
            &s,
        )
        .unwrap();
        gaussians.reverse();
        let b = render_view(
            &SplatCloud::new(gaussians, 0).unwrap(),
            &Pose::IDENTITY,
            &k,
            &s,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn raising_front_opacity_pulls_pixel_toward_its_color() {
        let k = cam(31, 31, 100.0);
        let far = point_gaussian(DVec3::new(0.0, 0.0, 10.0), 0.1, [0.0, 1.0, 0.0], 0.9);
        let s = RenderSettings::default();
        let front_color = [1.0, 0.0, 0.0];
        let mut prev_dist = f64::INFINITY;
        for op in [0.2, 0.4, 0.6, 0.8, 0.95] {
            let near = point_gaussian(DVec3::new(0.0, 0.0, 5.0), 0.05, front_color, op);
            let cloud = SplatCloud::new(vec![near, far.clone()], 0).unwrap();
            let img = render_view(&cloud, &Pose::IDENTITY, &k, &s).unwrap();
            let px = img.get(15, 15);
            let dist: f64 = (0..3).map(|c| (px[c] as f64 - front_color[c]).abs()).sum();
            assert!(dist < prev_dist, "pixel must approach the front color");
            prev_dist = dist;
        }
    }

    #[test]
    fn render_batch_checks_references_before_rendering() {
        let cloud = SplatCloud::new(
            vec![point_gaussian(
                DVec3::new(0.0, 0.0, 3.0),
                0.1,
                [1.0, 0.0, 0.0],
                1.0,
            )],
            0,
        )
        .unwrap();
        let cams = vec![cam(16, 16, 20.0)];
        let bad = ImageRecord::new(1, Pose::IDENTITY, 7, "a.png", vec![]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let err = render_batch(
            &cloud,
            &[bad],
            &cams,
            &RenderSettings::default(),
            dir.path(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));

        // Empty record list succeeds without touching the filesystem.
        let out = render_batch(&cloud, &[], &cams, &RenderSettings::default(), dir.path()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn render_batch_writes_named_files() {
        let cloud = SplatCloud::new(
            vec![point_gaussian(
                DVec3::new(0.0, 0.0, 3.0),
                0.1,
                [0.2, 0.9, 0.4],
                1.0,
            )],
            0,
        )
        .unwrap();
        let cams = vec![cam(16, 16, 20.0)];
        let records = vec![
            ImageRecord::new(1, Pose::IDENTITY, 1, "v1.png", vec![]).unwrap(),
            ImageRecord::new(2, Pose::IDENTITY, 1, "v2.png", vec![]).unwrap(),
        ];
        let dir = tempfile::tempdir().unwrap();
        let paths = render_batch(
            &cloud,
            &records,
            &cams,
            &RenderSettings::default(),
            dir.path(),
        )
        .unwrap();
        assert_eq!(paths.len(), 2);
        assert!(dir.path().join("v1.png").exists());
        assert!(dir.path().join("v2.png").exists());
    }

    #[test]
    fn pixel_stats_partition_unity() {
        let k = cam(31, 31, 100.0);
        let near = point_gaussian(DVec3::new(0.0, 0.0, 5.0), 0.05, [1.0, 0.0, 0.0], 0.5);
        let far = point_gaussian(DVec3::new(0.0, 0.0, 10.0), 0.1, [0.0, 1.0, 0.0], 0.8);
        let cloud = SplatCloud::new(vec![near, far], 0).unwrap();
        let s = RenderSettings::default();
        let splats = project_and_sort(&cloud, &Pose::IDENTITY, &k, &s);
        let stats = composite_pixel(&splats, 15.5, 15.5, &s);
        assert!((stats.weight_sum + stats.transmittance - 1.0).abs() < 1e-12);
        assert!((stats.weight_sum - 0.9).abs() < 1e-12); // 0.5 + 0.8 * 0.5
    }
}
