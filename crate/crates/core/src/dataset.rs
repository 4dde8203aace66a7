//! Dataset assembly: PNG ingestion/emission and merging a ground-truth
//! model with rendered novel views into one augmented COLMAP text model.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageReader};

use crate::colmap::{self, CameraIntrinsics, ImageRecord};
use crate::error::{Error, Result};
use crate::render::ImageBuffer;

/// A COLMAP text model plus the directory its image files live in.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetModel {
    pub cameras: Vec<CameraIntrinsics>,
    pub images: Vec<ImageRecord>,
    pub image_dir: PathBuf,
}

impl DatasetModel {
    /// Loads `cameras.txt`/`images.txt` from `dir`. Image files are looked
    /// up in `dir/images` when that subdirectory exists, else in `dir`
    /// itself.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let (cameras, images) = colmap::read_model_text(dir)?;
        let images_subdir = dir.join("images");
        let image_dir = if images_subdir.is_dir() {
            images_subdir
        } else {
            dir.to_path_buf()
        };
        let model = DatasetModel {
            cameras,
            images,
            image_dir,
        };
        model.validate()?;
        Ok(model)
    }

    /// Structural integrity: resolvable camera ids, unique image ids and
    /// names.
    pub fn validate(&self) -> Result<()> {
        colmap::validate_referential(&self.cameras, &self.images)?;
        let mut ids = HashSet::new();
        let mut names = HashSet::new();
        for rec in &self.images {
            if !ids.insert(rec.image_id) {
                return Err(Error::integrity(format!(
                    "duplicate image id {}",
                    rec.image_id
                )));
            }
            if !names.insert(rec.name.as_str()) {
                return Err(Error::integrity(format!(
                    "duplicate image name `{}`",
                    rec.name
                )));
            }
        }
        Ok(())
    }

    /// Checks that every record's file is present in `image_dir`.
    pub fn validate_files(&self) -> Result<()> {
        for rec in &self.images {
            let path = self.image_dir.join(&rec.name);
            if !path.is_file() {
                return Err(Error::integrity(format!(
                    "image file `{}` missing from {}",
                    rec.name,
                    self.image_dir.display()
                )));
            }
        }
        Ok(())
    }
}

fn place_file(src: &Path, dst: &Path, link: bool) -> Result<()> {
    if link {
        #[cfg(unix)]
        {
            if dst.exists() {
                fs::remove_file(dst)
                    .map_err(|e| Error::io(format!("replacing {}", dst.display()), e))?;
            }
            return std::os::unix::fs::symlink(src, dst).map_err(|e| {
                Error::io(format!("linking {} -> {}", dst.display(), src.display()), e)
            });
        }
        // Fall through to copying where symlinks are unavailable.
    }
    fs::copy(src, dst)
        .map_err(|e| Error::io(format!("copying {} -> {}", src.display(), dst.display()), e))?;
    Ok(())
}

/// Merges a ground-truth model with a novel-view model into `out_dir`.
///
/// Ground records come first and keep their relative order; image ids are
/// renumbered sequentially from 1 and novel camera ids are renumbered past
/// the ground maximum. Image files are copied (or symlinked with `link`)
/// into `out_dir/images`, and the combined `cameras.txt`/`images.txt` are
/// written with 2D points stripped.
pub fn merge_models(
    ground: &DatasetModel,
    novel: &DatasetModel,
    out_dir: impl AsRef<Path>,
    link: bool,
) -> Result<DatasetModel> {
    let out_dir = out_dir.as_ref();
    ground.validate()?;
    novel.validate()?;
    ground.validate_files()?;
    novel.validate_files()?;

    let ground_names: HashSet<&str> = ground.images.iter().map(|r| r.name.as_str()).collect();
    for rec in &novel.images {
        if ground_names.contains(rec.name.as_str()) {
            return Err(Error::integrity(format!(
                "image name `{}` appears in both models",
                rec.name
            )));
        }
    }

    let max_ground_cam = ground
        .cameras
        .iter()
        .map(|c| c.camera_id)
        .max()
        .unwrap_or(0);
    let mut cameras = ground.cameras.clone();
    let mut novel_cam_map: HashMap<u32, u32> = HashMap::new();
    for (i, cam) in novel.cameras.iter().enumerate() {
        let new_id = max_ground_cam + 1 + i as u32;
        novel_cam_map.insert(cam.camera_id, new_id);
        let mut cam = cam.clone();
        cam.camera_id = new_id;
        cameras.push(cam);
    }

    let image_out = out_dir.join("images");
    fs::create_dir_all(&image_out)
        .map_err(|e| Error::io(format!("creating {}", image_out.display()), e))?;

    let mut images = Vec::with_capacity(ground.images.len() + novel.images.len());
    let mut next_id = 1u32;
    for rec in &ground.images {
        let mut rec = rec.clone();
        rec.image_id = next_id;
        rec.points2d.clear();
        place_file(
            &ground.image_dir.join(&rec.name),
            &image_out.join(&rec.name),
            link,
        )?;
        images.push(rec);
        next_id += 1;
    }
    for rec in &novel.images {
        let mut rec = rec.clone();
        rec.image_id = next_id;
        rec.camera_id = novel_cam_map[&rec.camera_id];
        rec.points2d.clear();
        place_file(
            &novel.image_dir.join(&rec.name),
            &image_out.join(&rec.name),
            link,
        )?;
        images.push(rec);
        next_id += 1;
    }

    colmap::write_model_text(out_dir, &cameras, &images, false)?;

    let merged = DatasetModel {
        cameras,
        images,
        image_dir: image_out,
    };
    merged.validate()?;
    Ok(merged)
}

/// Decodes an 8-bit RGB or RGBA PNG to a float buffer; alpha is dropped and
/// bytes map to `b / 255`.
pub fn load_png(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(format!("opening image {}", path.display()), e))?;
    let decoded = reader
        .decode()
        .map_err(|e| Error::format(format!("decoding {}: {e}", path.display())))?;
    let rgb = match decoded {
        DynamicImage::ImageRgb8(img) => img,
        DynamicImage::ImageRgba8(img) => DynamicImage::ImageRgba8(img).to_rgb8(),
        other => {
            return Err(Error::format(format!(
                "{}: unsupported pixel format {:?}; expected 8-bit RGB or RGBA",
                path.display(),
                other.color()
            )));
        }
    };
    let (width, height) = (rgb.width(), rgb.height());
    let pixels = rgb.as_raw().iter().map(|&b| b as f32 / 255.0).collect();
    Ok(ImageBuffer {
        width,
        height,
        pixels,
    })
}

/// Encodes a float buffer as 8-bit RGB PNG with `round(clamp(v, 0, 1) * 255)`.
pub fn write_png(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes: Vec<u8> = img
        .pixels
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    let rgb = image::RgbImage::from_raw(img.width, img.height, bytes)
        .ok_or_else(|| Error::validation("image buffer size does not match its dimensions"))?;
    rgb.save(path)
        .map_err(|e| Error::format(format!("encoding {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colmap::{CameraModel, Pose};
    use crate::synthetic::SplitMix64;

    fn cam(id: u32) -> CameraIntrinsics {
        CameraIntrinsics::new(id, CameraModel::Pinhole, 8, 8, 10.0, 10.0, 4.0, 4.0).unwrap()
    }

    fn gray(width: u32, height: u32, v: f32) -> ImageBuffer {
        ImageBuffer {
            width,
            height,
            pixels: vec![v; (width * height * 3) as usize],
        }
    }

    fn model_in(dir: &Path, cam_id: u32, names: &[&str]) -> DatasetModel {
        let cameras = vec![cam(cam_id)];
        let images: Vec<ImageRecord> = names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                ImageRecord::new(i as u32 + 1, Pose::IDENTITY, cam_id, *n, vec![]).unwrap()
            })
            .collect();
        for name in names {
            write_png(&gray(8, 8, 0.5), dir.join(name)).unwrap();
        }
        DatasetModel {
            cameras,
            images,
            image_dir: dir.to_path_buf(),
        }
    }

    #[test]
    fn png_roundtrip_is_byte_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.png");
        let mut rng = SplitMix64::new(5);
        let img = ImageBuffer {
            width: 9,
            height: 7,
            pixels: (0..9 * 7 * 3)
                .map(|_| (rng.next_u64() % 256) as f32 / 255.0)
                .collect(),
        };
        write_png(&img, &path).unwrap();
        let back = load_png(&path).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn zero_buffer_writes_zero_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.png");
        write_png(&gray(4, 4, 0.0), &path).unwrap();
        let back = load_png(&path).unwrap();
        assert!(back.pixels.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sixteen_bit_png_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("deep.png");
        let img = image::ImageBuffer::<image::Rgb<u16>, Vec<u16>>::from_pixel(
            4,
            4,
            image::Rgb([65535, 0, 0]),
        );
        img.save(&path).unwrap();
        let err = load_png(&path).unwrap_err();
        assert!(matches!(err, Error::Format(_)), "{err}");
    }

    #[test]
    fn rgba_alpha_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.png");
        let img = image::RgbaImage::from_pixel(2, 2, image::Rgba([10, 20, 30, 99]));
        img.save(&path).unwrap();
        let back = load_png(&path).unwrap();
        assert_eq!(back.get(0, 0), [10.0 / 255.0, 20.0 / 255.0, 30.0 / 255.0]);
    }

    #[test]
    fn merge_renumbers_and_strips() {
        let gdir = tempfile::tempdir().unwrap();
        let ndir = tempfile::tempdir().unwrap();
        let odir = tempfile::tempdir().unwrap();
        let ground = model_in(gdir.path(), 1, &["g1.png", "g2.png", "g3.png"]);
        let novel = model_in(ndir.path(), 1, &["n1.png", "n2.png"]);

        let merged = merge_models(&ground, &novel, odir.path(), false).unwrap();
        assert_eq!(merged.images.len(), 5);
        assert_eq!(merged.cameras.len(), 2);
        assert_eq!(merged.cameras[1].camera_id, 2);
        let ids: Vec<u32> = merged.images.iter().map(|r| r.image_id).collect();
        assert_eq!(ids, vec![1, 2, 3, 4, 5]);
        assert_eq!(merged.images[3].camera_id, 2);
        assert!(merged.images.iter().all(|r| r.points2d.is_empty()));
        merged.validate().unwrap();
        merged.validate_files().unwrap();

        // The written model parses back to the same records.
        let reloaded = DatasetModel::load(odir.path()).unwrap();
        assert_eq!(reloaded.images, merged.images);
        assert_eq!(reloaded.cameras, merged.cameras);
    }

    #[test]
    fn merge_rejects_name_collisions_and_missing_files() {
        let gdir = tempfile::tempdir().unwrap();
        let ndir = tempfile::tempdir().unwrap();
        let odir = tempfile::tempdir().unwrap();
        let ground = model_in(gdir.path(), 1, &["img_0001.png"]);
        let novel = model_in(ndir.path(), 1, &["img_0001.png"]);
        let err = merge_models(&ground, &novel, odir.path(), false).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)), "{err}");
        assert!(err.to_string().contains("img_0001.png"));

        let novel2 = model_in(ndir.path(), 1, &["n.png"]);
        fs::remove_file(ndir.path().join("n.png")).unwrap();
        let err = merge_models(&ground, &novel2, odir.path(), false).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)), "{err}");
    }

    #[test]
    fn merge_with_empty_novel_keeps_ground() {
        let gdir = tempfile::tempdir().unwrap();
        let odir = tempfile::tempdir().unwrap();
        let ground = model_in(gdir.path(), 3, &["a.png", "b.png"]);
        let novel = DatasetModel {
            cameras: vec![],
            images: vec![],
            image_dir: gdir.path().to_path_buf(),
        };
        let merged = merge_models(&ground, &novel, odir.path(), false).unwrap();
        assert_eq!(merged.images.len(), 2);
        assert_eq!(merged.cameras.len(), 1);
        assert_eq!(merged.images[0].image_id, 1);
    }
}
