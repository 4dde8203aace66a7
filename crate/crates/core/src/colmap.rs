//! COLMAP camera/image model I/O.
//!
//! Reads both the text (`cameras.txt`, `images.txt`) and binary
//! (`cameras.bin`, `images.bin`) layouts; writes text only. Only the two
//! distortion-free pinhole models are supported, since the rendering path
//! uses focal length and principal point alone.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use glam::{DMat3, DVec3};

use crate::error::{Error, Result};
use crate::math::Quat;

/// Quaternions parsed from files are renormalized when within this distance
/// of unit length, and rejected when further out.
const QUAT_NORM_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CameraModel {
    SimplePinhole,
    Pinhole,
}

impl CameraModel {
    pub fn name(&self) -> &'static str {
        match self {
            CameraModel::SimplePinhole => "SIMPLE_PINHOLE",
            CameraModel::Pinhole => "PINHOLE",
        }
    }

    fn from_id(id: i32) -> Result<Self> {
        match id {
            0 => Ok(CameraModel::SimplePinhole),
            1 => Ok(CameraModel::Pinhole),
            other => Err(Error::format(format!(
                "unsupported camera model id {other}; only SIMPLE_PINHOLE (0) and PINHOLE (1) are supported"
            ))),
        }
    }
}

/// Pinhole intrinsics, focal lengths and principal point in pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraIntrinsics {
    pub camera_id: u32,
    pub model: CameraModel,
    pub width: u32,
    pub height: u32,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl CameraIntrinsics {
    #[allow(clippy::too_many_arguments)] // one argument per stored field
    pub fn new(
        camera_id: u32,
        model: CameraModel,
        width: u32,
        height: u32,
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
    ) -> Result<Self> {
        if camera_id == 0 {
            return Err(Error::validation("camera id must be positive"));
        }
        if width == 0 || height == 0 {
            return Err(Error::validation("image dimensions must be positive"));
        }
        if !(fx > 0.0 && fy > 0.0) {
            return Err(Error::validation(format!(
                "focal lengths must be positive, got fx={fx} fy={fy}"
            )));
        }
        if !(cx > 0.0 && cx < width as f64 && cy > 0.0 && cy < height as f64) {
            return Err(Error::validation(format!(
                "principal point ({cx}, {cy}) outside image {width}x{height}"
            )));
        }
        if model == CameraModel::SimplePinhole && fx != fy {
            return Err(Error::validation(
                "SIMPLE_PINHOLE requires a single focal length (fx == fy)",
            ));
        }
        Ok(CameraIntrinsics {
            camera_id,
            model,
            width,
            height,
            fx,
            fy,
            cx,
            cy,
        })
    }
}

/// World-to-camera rigid transform: `p_cam = R(q) * p_world + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub q: Quat,
    pub t: DVec3,
}

impl Pose {
    pub const IDENTITY: Pose = Pose {
        q: Quat::IDENTITY,
        t: DVec3::ZERO,
    };

    pub fn new(q: Quat, t: DVec3) -> Result<Self> {
        if (q.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::validation(format!(
                "pose quaternion is not unit length (norm {})",
                q.norm()
            )));
        }
        Ok(Pose { q, t })
    }

    pub fn rotation(&self) -> DMat3 {
        self.q.to_mat3()
    }
}

/// Camera center in world coordinates: `C = -R^T t`.
pub fn camera_center(pose: &Pose) -> DVec3 {
    -(pose.rotation().transpose() * pose.t)
}

/// One observed 2D point; `point3d_id` is -1 when the point has no
/// triangulated counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
    pub point3d_id: i64,
}

/// One image entry of a COLMAP model.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRecord {
    pub image_id: u32,
    pub pose: Pose,
    pub camera_id: u32,
    pub name: String,
    pub points2d: Vec<Point2D>,
}

impl ImageRecord {
    pub fn new(
        image_id: u32,
        pose: Pose,
        camera_id: u32,
        name: impl Into<String>,
        points2d: Vec<Point2D>,
    ) -> Result<Self> {
        let name = name.into();
        validate_image_name(&name)?;
        if image_id == 0 {
            return Err(Error::validation("image id must be positive"));
        }
        Ok(ImageRecord {
            image_id,
            pose,
            camera_id,
            name,
            points2d,
        })
    }
}

pub fn validate_image_name(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::validation("image name must not be empty"));
    }
    if name.contains('/') || name.contains('\\') {
        return Err(Error::validation(format!(
            "image name `{name}` must not contain path separators"
        )));
    }
    Ok(())
}

/// Checks that every record's camera id resolves against `cams`.
pub fn validate_referential(cams: &[CameraIntrinsics], records: &[ImageRecord]) -> Result<()> {
    let ids: HashSet<u32> = cams.iter().map(|c| c.camera_id).collect();
    for r in records {
        if !ids.contains(&r.camera_id) {
            return Err(Error::integrity(format!(
                "image `{}` references missing camera id {}",
                r.name, r.camera_id
            )));
        }
    }
    Ok(())
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn parse_field<T: std::str::FromStr>(token: &str, what: &str, line_no: usize) -> Result<T> {
    token.parse().map_err(|_| {
        Error::format(format!(
            "line {line_no}: cannot parse {what} from `{token}`"
        ))
    })
}

/// Parses `cameras.txt`. Lines starting with `#` are comments.
pub fn parse_cameras_text(path: impl AsRef<Path>) -> Result<Vec<CameraIntrinsics>> {
    let text = read_to_string(path.as_ref())?;
    parse_cameras_text_str(&text)
}

pub fn parse_cameras_text_str(text: &str) -> Result<Vec<CameraIntrinsics>> {
    let mut cams = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 4 {
            return Err(Error::format(format!(
                "line {line_no}: camera line has {} fields, expected at least 4",
                tokens.len()
            )));
        }
        let camera_id: u32 = parse_field(tokens[0], "camera id", line_no)?;
        let width: u32 = parse_field(tokens[2], "width", line_no)?;
        let height: u32 = parse_field(tokens[3], "height", line_no)?;
        let params: Vec<f64> = tokens[4..]
            .iter()
            .map(|t| parse_field(t, "camera parameter", line_no))
            .collect::<Result<_>>()?;

        let cam = match tokens[1] {
            "SIMPLE_PINHOLE" => {
                if params.len() != 3 {
                    return Err(Error::format(format!(
                        "line {line_no}: SIMPLE_PINHOLE takes 3 params (f, cx, cy), got {}",
                        params.len()
                    )));
                }
                CameraIntrinsics::new(
                    camera_id,
                    CameraModel::SimplePinhole,
                    width,
                    height,
                    params[0],
                    params[0],
                    params[1],
                    params[2],
                )?
            }
            "PINHOLE" => {
                if params.len() != 4 {
                    return Err(Error::format(format!(
                        "line {line_no}: PINHOLE takes 4 params (fx, fy, cx, cy), got {}",
                        params.len()
                    )));
                }
                CameraIntrinsics::new(
                    camera_id,
                    CameraModel::Pinhole,
                    width,
                    height,
                    params[0],
                    params[1],
                    params[2],
                    params[3],
                )?
            }
            other => {
                return Err(Error::format(format!(
                    "line {line_no}: unsupported camera model `{other}`"
                )));
            }
        };
        cams.push(cam);
    }
    Ok(cams)
}

fn quat_from_parsed(w: f64, x: f64, y: f64, z: f64, where_: &str) -> Result<Quat> {
    let q = Quat::new(w, x, y, z);
    let norm = q.norm();
    if (norm - 1.0).abs() > QUAT_NORM_TOL {
        return Err(Error::validation(format!(
            "{where_}: quaternion norm {norm} deviates from 1 by more than {QUAT_NORM_TOL}"
        )));
    }
    // Values already unit to machine precision pass through untouched, so a
    // parse of our own output never perturbs the stored bits.
    if (norm - 1.0).abs() <= 1e-12 {
        Ok(q)
    } else {
        q.normalized()
    }
}

/// Parses `images.txt`. Each record spans two lines: the pose header and a
/// points line that may be empty.
pub fn parse_images_text(path: impl AsRef<Path>) -> Result<Vec<ImageRecord>> {
    let text = read_to_string(path.as_ref())?;
    parse_images_text_str(&text)
}

pub fn parse_images_text_str(text: &str) -> Result<Vec<ImageRecord>> {
    let mut records = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'));

    while let Some((idx, line)) = lines.next() {
        let line_no = idx + 1;
        let header = line.trim();
        if header.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 10 {
            return Err(Error::format(format!(
                "line {line_no}: image header has {} fields, expected 10",
                tokens.len()
            )));
        }
        let image_id: u32 = parse_field(tokens[0], "image id", line_no)?;
        let qw: f64 = parse_field(tokens[1], "qw", line_no)?;
        let qx: f64 = parse_field(tokens[2], "qx", line_no)?;
        let qy: f64 = parse_field(tokens[3], "qy", line_no)?;
        let qz: f64 = parse_field(tokens[4], "qz", line_no)?;
        let tx: f64 = parse_field(tokens[5], "tx", line_no)?;
        let ty: f64 = parse_field(tokens[6], "ty", line_no)?;
        let tz: f64 = parse_field(tokens[7], "tz", line_no)?;
        let camera_id: u32 = parse_field(tokens[8], "camera id", line_no)?;
        let name = tokens[9];

        let q = quat_from_parsed(qw, qx, qy, qz, &format!("line {line_no}"))?;
        let pose = Pose::new(q, DVec3::new(tx, ty, tz))?;

        let (points_idx, points_line) = lines.next().ok_or_else(|| {
            Error::format(format!(
                "line {line_no}: image record is truncated; missing points line"
            ))
        })?;
        let points_no = points_idx + 1;
        let point_tokens: Vec<&str> = points_line.split_whitespace().collect();
        if !point_tokens.len().is_multiple_of(3) {
            return Err(Error::format(format!(
                "line {points_no}: points line has {} fields, expected a multiple of 3",
                point_tokens.len()
            )));
        }
        let mut points2d = Vec::with_capacity(point_tokens.len() / 3);
        for triplet in point_tokens.chunks(3) {
            points2d.push(Point2D {
                x: parse_field(triplet[0], "point x", points_no)?,
                y: parse_field(triplet[1], "point y", points_no)?,
                point3d_id: parse_field(triplet[2], "point3d id", points_no)?,
            });
        }

        records.push(
            ImageRecord::new(image_id, pose, camera_id, name, points2d)
                .map_err(|e| Error::format(format!("line {line_no}: {e}")))?,
        );
    }
    Ok(records)
}

/// Little-endian reader over a byte slice that reports offsets on truncation.
struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        ByteReader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::format(format!(
                "file truncated at byte offset {}: needed {n} more bytes",
                self.buf.len()
            )));
        }
        let slice = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn read_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn read_i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn read_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn read_f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn read_cstr(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.buf.len() && self.buf[self.pos] != 0 {
            self.pos += 1;
        }
        if self.pos == self.buf.len() {
            return Err(Error::format(format!(
                "file truncated at byte offset {}: unterminated string",
                self.pos
            )));
        }
        let s = std::str::from_utf8(&self.buf[start..self.pos])
            .map_err(|_| Error::format(format!("invalid UTF-8 string at byte offset {start}")))?;
        self.pos += 1; // NUL
        Ok(s.to_string())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::format(format!(
                "{} trailing bytes after byte offset {}",
                self.buf.len() - self.pos,
                self.pos
            )));
        }
        Ok(())
    }
}

fn narrow_dimension(v: u64, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::format(format!("{what} {v} does not fit in 32 bits")))
}

/// Parses `cameras.bin`.
pub fn parse_cameras_binary(path: impl AsRef<Path>) -> Result<Vec<CameraIntrinsics>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_cameras_binary_bytes(&bytes)
}

pub fn parse_cameras_binary_bytes(bytes: &[u8]) -> Result<Vec<CameraIntrinsics>> {
    let mut r = ByteReader::new(bytes);
    let count = r.read_u64()?;
    let mut cams = Vec::with_capacity(count.min(1 << 20) as usize);
    for _ in 0..count {
        let camera_id = r.read_u32()?;
        let model = CameraModel::from_id(r.read_i32()?)?;
        let width = narrow_dimension(r.read_u64()?, "camera width")?;
        let height = narrow_dimension(r.read_u64()?, "camera height")?;
        let cam = match model {
            CameraModel::SimplePinhole => {
                let f = r.read_f64()?;
                let cx = r.read_f64()?;
                let cy = r.read_f64()?;
                CameraIntrinsics::new(camera_id, model, width, height, f, f, cx, cy)?
            }
            CameraModel::Pinhole => {
                let fx = r.read_f64()?;
                let fy = r.read_f64()?;
                let cx = r.read_f64()?;
                let cy = r.read_f64()?;
                CameraIntrinsics::new(camera_id, model, width, height, fx, fy, cx, cy)?
            }
        };
        cams.push(cam);
    }
    r.finish()?;
    Ok(cams)
}

/// Parses `images.bin`.
pub fn parse_images_binary(path: impl AsRef<Path>) -> Result<Vec<ImageRecord>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_images_binary_bytes(&bytes)
}

pub fn parse_images_binary_bytes(bytes: &[u8]) -> Result<Vec<ImageRecord>> {
    let mut r = ByteReader::new(bytes);
    let count = r.read_u64()?;
    let mut records = Vec::with_capacity(count.min(1 << 20) as usize);
    for _ in 0..count {
        let image_id = r.read_u32()?;
        let qw = r.read_f64()?;
        let qx = r.read_f64()?;
        let qy = r.read_f64()?;
        let qz = r.read_f64()?;
        let tx = r.read_f64()?;
        let ty = r.read_f64()?;
        let tz = r.read_f64()?;
        let camera_id = r.read_u32()?;
        let name = r.read_cstr()?;
        let num_points = r.read_u64()?;
        let mut points2d = Vec::with_capacity(num_points.min(1 << 24) as usize);
        for _ in 0..num_points {
            let x = r.read_f64()?;
            let y = r.read_f64()?;
            let raw_id = r.read_u64()?;
            let point3d_id = if raw_id == u64::MAX {
                -1
            } else {
                i64::try_from(raw_id)
                    .map_err(|_| Error::format(format!("point3d id {raw_id} out of range")))?
            };
            points2d.push(Point2D { x, y, point3d_id });
        }
        let q = quat_from_parsed(qw, qx, qy, qz, &format!("image id {image_id}"))?;
        let pose = Pose::new(q, DVec3::new(tx, ty, tz))?;
        records.push(ImageRecord::new(image_id, pose, camera_id, name, points2d)?);
    }
    r.finish()?;
    Ok(records)
}

/// Formats a float with 17 significant digits so the f64 value survives a
/// text round-trip exactly.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes cameras to the COLMAP text layout.
pub fn cameras_to_text(cams: &[CameraIntrinsics]) -> String {
    let mut out = String::new();
    out.push_str("# Camera list with one line of data per camera:\n");
    out.push_str("#   CAMERA_ID, MODEL, WIDTH, HEIGHT, PARAMS[]\n");
    let _ = writeln!(out, "# Number of cameras: {}", cams.len());
    for c in cams {
        let params = match c.model {
            CameraModel::SimplePinhole => {
                format!("{} {} {}", fmt_f64(c.fx), fmt_f64(c.cx), fmt_f64(c.cy))
            }
            CameraModel::Pinhole => format!(
                "{} {} {} {}",
                fmt_f64(c.fx),
                fmt_f64(c.fy),
                fmt_f64(c.cx),
                fmt_f64(c.cy)
            ),
        };
        let _ = writeln!(
            out,
            "{} {} {} {} {params}",
            c.camera_id,
            c.model.name(),
            c.width,
            c.height
        );
    }
    out
}

pub fn write_cameras_text(cams: &[CameraIntrinsics], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, cameras_to_text(cams))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Serializes image records to the COLMAP text layout. With
/// `include_points = false` every second line is left empty, which is the
/// form downstream novel-view tooling expects.
pub fn images_to_text(records: &[ImageRecord], include_points: bool) -> String {
    let mut out = String::new();
    out.push_str("# Image list with two lines of data per image:\n");
    out.push_str("#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n");
    out.push_str("#   POINTS2D[] as (X, Y, POINT3D_ID)\n");
    let _ = writeln!(out, "# Number of images: {}", records.len());
    for rec in records {
        let q = rec.pose.q;
        let t = rec.pose.t;
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {} {} {}",
            rec.image_id,
            fmt_f64(q.w),
            fmt_f64(q.x),
            fmt_f64(q.y),
            fmt_f64(q.z),
            fmt_f64(t.x),
            fmt_f64(t.y),
            fmt_f64(t.z),
            rec.camera_id,
            rec.name
        );
        if include_points && !rec.points2d.is_empty() {
            let line: Vec<String> = rec
                .points2d
                .iter()
                .map(|p| format!("{} {} {}", fmt_f64(p.x), fmt_f64(p.y), p.point3d_id))
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        } else {
            out.push('\n');
        }
    }
    out
}

pub fn write_images_text(
    records: &[ImageRecord],
    path: impl AsRef<Path>,
    include_points: bool,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, images_to_text(records, include_points))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Writes `cameras.txt` and `images.txt` into `dir`, enforcing referential
/// integrity between the two.
pub fn write_model_text(
    dir: impl AsRef<Path>,
    cams: &[CameraIntrinsics],
    records: &[ImageRecord],
    include_points: bool,
) -> Result<()> {
    let dir = dir.as_ref();
    validate_referential(cams, records)?;
    fs::create_dir_all(dir)
        .map_err(|e| Error::io(format!("creating model directory {}", dir.display()), e))?;
    write_cameras_text(cams, dir.join("cameras.txt"))?;
    write_images_text(records, dir.join("images.txt"), include_points)
}

/// Reads a text model (`cameras.txt` + `images.txt`) from `dir`.
pub fn read_model_text(dir: impl AsRef<Path>) -> Result<(Vec<CameraIntrinsics>, Vec<ImageRecord>)> {
    let dir = dir.as_ref();
    let cams = parse_cameras_text(dir.join("cameras.txt"))?;
    let records = parse_images_text(dir.join("images.txt"))?;
    validate_referential(&cams, &records)?;
    Ok((cams, records))
}
