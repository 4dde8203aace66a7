//! Full-reference image quality metrics (windowed SSIM, PSNR) and
//! USAF-1951 resolution-chart arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::dataset::load_png;
use crate::error::{Error, Result};
use crate::render::ImageBuffer;

/// SSIM parameters: stabilizers `K1`/`K2`, pixel dynamic range `L`, and the
/// Gaussian window shape.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    /// Dynamic range of pixel values; 1.0 for float buffers.
    pub l: f64,
    /// Window half-width in pixels; 5 gives the standard 11x11 window.
    pub window_radius: usize,
    /// Gaussian sigma of the window, pixels.
    pub sigma: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            k1: 0.01,
            k2: 0.03,
            l: 1.0,
            window_radius: 5,
            sigma: 1.5,
        }
    }
}

impl SsimParams {
    fn c1(&self) -> f64 {
        (self.k1 * self.l) * (self.k1 * self.l)
    }

    fn c2(&self) -> f64 {
        (self.k2 * self.l) * (self.k2 * self.l)
    }

    /// Normalized 1D window weights (the 2D window is the outer product, so
    /// its weights also sum to 1).
    fn window(&self) -> Vec<f64> {
        let r = self.window_radius as isize;
        let mut w: Vec<f64> = (-r..=r)
            .map(|i| (-((i * i) as f64) / (2.0 * self.sigma * self.sigma)).exp())
            .collect();
        let sum: f64 = w.iter().sum();
        for v in &mut w {
            *v /= sum;
        }
        w
    }
}

/// Mirrors an index into `[0, n)` with edge duplication (…2,1,0,0,1,2…).
fn mirror(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

/// Separable convolution of one channel plane with the window, symmetric
/// borders.
fn filter_plane(plane: &[f64], width: usize, height: usize, window: &[f64]) -> Vec<f64> {
    let r = (window.len() / 2) as isize;
    let mut horizontal = vec![0.0f64; plane.len()];
    for y in 0..height {
        let row = &plane[y * width..(y + 1) * width];
        for x in 0..width {
            let mut acc = 0.0;
            for (k, w) in window.iter().enumerate() {
                let sx = mirror(x as isize + k as isize - r, width);
                acc += w * row[sx];
            }
            horizontal[y * width + x] = acc;
        }
    }
    let mut out = vec![0.0f64; plane.len()];
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for (k, w) in window.iter().enumerate() {
                let sy = mirror(y as isize + k as isize - r, height);
                acc += w * horizontal[sy * width + x];
            }
            out[y * width + x] = acc;
        }
    }
    out
}

fn channel_plane(img: &ImageBuffer, channel: usize) -> Vec<f64> {
    img.pixels
        .chunks_exact(3)
        .map(|px| px[channel] as f64)
        .collect()
}

fn check_dims(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::validation(format!(
            "image dimensions differ: {}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    if a.width == 0 || a.height == 0 {
        return Err(Error::validation("cannot compare zero-size images"));
    }
    Ok(())
}

/// Mean windowed SSIM over all pixels and channels.
///
/// Local means, variances, and covariance are taken under a Gaussian window
/// at every pixel with symmetric-reflected borders; the per-pixel index uses
/// the usual two-term form with `C1 = (K1 L)^2`, `C2 = (K2 L)^2`. On
/// constant images this reduces to the global formula.
pub fn ssim(a: &ImageBuffer, b: &ImageBuffer, p: &SsimParams) -> Result<f64> {
    check_dims(a, b)?;
    let (w, h) = (a.width as usize, a.height as usize);
    let window = p.window();
    let (c1, c2) = (p.c1(), p.c2());

    let mut total = 0.0f64;
    for ch in 0..3 {
        let pa = channel_plane(a, ch);
        let pb = channel_plane(b, ch);
        let mu_a = filter_plane(&pa, w, h, &window);
        let mu_b = filter_plane(&pb, w, h, &window);
        let aa: Vec<f64> = pa.iter().map(|v| v * v).collect();
        let bb: Vec<f64> = pb.iter().map(|v| v * v).collect();
        let ab: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
        let m_aa = filter_plane(&aa, w, h, &window);
        let m_bb = filter_plane(&bb, w, h, &window);
        let m_ab = filter_plane(&ab, w, h, &window);

        let mut channel_sum = 0.0f64;
        for i in 0..w * h {
            let var_a = m_aa[i] - mu_a[i] * mu_a[i];
            let var_b = m_bb[i] - mu_b[i] * mu_b[i];
            let cov = m_ab[i] - mu_a[i] * mu_b[i];
            let num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
            let den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
            channel_sum += num / den;
        }
        total += channel_sum / (w * h) as f64;
    }
    Ok(total / 3.0)
}

/// Peak signal-to-noise ratio; identical images have no noise power and
/// report the infinite marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Db(f64),
    Infinite,
}

impl Psnr {
    pub fn db(&self) -> Option<f64> {
        match self {
            Psnr::Db(v) => Some(*v),
            Psnr::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Psnr::Infinite)
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Db(v) => write!(f, "{v:.6}"),
            Psnr::Infinite => write!(f, "inf"),
        }
    }
}

/// `10 log10(R^2 / MSE)` with the mean squared error taken over all pixels
/// and channels.
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer, r: f64) -> Result<Psnr> {
    check_dims(a, b)?;
    if !(r > 0.0) {
        return Err(Error::validation("psnr dynamic range must be positive"));
    }
    let mut sum = 0.0f64;
    for (x, y) in a.pixels.iter().zip(&b.pixels) {
        let d = *x as f64 - *y as f64;
        sum += d * d;
    }
    let mse = sum / a.pixels.len() as f64;
    if mse == 0.0 {
        return Ok(Psnr::Infinite);
    }
    Ok(Psnr::Db(10.0 * (r * r / mse).log10()))
}

/// A group/element position on the USAF-1951 chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UsafReading {
    pub group: i32,
    /// Element within the group, 1 through 6.
    pub element: i32,
}

/// Chart resolution in line pairs per millimeter:
/// `2^(group + (element - 1) / 6)`.
///
/// The group factor is applied as an exact power of two, so stepping the
/// group doubles the reading exactly.
pub fn usaf_lp_per_mm(r: UsafReading) -> Result<f64> {
    if !(1..=6).contains(&r.element) {
        return Err(Error::validation(format!(
            "usaf element {} outside 1..=6",
            r.element
        )));
    }
    Ok(2f64.powi(r.group) * 2f64.powf((r.element - 1) as f64 / 6.0))
}

/// Conventional limiting-resolution contrast floor; charts are judged
/// visually, so the threshold stays caller-adjustable.
pub const DEFAULT_BAR_THRESHOLD: f64 = 0.1;

/// Michelson contrast of a bar-pattern intensity profile and whether the
/// three-bar pattern counts as resolved.
///
/// Peaks and valleys are the interior local extrema (plateaus collapse to
/// one extremum). The pattern is resolvable when exactly three peaks are
/// present and the contrast clears `threshold`. A flat profile yields zero
/// contrast rather than an error.
pub fn bar_contrast_resolvable(profile: &[f64], threshold: f64) -> Result<(f64, bool)> {
    if profile.len() < 7 {
        return Err(Error::validation(format!(
            "profile needs at least 7 samples (three bars and gaps), got {}",
            profile.len()
        )));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::validation(format!(
            "threshold {threshold} outside (0, 1)"
        )));
    }
    if profile.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("profile contains non-finite samples"));
    }

    let max = profile.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = profile.iter().cloned().fold(f64::INFINITY, f64::min);
    if max - min < 1e-6 {
        return Ok((0.0, false));
    }

    // Run-length compress so plateaus count once.
    let mut runs: Vec<f64> = Vec::with_capacity(profile.len());
    for &v in profile {
        if runs.last() != Some(&v) {
            runs.push(v);
        }
    }

    let mut peaks: Vec<f64> = Vec::new();
    let mut valleys: Vec<f64> = Vec::new();
    for i in 1..runs.len().saturating_sub(1) {
        if runs[i] > runs[i - 1] && runs[i] > runs[i + 1] {
            peaks.push(runs[i]);
        } else if runs[i] < runs[i - 1] && runs[i] < runs[i + 1] {
            valleys.push(runs[i]);
        }
    }
    if peaks.is_empty() || valleys.is_empty() {
        return Ok((0.0, false));
    }

    let peak = peaks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let valley = valleys.iter().cloned().fold(f64::INFINITY, f64::min);
    if peak + valley <= 0.0 {
        return Ok((0.0, false));
    }
    let contrast = (peak - valley) / (peak + valley);
    Ok((contrast, peaks.len() == 3 && contrast >= threshold))
}

/// Per-image metric scores. The `lpips` column is never filled by this
/// crate; it exists so externally computed values can be merged into
/// reports.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub name: String,
    pub ssim: f64,
    pub psnr: Psnr,
    pub lpips: Option<f64>,
}

/// Scores for a pair of image directories, plus their means.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub rows: Vec<MetricRow>,
    pub mean_ssim: f64,
    pub mean_psnr: Psnr,
    /// Names present on only one side, excluded from the means.
    pub warnings: Vec<String>,
}

impl MetricsReport {
    pub fn from_rows(rows: Vec<MetricRow>, warnings: Vec<String>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::validation("no image pairs to compare"));
        }
        let n = rows.len() as f64;
        let mean_ssim = rows.iter().map(|r| r.ssim).sum::<f64>() / n;
        let mean_psnr = if rows.iter().any(|r| r.psnr.is_infinite()) {
            Psnr::Infinite
        } else {
            Psnr::Db(rows.iter().filter_map(|r| r.psnr.db()).sum::<f64>() / n)
        };
        Ok(MetricsReport {
            rows,
            mean_ssim,
            mean_psnr,
            warnings,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,ssim,psnr_db,lpips\n");
        let lpips_cell = |l: &Option<f64>| l.map(|v| format!("{v:.6}")).unwrap_or_default();
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:.6},{},{}\n",
                row.name,
                row.ssim,
                row.psnr,
                lpips_cell(&row.lpips)
            ));
        }
        out.push_str(&format!("mean,{:.6},{},\n", self.mean_ssim, self.mean_psnr));
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv())
            .map_err(|e| Error::io(format!("writing report {}", path.display()), e))
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<32} {:>10} {:>12}", "name", "ssim", "psnr_db")?;
        for row in &self.rows {
            writeln!(f, "{:<32} {:>10.6} {:>12}", row.name, row.ssim, row.psnr)?;
        }
        writeln!(
            f,
            "{:<32} {:>10.6} {:>12}",
            "mean", self.mean_ssim, self.mean_psnr
        )?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

fn list_pngs(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    let entries = fs::read_dir(dir)
        .map_err(|e| Error::io(format!("listing directory {}", dir.display()), e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io("reading directory entry".to_string(), e))?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let is_png = path
            .extension()
            .map(|e| e.eq_ignore_ascii_case("png"))
            .unwrap_or(false);
        if !is_png {
            continue;
        }
        if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
            out.insert(name.to_string(), path.clone());
        }
    }
    Ok(out)
}

/// Compares two directories of PNGs pair-wise by file name.
///
/// Unmatched names are reported as warnings and excluded from the means.
pub fn compare_image_sets(
    ref_dir: impl AsRef<Path>,
    test_dir: impl AsRef<Path>,
    params: &SsimParams,
    psnr_range: f64,
) -> Result<MetricsReport> {
    let ref_dir = ref_dir.as_ref();
    let test_dir = test_dir.as_ref();
    let refs = list_pngs(ref_dir)?;
    let tests = list_pngs(test_dir)?;

    let mut warnings = Vec::new();
    for name in refs.keys() {
        if !tests.contains_key(name) {
            warnings.push(format!("`{name}` only in {}", ref_dir.display()));
        }
    }
    for name in tests.keys() {
        if !refs.contains_key(name) {
            warnings.push(format!("`{name}` only in {}", test_dir.display()));
        }
    }

    let pairs: Vec<(&String, &PathBuf, &PathBuf)> = refs
        .iter()
        .filter_map(|(name, rp)| tests.get(name).map(|tp| (name, rp, tp)))
        .collect();
    if pairs.is_empty() {
        return Err(Error::validation(format!(
            "no matching image names between {} and {}",
            ref_dir.display(),
            test_dir.display()
        )));
    }

    let score = |(name, rp, tp): &(&String, &PathBuf, &PathBuf)| -> Result<MetricRow> {
        let a = load_png(rp)?;
        let b = load_png(tp)?;
        let row = MetricRow {
            name: (*name).clone(),
            ssim: ssim(&a, &b, params).map_err(|e| Error::validation(format!("`{name}`: {e}")))?,
            psnr: psnr(&a, &b, psnr_range)
                .map_err(|e| Error::validation(format!("`{name}`: {e}")))?,
            lpips: None,
        };
        Ok(row)
    };

    #[cfg(feature = "parallel")]
    let rows: Result<Vec<MetricRow>> = pairs.par_iter().map(score).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<MetricRow>> = pairs.iter().map(score).collect();

    MetricsReport::from_rows(rows?, warnings)
}
