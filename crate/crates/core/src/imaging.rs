//! Rasters, decoding, histograms and the pre-processing transforms that feed
//! the measures: Otsu and adaptive binarisation, Sobel edges and
//! coarse-graining to a three-tone raster.
//!
//! Every transform is a pure function of its input raster. Local statistics
//! use windows clipped at the image border; convolutions replicate edge
//! pixels.

use std::path::Path;

use image::DynamicImage;

use crate::error::{Error, Result};

/// 8-bit luminance raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::Parameter(format!(
                "pixel buffer holds {} values, expected {}",
                data.len(),
                width * height
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    /// Photographic negative, `255 - v` per pixel.
    pub fn inverted(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|v| 255 - v).collect(),
        }
    }

    /// Converts any decoded raster to luminance. RGB uses BT.601 weights
    /// rounded to nearest; 16-bit channels are reduced by a right shift of 8;
    /// alpha is ignored.
    pub fn from_dynamic(img: &DynamicImage) -> Result<Self> {
        let width = img.width() as usize;
        let height = img.height() as usize;
        let data = match img {
            DynamicImage::ImageLuma8(buf) => buf.as_raw().clone(),
            DynamicImage::ImageLumaA8(buf) => buf.pixels().map(|p| p.0[0]).collect(),
            DynamicImage::ImageLuma16(buf) => buf.pixels().map(|p| (p.0[0] >> 8) as u8).collect(),
            DynamicImage::ImageLumaA16(buf) => buf.pixels().map(|p| (p.0[0] >> 8) as u8).collect(),
            DynamicImage::ImageRgb8(buf) => buf.pixels().map(|p| bt601(p.0[0], p.0[1], p.0[2])).collect(),
            DynamicImage::ImageRgba8(buf) => buf.pixels().map(|p| bt601(p.0[0], p.0[1], p.0[2])).collect(),
            DynamicImage::ImageRgb16(buf) => buf
                .pixels()
                .map(|p| bt601((p.0[0] >> 8) as u8, (p.0[1] >> 8) as u8, (p.0[2] >> 8) as u8))
                .collect(),
            DynamicImage::ImageRgba16(buf) => buf
                .pixels()
                .map(|p| bt601((p.0[0] >> 8) as u8, (p.0[1] >> 8) as u8, (p.0[2] >> 8) as u8))
                .collect(),
            other => other
                .to_rgb8()
                .pixels()
                .map(|p| bt601(p.0[0], p.0[1], p.0[2]))
                .collect(),
        };
        Self::new(width, height, data)
    }

    /// Luminance of a packed 8-bit RGBA buffer, as produced by a canvas.
    pub fn from_rgba8(width: usize, height: usize, rgba: &[u8]) -> Result<Self> {
        if rgba.len() != width * height * 4 {
            return Err(Error::Parameter(format!(
                "RGBA buffer has {} bytes, expected {} for {width}x{height}",
                rgba.len(),
                width * height * 4
            )));
        }
        Self::new(width, height, rgba.chunks_exact(4).map(|p| bt601(p[0], p[1], p[2])).collect())
    }

    pub fn to_dynamic(&self) -> DynamicImage {
        let buf = image::GrayImage::from_raw(self.width as u32, self.height as u32, self.data.clone())
            .expect("buffer length matches dimensions");
        DynamicImage::ImageLuma8(buf)
    }
}

fn bt601(r: u8, g: u8, b: u8) -> u8 {
    // 0.299 R + 0.587 G + 0.114 B in thousandths, rounded half up.
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8
}

/// Decodes a PNG or JPEG file to luminance.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image(&bytes).map_err(|e| match e {
        Error::Decode { msg, .. } => Error::Decode { path: path.to_path_buf(), msg },
        other => other,
    })
}

/// Decodes an in-memory PNG or JPEG stream to luminance.
pub fn decode_image(bytes: &[u8]) -> Result<GrayImage> {
    let format = image::guess_format(bytes).map_err(|e| Error::Decode {
        path: Default::default(),
        msg: e.to_string(),
    })?;
    if !matches!(format, image::ImageFormat::Png | image::ImageFormat::Jpeg) {
        return Err(Error::Decode {
            path: Default::default(),
            msg: format!("unsupported format {format:?}"),
        });
    }
    let img = image::load_from_memory_with_format(bytes, format).map_err(|e| Error::Decode {
        path: Default::default(),
        msg: e.to_string(),
    })?;
    GrayImage::from_dynamic(&img)
}

/// Two-level raster; 1 marks foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::Parameter(format!(
                "binary raster {width}x{height} with {} values",
                data.len()
            )));
        }
        if data.iter().any(|&v| v > 1) {
            return Err(Error::Parameter("binary raster values must be 0 or 1".into()));
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y) as u8);
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x] == 1
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1).count()
    }
}

/// Output code of coarse-graining.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tone {
    White,
    Grey,
    Black,
}

impl Tone {
    /// Byte used when the raster is serialised for compression.
    pub fn byte(self) -> u8 {
        match self {
            Tone::White => 255,
            Tone::Grey => 128,
            Tone::Black => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryImage {
    width: usize,
    height: usize,
    data: Vec<Tone>,
}

impl TernaryImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[Tone] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> Tone {
        self.data[y * self.width + x]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|t| t.byte()).collect()
    }
}

/// 256-bin luminance histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub bins: [u64; 256],
    pub total: u64,
}

impl Histogram {
    pub fn empty() -> Self {
        Self { bins: [0; 256], total: 0 }
    }

    /// Probability mass of each bin; all zeros for an empty histogram.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        let total = self.total.max(1) as f64;
        self.bins.iter().map(move |&c| c as f64 / total)
    }
}

pub fn luminance_histogram(img: &GrayImage) -> Histogram {
    let mut h = Histogram::empty();
    for &v in img.data() {
        h.bins[v as usize] += 1;
    }
    h.total = img.len() as u64;
    h
}

/// Otsu's threshold: the `t` maximising between-class variance when pixels
/// are split into `v < t` and `v >= t`. Returns `None` when no split has
/// positive variance (constant images). Ties resolve to the smallest `t`.
pub fn otsu_threshold(h: &Histogram) -> Option<u8> {
    if h.total == 0 {
        return None;
    }
    let total = h.total as f64;
    let sum_all: f64 = h.bins.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum();

    let mut best: Option<(u8, f64)> = None;
    let mut count_low = 0u64;
    let mut sum_low = 0f64;
    for t in 1..256usize {
        count_low += h.bins[t - 1];
        sum_low += (t - 1) as f64 * h.bins[t - 1] as f64;
        let count_high = h.total - count_low;
        if count_low == 0 || count_high == 0 {
            continue;
        }
        let w0 = count_low as f64 / total;
        let w1 = count_high as f64 / total;
        let mu0 = sum_low / count_low as f64;
        let mu1 = (sum_all - sum_low) / count_high as f64;
        let between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if between > 0.0 && best.is_none_or(|(_, b)| between > b) {
            best = Some((t as u8, between));
        }
    }
    best.map(|(t, _)| t)
}

/// Global Otsu binarisation. The darker class is foreground (dark forms on a
/// light ground). A constant image yields an all-background raster.
pub fn otsu_binarize(img: &GrayImage) -> BinaryImage {
    let data = match otsu_threshold(&luminance_histogram(img)) {
        Some(t) => img.data().iter().map(|&v| (v < t) as u8).collect(),
        None => vec![0; img.len()],
    };
    BinaryImage { width: img.width, height: img.height, data }
}

/// Summed-area table with a zero first row and column.
struct Integral {
    stride: usize,
    sums: Vec<u64>,
}

impl Integral {
    fn new(width: usize, height: usize, value: impl Fn(usize) -> u64) -> Self {
        let stride = width + 1;
        let mut sums = vec![0u64; stride * (height + 1)];
        for y in 0..height {
            let mut row = 0u64;
            for x in 0..width {
                row += value(y * width + x);
                sums[(y + 1) * stride + x + 1] = sums[y * stride + x + 1] + row;
            }
        }
        Self { stride, sums }
    }

    /// Sum over the half-open rectangle `[x0, x1) x [y0, y1)`.
    fn sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> u64 {
        let s = self.stride;
        self.sums[y1 * s + x1] + self.sums[y0 * s + x0] - self.sums[y0 * s + x1] - self.sums[y1 * s + x0]
    }
}

/// Clipped `(2r+1)^2` window around `(x, y)` as half-open bounds.
fn window(x: usize, y: usize, r: usize, width: usize, height: usize) -> (usize, usize, usize, usize) {
    (
        x.saturating_sub(r),
        y.saturating_sub(r),
        (x + r + 1).min(width),
        (y + r + 1).min(height),
    )
}

/// Local-mean binarisation: a pixel becomes 1 when its value strictly
/// exceeds the mean of its clipped `(2r+1)^2` neighbourhood.
pub fn adaptive_binarize(img: &GrayImage, r: usize) -> Result<BinaryImage> {
    let (w, h) = (img.width, img.height);
    if r < 1 || r >= w.min(h) {
        return Err(Error::Parameter(format!(
            "adaptive radius {r} must be in [1, {})",
            w.min(h)
        )));
    }
    let integral = Integral::new(w, h, |i| img.data[i] as u64);
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (x0, y0, x1, y1) = window(x, y, r, w, h);
            let n = ((x1 - x0) * (y1 - y0)) as u64;
            let sum = integral.sum(x0, y0, x1, y1);
            // v > sum / n without rounding
            data.push((img.get(x, y) as u64 * n > sum) as u8);
        }
    }
    Ok(BinaryImage { width: w, height: h, data })
}

/// Sobel gradient magnitude on intensities scaled to [0, 1], clamped to 1 and
/// requantised to 8 bits. Borders replicate the nearest edge pixel.
pub fn sobel_magnitude(img: &GrayImage) -> Result<GrayImage> {
    let (w, h) = (img.width, img.height);
    if w < 3 || h < 3 {
        return Err(Error::Parameter(format!(
            "Sobel needs at least 3x3 pixels, got {w}x{h}"
        )));
    }
    let px = |x: isize, y: isize| -> f64 {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        img.get(xc, yc) as f64 / 255.0
    };
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1))
                - (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
            let gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1))
                - (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
            let mag = (gx * gx + gy * gy).sqrt().min(1.0);
            data.push((mag * 255.0).round() as u8);
        }
    }
    GrayImage::new(w, h, data)
}

/// Coarse-grains a binary raster: for each pixel the foreground ratio `eta`
/// of its clipped `(2 r_cg + 1)^2` window is mapped to white
/// (`eta <= delta`), grey (`delta < eta <= 1 - delta`) or black.
pub fn coarse_grain_binary(bin: &BinaryImage, r_cg: usize, delta: f64) -> Result<TernaryImage> {
    if r_cg < 1 {
        return Err(Error::Parameter("coarse-grain radius must be at least 1".into()));
    }
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::Parameter(format!("delta {delta} outside [0, 0.5]")));
    }
    let (w, h) = (bin.width, bin.height);
    let integral = Integral::new(w, h, |i| bin.data[i] as u64);
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (x0, y0, x1, y1) = window(x, y, r_cg, w, h);
            let n = ((x1 - x0) * (y1 - y0)) as f64;
            let eta = integral.sum(x0, y0, x1, y1) as f64 / n;
            data.push(if eta <= delta {
                Tone::White
            } else if eta <= 1.0 - delta {
                Tone::Grey
            } else {
                Tone::Black
            });
        }
    }
    Ok(TernaryImage { width: w, height: h, data })
}

/// Otsu-binarises `img`, then coarse-grains the result.
pub fn coarse_grain(img: &GrayImage, r_cg: usize, delta: f64) -> Result<TernaryImage> {
    coarse_grain_binary(&otsu_binarize(img), r_cg, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn png_bytes(img: DynamicImage) -> Vec<u8> {
        let mut out = std::io::Cursor::new(Vec::new());
        img.write_to(&mut out, image::ImageFormat::Png).unwrap();
        out.into_inner()
    }

    #[test]
    fn load_white_rgb_png() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("white.png");
        let rgb = image::RgbImage::from_pixel(2, 2, image::Rgb([255, 255, 255]));
        std::fs::write(&path, png_bytes(DynamicImage::ImageRgb8(rgb))).unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.data(), &[255, 255, 255, 255]);
    }

    #[test]
    fn load_red_pixel_uses_bt601() {
        let rgb = image::RgbImage::from_pixel(1, 1, image::Rgb([255, 0, 0]));
        let img = decode_image(&png_bytes(DynamicImage::ImageRgb8(rgb))).unwrap();
        assert_eq!(img.data(), &[76]);
    }

    #[test]
    fn sixteen_bit_png_is_shifted() {
        let buf = image::ImageBuffer::<image::Luma<u16>, _>::from_raw(2, 1, vec![0xffffu16, 0x1234]).unwrap();
        let img = decode_image(&png_bytes(DynamicImage::ImageLuma16(buf))).unwrap();
        assert_eq!(img.data(), &[0xff, 0x12]);
    }

    #[test]
    fn load_errors_are_distinct() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.png");
        assert!(matches!(load_image(&missing), Err(Error::NotFound(p)) if p == missing));

        let text = dir.path().join("notes.png");
        std::fs::write(&text, "just some text").unwrap();
        match load_image(&text) {
            Err(Error::Decode { path, .. }) => assert_eq!(path, text),
            other => panic!("expected decode error, got {other:?}"),
        }
    }

    #[test]
    fn histogram_counts() {
        let img = GrayImage::filled(4, 4, 7).unwrap();
        let h = luminance_histogram(&img);
        assert_eq!(h.bins[7], 16);
        assert_eq!(h.bins.iter().sum::<u64>(), 16);

        let img = GrayImage::new(2, 1, vec![0, 255]).unwrap();
        let h = luminance_histogram(&img);
        assert_eq!((h.bins[0], h.bins[255], h.total), (1, 1, 2));

        let big = GrayImage::filled(512, 512, 3).unwrap();
        assert_eq!(luminance_histogram(&big).total, 262_144);
    }

    #[test]
    fn otsu_two_level_and_constant() {
        let img = GrayImage::from_fn(8, 8, |x, _| if x < 4 { 0 } else { 255 }).unwrap();
        let bin = otsu_binarize(&img);
        for y in 0..8 {
            for x in 0..8 {
                assert_eq!(bin.get(x, y), x < 4);
            }
        }
        let flat = GrayImage::filled(5, 5, 90).unwrap();
        assert_eq!(otsu_binarize(&flat).foreground_count(), 0);
    }

    #[test]
    fn otsu_ramp_matches_brute_force() {
        let img = GrayImage::from_fn(256, 4, |x, _| x as u8).unwrap();
        // Oracle: between-class variance evaluated straight from the pixels.
        let px: Vec<f64> = img.data().iter().map(|&v| v as f64).collect();
        let mut best = (0usize, -1.0f64);
        for t in 1..256 {
            let (lo, hi): (Vec<f64>, Vec<f64>) = px.iter().partition(|&&v| v < t as f64);
            if lo.is_empty() || hi.is_empty() {
                continue;
            }
            let m0 = lo.iter().sum::<f64>() / lo.len() as f64;
            let m1 = hi.iter().sum::<f64>() / hi.len() as f64;
            let w0 = lo.len() as f64 / px.len() as f64;
            let var = w0 * (1.0 - w0) * (m0 - m1).powi(2);
            if var > best.1 {
                best = (t, var);
            }
        }
        let t = otsu_threshold(&luminance_histogram(&img)).unwrap() as usize;
        assert_eq!(t, best.0);
        assert!((120..=136).contains(&t), "threshold {t}");
    }

    #[test]
    fn adaptive_cases() {
        let flat = GrayImage::filled(10, 10, 200).unwrap();
        assert_eq!(adaptive_binarize(&flat, 3).unwrap().foreground_count(), 0);

        let spot = GrayImage::from_fn(9, 9, |x, y| if (x, y) == (4, 4) { 255 } else { 0 }).unwrap();
        let bin = adaptive_binarize(&spot, 2).unwrap();
        assert_eq!(bin.foreground_count(), 1);
        assert!(bin.get(4, 4));

        // Every 3x3 window (clipped or not) of a 0/255 checkerboard has a mean
        // strictly between 0 and 255, so bright pixels map to 1 and dark to 0.
        let checker = GrayImage::from_fn(6, 6, |x, y| if (x + y) % 2 == 0 { 255 } else { 0 }).unwrap();
        let bin = adaptive_binarize(&checker, 1).unwrap();
        for y in 0..6 {
            for x in 0..6 {
                assert_eq!(bin.get(x, y), (x + y) % 2 == 0);
            }
        }

        assert!(matches!(adaptive_binarize(&flat, 10), Err(Error::Parameter(_))));
        assert!(matches!(adaptive_binarize(&flat, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn sobel_constant_and_step() {
        let flat = GrayImage::filled(6, 6, 128).unwrap();
        assert!(sobel_magnitude(&flat).unwrap().data().iter().all(|&v| v == 0));

        let step = GrayImage::from_fn(10, 5, |x, _| if x < 5 { 0 } else { 255 }).unwrap();
        let edges = sobel_magnitude(&step).unwrap();
        for y in 0..5 {
            assert_eq!(edges.get(4, y), 255);
            assert_eq!(edges.get(5, y), 255);
            assert_eq!(edges.get(0, y), 0);
            assert_eq!(edges.get(9, y), 0);
        }

        let tiny = GrayImage::filled(2, 5, 0).unwrap();
        assert!(matches!(sobel_magnitude(&tiny), Err(Error::Parameter(_))));
    }

    #[test]
    fn sobel_diagonal_components_match() {
        // Lower-left triangle bright. On the anti-symmetric diagonal the two
        // kernel responses have equal magnitude: at (3,3) with the kernels
        // evaluated by hand, |Gx| = |Gy| = 1 (in [0,1] units), giving sqrt(2)
        // which clamps to 1.
        let img = GrayImage::from_fn(8, 8, |x, y| if x < y { 255 } else { 0 }).unwrap();
        let p = |x: usize, y: usize| img.get(x, y) as f64 / 255.0;
        let (x, y) = (3, 3);
        let gx = (p(x + 1, y - 1) + 2.0 * p(x + 1, y) + p(x + 1, y + 1))
            - (p(x - 1, y - 1) + 2.0 * p(x - 1, y) + p(x - 1, y + 1));
        let gy = (p(x - 1, y + 1) + 2.0 * p(x, y + 1) + p(x + 1, y + 1))
            - (p(x - 1, y - 1) + 2.0 * p(x, y - 1) + p(x + 1, y - 1));
        assert_eq!(gx.abs(), gy.abs());
        assert_eq!((gx, gy), (-3.0, 3.0));
        assert_eq!(sobel_magnitude(&img).unwrap().get(3, 3), 255);
    }

    #[test]
    fn coarse_grain_extremes() {
        let blank = GrayImage::filled(20, 20, 255).unwrap();
        let t = coarse_grain(&blank, 5, 0.23).unwrap();
        assert!(t.data().iter().all(|&c| c == Tone::White));

        let full = BinaryImage::from_fn(20, 20, |_, _| true).unwrap();
        let t = coarse_grain_binary(&full, 5, 0.23).unwrap();
        assert!(t.data().iter().all(|&c| c == Tone::Black));

        assert!(matches!(coarse_grain(&blank, 5, 0.6), Err(Error::Parameter(_))));
        assert!(matches!(coarse_grain(&blank, 5, -0.1), Err(Error::Parameter(_))));
    }

    #[test]
    fn coarse_grain_half_plane_band() {
        // Dark left half on light right half.
        let (w, h, r) = (40usize, 30usize, 5usize);
        let img = GrayImage::from_fn(w, h, |x, _| if x < 20 { 0 } else { 255 }).unwrap();
        let t = coarse_grain(&img, r, 0.23).unwrap();
        for y in 0..h {
            for x in 0..w {
                // Oracle: count dark pixels in the clipped window directly.
                let (x0, x1) = (x.saturating_sub(r), (x + r + 1).min(w));
                let (y0, y1) = (y.saturating_sub(r), (y + r + 1).min(h));
                let mut dark = 0;
                for _ in y0..y1 {
                    for xx in x0..x1 {
                        dark += (xx < 20) as usize;
                    }
                }
                let eta = dark as f64 / ((x1 - x0) * (y1 - y0)) as f64;
                let expected = if eta <= 0.23 {
                    Tone::White
                } else if eta <= 0.77 {
                    Tone::Grey
                } else {
                    Tone::Black
                };
                assert_eq!(t.get(x, y), expected, "({x},{y})");
                let dist = if x < 20 { 20 - x } else { x - 19 };
                if dist > r {
                    assert_ne!(t.get(x, y), Tone::Grey);
                    assert_eq!(t.get(x, y), if x < 20 { Tone::Black } else { Tone::White });
                }
            }
        }
        assert!(t.data().iter().any(|&c| c == Tone::Grey));
    }

    #[test]
    fn rgba_buffer_matches_decoded_path() {
        let rgba: Vec<u8> = (0..4 * 6).map(|k| (k * 37 % 256) as u8).collect();
        let direct = GrayImage::from_rgba8(2, 3, &rgba).unwrap();
        let buf = image::RgbaImage::from_raw(2, 3, rgba.clone()).unwrap();
        assert_eq!(direct, GrayImage::from_dynamic(&DynamicImage::ImageRgba8(buf)).unwrap());
        assert!(GrayImage::from_rgba8(2, 2, &rgba).is_err());
    }
}
