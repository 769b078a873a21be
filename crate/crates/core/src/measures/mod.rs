//! Per-image complexity and aesthetic measures.
//!
//! | name     | quantity                                                     |
//! |----------|--------------------------------------------------------------|
//! | `S`      | luminance-histogram entropy, natural log                     |
//! | `E`      | histogram energy, sum of squared bin probabilities           |
//! | `T`      | boundary curves after Otsu binarisation (components + holes) |
//! | `gamma`  | Euler number after Otsu binarisation                         |
//! | `C_a`    | LZW compressed size / pixel count                            |
//! | `C_s`    | `C_a` of the coarse-grained three-tone raster                |
//! | `C_mc`   | JPEG RMS error x compressed size / raw size                  |
//! | `C_mc_E` | `C_mc` of the Sobel magnitude image                          |
//! | `D`      | box-counting dimension after adaptive binarisation           |
//! | `D_a`    | Gaussian preference curve over `D`                           |
//! | `S_k`    | luminance skewness                                           |

pub mod lzw;
pub mod topology;

use std::fmt;
use std::str::FromStr;

use image::codecs::jpeg::JpegEncoder;
use image::ExtendedColorType;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{
    adaptive_binarize, coarse_grain, luminance_histogram, otsu_binarize, sobel_magnitude, BinaryImage,
    GrayImage, Histogram,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    /// Adaptive binarisation radius used before box counting.
    pub r_adapt: usize,
    /// Coarse-graining radius for `C_s`.
    pub r_cg: usize,
    /// Coarse-graining ratio threshold, in `[0, 0.5]`.
    pub delta: f64,
    /// JPEG quality in `(0, 1]`; 0.75 maps to the familiar quality 75.
    pub jpeg_quality: f64,
    /// Peak of the fractal preference curve.
    pub peak: f64,
    /// Width of the fractal preference curve.
    pub sigma: f64,
    /// Smallest box edge in pixels.
    pub box_min: usize,
    /// Largest box edge as a fraction of the shorter image side.
    pub box_max_frac: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            r_adapt: 2,
            r_cg: 5,
            delta: 0.23,
            jpeg_quality: 0.75,
            peak: 1.35,
            sigma: 0.2,
            box_min: 2,
            box_max_frac: 0.25,
        }
    }
}

impl MeasureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if self.r_adapt < 1 || self.r_cg < 1 {
            return bad(format!("radii must be >= 1 (r_adapt={}, r_cg={})", self.r_adapt, self.r_cg));
        }
        if !(0.0..=0.5).contains(&self.delta) {
            return bad(format!("delta {} outside [0, 0.5]", self.delta));
        }
        if !(self.jpeg_quality > 0.0 && self.jpeg_quality <= 1.0) {
            return bad(format!("jpeg_quality {} outside (0, 1]", self.jpeg_quality));
        }
        if !(self.sigma > 0.0) || !self.peak.is_finite() {
            return bad(format!("preference curve needs sigma > 0 (sigma={})", self.sigma));
        }
        if self.box_min < 2 {
            return bad(format!("box_min {} must be >= 2", self.box_min));
        }
        if !(self.box_max_frac > 0.0 && self.box_max_frac <= 1.0) {
            return bad(format!("box_max_frac {} outside (0, 1]", self.box_max_frac));
        }
        Ok(())
    }
}

/// Identifies one measure; also the CSV column name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Entropy,
    Energy,
    Contours,
    Euler,
    Algorithmic,
    Structural,
    MachadoCardoso,
    MachadoCardosoEdge,
    Fractal,
    FractalAesthetic,
    Skew,
}

impl Measure {
    pub const ALL: [Measure; 11] = [
        Measure::Entropy,
        Measure::Energy,
        Measure::Contours,
        Measure::Euler,
        Measure::Algorithmic,
        Measure::Structural,
        Measure::MachadoCardoso,
        Measure::MachadoCardosoEdge,
        Measure::Fractal,
        Measure::FractalAesthetic,
        Measure::Skew,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Entropy => "S",
            Measure::Energy => "E",
            Measure::Contours => "T",
            Measure::Euler => "gamma",
            Measure::Algorithmic => "C_a",
            Measure::Structural => "C_s",
            Measure::MachadoCardoso => "C_mc",
            Measure::MachadoCardosoEdge => "C_mc_E",
            Measure::Fractal => "D",
            Measure::FractalAesthetic => "D_a",
            Measure::Skew => "S_k",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Parameter(format!("unknown measure '{s}'")))
    }
}

/// All measures for one image. `None` marks a measure that was not requested
/// or could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeasureVector {
    pub entropy: Option<f64>,
    pub energy: Option<f64>,
    pub contours: Option<u64>,
    pub euler: Option<i64>,
    pub algorithmic: Option<f64>,
    pub structural: Option<f64>,
    pub machado_cardoso: Option<f64>,
    pub machado_cardoso_edge: Option<f64>,
    pub fractal: Option<f64>,
    pub fractal_aesthetic: Option<f64>,
    pub skew: Option<f64>,
}

impl MeasureVector {
    pub fn get(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::Entropy => self.entropy,
            Measure::Energy => self.energy,
            Measure::Contours => self.contours.map(|v| v as f64),
            Measure::Euler => self.euler.map(|v| v as f64),
            Measure::Algorithmic => self.algorithmic,
            Measure::Structural => self.structural,
            Measure::MachadoCardoso => self.machado_cardoso,
            Measure::MachadoCardosoEdge => self.machado_cardoso_edge,
            Measure::Fractal => self.fractal,
            Measure::FractalAesthetic => self.fractal_aesthetic,
            Measure::Skew => self.skew,
        }
    }
}

/// A measure that failed inside [`measure_all`].
#[derive(Debug)]
pub struct MeasureFailure {
    pub measure: Measure,
    pub error: Error,
}

#[derive(Debug)]
pub struct MeasureReport {
    pub values: MeasureVector,
    pub failures: Vec<MeasureFailure>,
}

impl MeasureReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

fn require_pixels(h: &Histogram) -> Result<f64> {
    if h.total == 0 {
        Err(Error::Parameter("histogram is empty".into()))
    } else {
        Ok(h.total as f64)
    }
}

/// Shannon entropy of the luminance histogram in nats.
pub fn entropy(h: &Histogram) -> Result<f64> {
    require_pixels(h)?;
    Ok(-h.probabilities().filter(|&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>())
}

/// Histogram energy, `sum p_k^2`.
pub fn energy(h: &Histogram) -> Result<f64> {
    require_pixels(h)?;
    Ok(h.probabilities().map(|p| p * p).sum())
}

/// Number of boundary curves: foreground components plus enclosed holes.
pub fn contours(img: &GrayImage) -> u64 {
    let bin = otsu_binarize(img);
    let components = topology::count_components(&bin) as i64;
    let euler = topology::euler_bit_quads(&bin);
    (2 * components - euler) as u64
}

/// Euler number of the Otsu binarisation.
pub fn euler_number(img: &GrayImage) -> i64 {
    topology::euler_bit_quads(&otsu_binarize(img))
}

fn lzw_ratio(bytes: &[u8]) -> Result<f64> {
    Ok(lzw::encode(bytes)?.len() as f64 / bytes.len() as f64)
}

/// LZW compressed bytes per pixel of the raw luminance buffer.
pub fn algorithmic_complexity(img: &GrayImage) -> Result<f64> {
    lzw_ratio(img.data())
}

/// LZW compressed bytes per pixel of the coarse-grained raster.
pub fn structural_complexity(img: &GrayImage, cfg: &MeasureConfig) -> Result<f64> {
    let coarse = coarse_grain(img, cfg.r_cg, cfg.delta)?;
    lzw_ratio(&coarse.to_bytes())
}

/// Baseline JPEG encode followed by decode; returns the stream length and the
/// reconstruction.
pub fn jpeg_round_trip(img: &GrayImage, quality: f64) -> Result<(usize, GrayImage)> {
    let q = (quality * 100.0).round().clamp(1.0, 100.0) as u8;
    let mut stream = Vec::new();
    JpegEncoder::new_with_quality(&mut stream, q)
        .encode(img.data(), img.width() as u32, img.height() as u32, ExtendedColorType::L8)
        .map_err(|e| Error::Encoding(e.to_string()))?;
    let decoded = image::load_from_memory_with_format(&stream, image::ImageFormat::Jpeg)
        .map_err(|e| Error::Encoding(e.to_string()))?;
    let recon = GrayImage::from_dynamic(&decoded)?;
    if recon.width() != img.width() || recon.height() != img.height() {
        return Err(Error::Encoding("JPEG reconstruction changed dimensions".into()));
    }
    Ok((stream.len(), recon))
}

/// `RMS(i, f(i)) * s(f(i)) / s(i)` with `f` a JPEG round trip, RMS taken on
/// intensities in `[0, 1]`, `s(f(i))` the JPEG stream length and `s(i)` the
/// raw 8-bit buffer length. With `edge` set the input is first replaced by
/// its Sobel magnitude.
pub fn machado_cardoso(img: &GrayImage, cfg: &MeasureConfig, edge: bool) -> Result<f64> {
    let edges;
    let source = if edge {
        edges = sobel_magnitude(img)?;
        &edges
    } else {
        img
    };
    let (compressed, recon) = jpeg_round_trip(source, cfg.jpeg_quality)?;
    let sq: f64 = source
        .data()
        .iter()
        .zip(recon.data())
        .map(|(&a, &b)| {
            let d = (a as f64 - b as f64) / 255.0;
            d * d
        })
        .sum();
    let rms = (sq / source.len() as f64).sqrt();
    Ok(rms * compressed as f64 / source.len() as f64)
}

/// Box edge lengths `box_min * 2^k` not exceeding `box_max_frac * min(w, h)`.
pub fn box_sizes(width: usize, height: usize, cfg: &MeasureConfig) -> Vec<usize> {
    let limit = cfg.box_max_frac * width.min(height) as f64;
    std::iter::successors(Some(cfg.box_min), |&e| e.checked_mul(2))
        .take_while(|&e| e as f64 <= limit)
        .collect()
}

/// Occupied-box counts on a grid anchored at the origin; partial boxes at the
/// right and bottom borders count.
pub fn box_counts(bin: &BinaryImage, cfg: &MeasureConfig) -> Result<Vec<(usize, u64)>> {
    if bin.foreground_count() == 0 {
        return Err(Error::Domain("box counting needs at least one foreground pixel".into()));
    }
    let (w, h) = (bin.width(), bin.height());
    let sizes = box_sizes(w, h, cfg);
    let mut out = Vec::with_capacity(sizes.len());
    for eps in sizes {
        let cols = w.div_ceil(eps);
        let rows = h.div_ceil(eps);
        let mut occupied = vec![false; cols * rows];
        for y in 0..h {
            let row = (y / eps) * cols;
            for x in 0..w {
                if bin.get(x, y) {
                    occupied[row + x / eps] = true;
                }
            }
        }
        out.push((eps, occupied.iter().filter(|&&o| o).count() as u64));
    }
    Ok(out)
}

/// Ordinary least-squares slope of `ys` on `xs`.
fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Box-counting dimension of a binary raster: minus the OLS slope of
/// `ln count` against `ln eps`, clamped to `[0, 2]`.
pub fn fractal_dimension_binary(bin: &BinaryImage, cfg: &MeasureConfig) -> Result<f64> {
    let sizes = box_sizes(bin.width(), bin.height(), cfg);
    if sizes.len() < 3 {
        return Err(Error::Parameter(format!(
            "{}x{} image admits only {} box sizes, need 3",
            bin.width(),
            bin.height(),
            sizes.len()
        )));
    }
    let counts = box_counts(bin, cfg)?;
    let xs: Vec<f64> = counts.iter().map(|&(e, _)| (e as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, c)| (c as f64).ln()).collect();
    Ok((-ols_slope(&xs, &ys)).clamp(0.0, 2.0))
}

/// Box-counting dimension after local-mean binarisation with radius
/// `cfg.r_adapt`.
pub fn fractal_dimension(img: &GrayImage, cfg: &MeasureConfig) -> Result<f64> {
    let bin = adaptive_binarize(img, cfg.r_adapt)?;
    fractal_dimension_binary(&bin, cfg)
}

/// `exp(-(d - peak)^2 / (2 sigma^2))`.
pub fn fractal_aesthetic(d: f64, cfg: &MeasureConfig) -> f64 {
    let z = d - cfg.peak;
    (-(z * z) / (2.0 * cfg.sigma * cfg.sigma)).exp()
}

/// Skewness `m3 / m2^1.5` of the luminance distribution.
pub fn skewness(h: &Histogram) -> Result<f64> {
    if h.total < 2 {
        return Err(Error::Parameter("skewness needs at least two pixels".into()));
    }
    let n = h.total as f64;
    let mean = h.bins.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for (k, &c) in h.bins.iter().enumerate() {
        let d = k as f64 - mean;
        m2 += c as f64 * d * d;
        m3 += c as f64 * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if m2 <= 0.0 {
        return Err(Error::Domain("zero luminance variance".into()));
    }
    Ok(m3 / m2.powf(1.5))
}

/// Computes every measure.
pub fn measure_all(img: &GrayImage, cfg: &MeasureConfig) -> MeasureReport {
    measure_selected(img, cfg, &Measure::ALL)
}

/// Computes only the listed measures; a failure in one leaves the others
/// intact and is recorded in the report.
pub fn measure_selected(img: &GrayImage, cfg: &MeasureConfig, which: &[Measure]) -> MeasureReport {
    let mut values = MeasureVector::default();
    let mut failures = Vec::new();
    if let Err(error) = cfg.validate() {
        for &measure in which {
            failures.push(MeasureFailure { measure, error: Error::Parameter(error.to_string()) });
        }
        return MeasureReport { values, failures };
    }
    let wants = |m: Measure| which.contains(&m);
    let hist = luminance_histogram(img);

    let mut record = |measure: Measure, r: Result<()>| {
        if let Err(error) = r {
            failures.push(MeasureFailure { measure, error });
        }
    };

    if wants(Measure::Entropy) {
        record(Measure::Entropy, entropy(&hist).map(|v| values.entropy = Some(v)));
    }
    if wants(Measure::Energy) {
        record(Measure::Energy, energy(&hist).map(|v| values.energy = Some(v)));
    }
    if wants(Measure::Contours) || wants(Measure::Euler) {
        let bin = otsu_binarize(img);
        let components = topology::count_components(&bin) as i64;
        let euler = topology::euler_bit_quads(&bin);
        if wants(Measure::Contours) {
            values.contours = Some((2 * components - euler) as u64);
        }
        if wants(Measure::Euler) {
            values.euler = Some(euler);
        }
    }
    if wants(Measure::Algorithmic) {
        record(Measure::Algorithmic, algorithmic_complexity(img).map(|v| values.algorithmic = Some(v)));
    }
    if wants(Measure::Structural) {
        record(Measure::Structural, structural_complexity(img, cfg).map(|v| values.structural = Some(v)));
    }
    if wants(Measure::MachadoCardoso) {
        record(
            Measure::MachadoCardoso,
            machado_cardoso(img, cfg, false).map(|v| values.machado_cardoso = Some(v)),
        );
    }
    if wants(Measure::MachadoCardosoEdge) {
        record(
            Measure::MachadoCardosoEdge,
            machado_cardoso(img, cfg, true).map(|v| values.machado_cardoso_edge = Some(v)),
        );
    }
    if wants(Measure::Fractal) || wants(Measure::FractalAesthetic) {
        match fractal_dimension(img, cfg) {
            Ok(d) => {
                if wants(Measure::Fractal) {
                    values.fractal = Some(d);
                }
                if wants(Measure::FractalAesthetic) {
                    values.fractal_aesthetic = Some(fractal_aesthetic(d, cfg));
                }
            }
            Err(e) => {
                for m in [Measure::Fractal, Measure::FractalAesthetic] {
                    if wants(m) {
                        record(m, Err(Error::Domain(e.to_string())));
                    }
                }
            }
        }
    }
    if wants(Measure::Skew) {
        record(Measure::Skew, skewness(&hist).map(|v| values.skew = Some(v)));
    }
    MeasureReport { values, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn hist_of(data: Vec<u8>) -> Histogram {
        let n = data.len();
        luminance_histogram(&GrayImage::new(n, 1, data).unwrap())
    }

    #[test]
    fn entropy_and_energy_reference_values() {
        let constant = hist_of(vec![9; 64]);
        assert_eq!(entropy(&constant).unwrap(), 0.0);
        assert_eq!(energy(&constant).unwrap(), 1.0);

        let half: Vec<u8> = (0..64).map(|i| if i < 32 { 10 } else { 200 }).collect();
        let half = hist_of(half);
        assert!((entropy(&half).unwrap() - LN_2).abs() < 1e-12);
        assert_eq!(energy(&half).unwrap(), 0.5);

        let uniform = hist_of((0..=255u8).collect());
        assert!((entropy(&uniform).unwrap() - 256f64.ln()).abs() < 1e-12);
        assert!((energy(&uniform).unwrap() - 1.0 / 256.0).abs() < 1e-15);

        assert!(matches!(entropy(&Histogram::empty()), Err(Error::Parameter(_))));
        assert!(matches!(energy(&Histogram::empty()), Err(Error::Parameter(_))));
    }

    #[test]
    fn concentration_lowers_entropy_raises_energy() {
        // Nested fixtures: each moves mass from the tail into bin 0.
        let mut last: Option<(f64, f64)> = None;
        for keep in [256usize, 128, 64, 16, 4, 1] {
            let data: Vec<u8> = (0..1024).map(|i| (i % keep) as u8).collect();
            let h = hist_of(data);
            let (s, e) = (entropy(&h).unwrap(), energy(&h).unwrap());
            assert!((0.0..=256f64.ln() + 1e-12).contains(&s));
            assert!((1.0 / 256.0 - 1e-15..=1.0).contains(&e));
            if let Some((ps, pe)) = last {
                assert!(s < ps && e > pe);
            }
            last = Some((s, e));
        }
    }

    #[test]
    fn fractal_aesthetic_curve() {
        let cfg = MeasureConfig::default();
        assert_eq!(fractal_aesthetic(1.35, &cfg), 1.0);
        assert!((fractal_aesthetic(1.55, &cfg) - (-0.5f64).exp()).abs() < 1e-12);
        assert!((fractal_aesthetic(1.15, &cfg) - fractal_aesthetic(1.55, &cfg)).abs() < 1e-12);
    }

    #[test]
    fn skewness_reference_values() {
        let sym: Vec<u8> = (0..=255u8).chain([0, 255, 100, 155]).collect();
        assert!(skewness(&hist_of(sym)).unwrap().abs() < 1e-12);

        let bern: Vec<u8> = (0..100).map(|i| if i < 90 { 0 } else { 255 }).collect();
        let sk = skewness(&hist_of(bern.clone())).unwrap();
        // Bernoulli skew (1 - 2q) / sqrt(q (1 - q)) with q = 0.1.
        assert!((sk - 8.0 / 3.0).abs() < 1e-9);

        let neg: Vec<u8> = bern.iter().map(|v| 255 - v).collect();
        assert!((skewness(&hist_of(neg)).unwrap() + sk).abs() < 1e-12);

        assert!(matches!(skewness(&hist_of(vec![4; 10])), Err(Error::Domain(_))));
        assert!(matches!(skewness(&hist_of(vec![4])), Err(Error::Parameter(_))));
    }

    #[test]
    fn box_count_examples() {
        let cfg = MeasureConfig::default();
        let full = BinaryImage::from_fn(64, 64, |_, _| true).unwrap();
        let counts = box_counts(&full, &cfg).unwrap();
        assert_eq!(counts[0], (2, 1024));
        assert_eq!(counts.iter().map(|c| c.0).collect::<Vec<_>>(), vec![2, 4, 8, 16]);

        let dot = BinaryImage::from_fn(64, 64, |x, y| (x, y) == (17, 40)).unwrap();
        assert!(box_counts(&dot, &cfg).unwrap().iter().all(|&(_, c)| c == 1));

        let line = BinaryImage::from_fn(64, 64, |_, y| y == 30).unwrap();
        let counts = box_counts(&line, &cfg).unwrap();
        assert_eq!(counts.iter().find(|c| c.0 == 4).unwrap().1, 16);

        let blank = BinaryImage::from_fn(64, 64, |_, _| false).unwrap();
        assert!(matches!(box_counts(&blank, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn box_sizes_respect_limit() {
        let cfg = MeasureConfig::default();
        assert_eq!(box_sizes(64, 64, &cfg), vec![2, 4, 8, 16]);
        assert_eq!(box_sizes(63, 100, &cfg), vec![2, 4, 8]);
        assert_eq!(box_sizes(1024, 1024, &cfg).last(), Some(&256));
    }

    #[test]
    fn fractal_dimension_needs_three_sizes() {
        let cfg = MeasureConfig::default();
        let small = BinaryImage::from_fn(20, 20, |_, _| true).unwrap();
        assert!(matches!(fractal_dimension_binary(&small, &cfg), Err(Error::Parameter(_))));
    }

    #[test]
    fn fractal_dimension_of_line_and_plane() {
        let cfg = MeasureConfig::default();
        let full = BinaryImage::from_fn(256, 256, |_, _| true).unwrap();
        assert!((fractal_dimension_binary(&full, &cfg).unwrap() - 2.0).abs() < 0.05);

        // Bright line on a dark field survives local-mean binarisation.
        let img = GrayImage::from_fn(256, 256, |_, y| if y == 100 { 255 } else { 0 }).unwrap();
        assert!((fractal_dimension(&img, &cfg).unwrap() - 1.0).abs() < 0.1);

        let blank = GrayImage::filled(256, 256, 0).unwrap();
        assert!(matches!(fractal_dimension(&blank, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn config_validation() {
        assert!(MeasureConfig::default().validate().is_ok());
        let bad = [
            MeasureConfig { delta: 0.7, ..Default::default() },
            MeasureConfig { sigma: 0.0, ..Default::default() },
            MeasureConfig { jpeg_quality: 0.0, ..Default::default() },
            MeasureConfig { r_cg: 0, ..Default::default() },
            MeasureConfig { box_min: 1, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("Q".parse::<Measure>().is_err());
    }

    #[test]
    fn constant_image_vector() {
        let img = GrayImage::filled(64, 64, 255).unwrap();
        let report = measure_all(&img, &MeasureConfig::default());
        let v = report.values;
        assert_eq!(v.entropy, Some(0.0));
        assert_eq!(v.energy, Some(1.0));
        assert_eq!(v.contours, Some(0));
        assert_eq!(v.euler, Some(0));
        assert_eq!(v.skew, None);
        assert!(v.algorithmic.unwrap() < 0.05);
        assert!(v.structural.unwrap() < 0.05);
        assert!(v.machado_cardoso.unwrap() <= 0.002);
        // Blank adaptive binarisation: D, D_a and S_k fail, the rest stand.
        let failed: Vec<Measure> = report.failures.iter().map(|f| f.measure).collect();
        assert_eq!(failed, vec![Measure::Fractal, Measure::FractalAesthetic, Measure::Skew]);
    }

    #[test]
    fn invalid_config_fails_every_requested_measure() {
        let img = GrayImage::filled(16, 16, 3).unwrap();
        let cfg = MeasureConfig { delta: 0.9, ..Default::default() };
        let report = measure_selected(&img, &cfg, &[Measure::Entropy, Measure::Fractal]);
        assert_eq!(report.failures.len(), 2);
        assert_eq!(report.values, MeasureVector::default());
    }
}
