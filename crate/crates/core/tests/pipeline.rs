use aesthia_core::datasets::{load_manifest, read_results, results_table, results_to_csv, write_results};
use aesthia_core::geometry::{physical_complexity, Layer, LayerPolygon, LayeredForm, Point};
use aesthia_core::imaging::{load_image, BinaryImage, GrayImage};
use aesthia_core::measures::{self, measure_all, measure_selected, Measure, MeasureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn noise(w: usize, h: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(w, h, |_, _| rng.random()).unwrap()
}

#[test]
fn structural_complexity_ignores_fine_noise() {
    let cfg = MeasureConfig::default();
    let flat = measures::structural_complexity(&GrayImage::filled(256, 256, 255).unwrap(), &cfg).unwrap();
    assert!(flat < 0.05, "C_s={flat}");

    let half = GrayImage::from_fn(256, 256, |x, _| if x < 128 { 20 } else { 230 }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let speckled = GrayImage::from_fn(256, 256, |x, y| {
        if rng.random_bool(0.01) {
            255 - half.get(x, y)
        } else {
            half.get(x, y)
        }
    })
    .unwrap();
    let clean = measures::structural_complexity(&half, &cfg).unwrap();
    let noisy = measures::structural_complexity(&speckled, &cfg).unwrap();
    assert!(noisy <= 2.0 * clean && clean <= 2.0 * noisy, "clean {clean}, noisy {noisy}");

    // The raw-pixel measure has no such robustness.
    let raw_clean = measures::algorithmic_complexity(&half).unwrap();
    let raw_noisy = measures::algorithmic_complexity(&speckled).unwrap();
    assert!(raw_noisy > 2.0 * raw_clean);
}

#[test]
fn machado_cardoso_orders_noise_above_flat() {
    let cfg = MeasureConfig::default();
    let flat = measures::machado_cardoso(&GrayImage::filled(64, 64, 100).unwrap(), &cfg, false).unwrap();
    let busy = measures::machado_cardoso(&noise(64, 64, 1), &cfg, false).unwrap();
    assert!(flat <= 0.002);
    assert!(busy > flat);
    let edge = measures::machado_cardoso(&noise(64, 64, 1), &cfg, true).unwrap();
    assert!(edge > 0.0);
}

#[test]
fn box_dimension_translation_and_idempotence() {
    let cfg = MeasureConfig::default();
    let shape = |x: usize, y: usize| (x / 3 + y / 5) % 4 == 0 && x < 100 && y < 90;
    let base = BinaryImage::from_fn(256, 256, shape).unwrap();
    let d = measures::fractal_dimension_binary(&base, &cfg).unwrap();
    // Shift by 64 pixels, a multiple of every box size in use.
    let shifted = BinaryImage::from_fn(256, 256, |x, y| x >= 64 && y >= 64 && shape(x - 64, y - 64)).unwrap();
    assert_eq!(measures::fractal_dimension_binary(&shifted, &cfg).unwrap(), d);
    let union = BinaryImage::from_fn(256, 256, |x, y| base.get(x, y) || base.get(x, y)).unwrap();
    assert_eq!(measures::fractal_dimension_binary(&union, &cfg).unwrap(), d);
}

#[test]
fn measure_all_matches_individual_measures() {
    let cfg = MeasureConfig::default();
    let img = GrayImage::from_fn(96, 80, |x, y| ((x * x + 3 * y) % 251) as u8).unwrap();
    let report = measure_all(&img, &cfg);
    assert!(report.is_complete(), "{:?}", report.failures);
    let v = report.values;
    let h = aesthia_core::imaging::luminance_histogram(&img);
    assert_eq!(v.entropy, Some(measures::entropy(&h).unwrap()));
    assert_eq!(v.energy, Some(measures::energy(&h).unwrap()));
    assert_eq!(v.contours, Some(measures::contours(&img)));
    assert_eq!(v.euler, Some(measures::euler_number(&img)));
    assert_eq!(v.algorithmic, Some(measures::algorithmic_complexity(&img).unwrap()));
    assert_eq!(v.structural, Some(measures::structural_complexity(&img, &cfg).unwrap()));
    assert_eq!(v.fractal, Some(measures::fractal_dimension(&img, &cfg).unwrap()));
    assert_eq!(v.fractal_aesthetic, Some(measures::fractal_aesthetic(v.fractal.unwrap(), &cfg)));
    assert_eq!(v.skew, Some(measures::skewness(&h).unwrap()));

    let some = measure_selected(&img, &cfg, &[Measure::Entropy, Measure::Fractal]);
    assert_eq!(some.values.entropy, v.entropy);
    assert_eq!(some.values.fractal, v.fractal);
    assert_eq!(some.values.energy, None);
}

#[test]
fn manifest_to_results_csv_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = String::from("id,path,score,category\n");
    for k in 0..3u64 {
        let file = format!("img{k}.png");
        noise(64, 64, k).to_dynamic().save(dir.path().join(&file)).unwrap();
        manifest.push_str(&format!("img{k},{file},{},\n", k + 1));
    }
    std::fs::write(dir.path().join("set.csv"), manifest).unwrap();
    let m = load_manifest(dir.path().join("set.csv")).unwrap();
    let cfg = MeasureConfig::default();

    let run = || {
        let vectors: Vec<_> =
            m.entries.iter().map(|e| measure_all(&load_image(&e.path).unwrap(), &cfg).values).collect();
        let rows = m.entries.iter().zip(&vectors).map(|(e, v)| (e.id.as_str(), v, e.score));
        results_to_csv(&results_table(&Measure::ALL, rows).unwrap())
    };
    let first = run();
    assert_eq!(first, run());
    assert_eq!(first.lines().count(), 4);

    let path = dir.path().join("results.csv");
    let table = aesthia_core::datasets::parse_results(&first, "mem").unwrap();
    write_results(&table, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    assert_eq!(read_results(&path).unwrap(), table);
}

#[test]
fn stacked_squares_have_zero_physical_complexity() {
    let square = |s: f64| {
        LayerPolygon::new(vec![Point::new(0.0, 0.0), Point::new(s, 0.0), Point::new(s, s), Point::new(0.0, s)]).unwrap()
    };
    let form = LayeredForm::new((0..5).map(|z| Layer { z, polygons: vec![square(1.0 + z as f64)] }).collect())
        .unwrap();
    assert_eq!(physical_complexity(&form).unwrap(), 0.0);
}
