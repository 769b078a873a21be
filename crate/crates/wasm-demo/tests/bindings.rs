use aesthia_wasm::{aesthetic_curve, coarse_grain_rgba, glicko_pair, measure_rgba};

fn rgba(w: usize, h: usize, f: impl Fn(usize, usize) -> u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(w * h * 4);
    for y in 0..h {
        for x in 0..w {
            let v = f(x, y);
            out.extend_from_slice(&[v, v, v, 255]);
        }
    }
    out
}

#[test]
fn measures_come_back_as_json() {
    let buf = rgba(48, 40, |x, y| ((x * 7 + y * y) % 256) as u8);
    let out: serde_json::Value = serde_json::from_str(&measure_rgba(&buf, 48, 40, "").unwrap()).unwrap();
    assert!(out["values"]["entropy"].as_f64().unwrap() > 0.0);
    assert!(out["failures"].as_object().unwrap().is_empty());

    let flat = rgba(32, 32, |_, _| 200);
    let out: serde_json::Value = serde_json::from_str(&measure_rgba(&flat, 32, 32, "").unwrap()).unwrap();
    assert_eq!(out["values"]["entropy"], 0.0);
    assert!(out["failures"]["S_k"].is_string());

    assert!(measure_rgba(&flat, 31, 32, "").is_err());
    assert!(measure_rgba(&flat, 32, 32, "{").is_err());
}

#[test]
fn custom_config_is_applied() {
    let buf = rgba(64, 64, |x, _| if x < 32 { 0 } else { 255 });
    let cfg = r#"{"r_adapt":2,"r_cg":5,"delta":0.23,"jpeg_quality":0.75,"peak":1.0,"sigma":0.2,"box_min":2,"box_max_frac":0.25}"#;
    let out: serde_json::Value = serde_json::from_str(&measure_rgba(&buf, 64, 64, cfg).unwrap()).unwrap();
    let d = out["values"]["fractal"].as_f64().unwrap();
    let da = out["values"]["fractal_aesthetic"].as_f64().unwrap();
    assert!((da - (-(d - 1.0f64).powi(2) / 0.08).exp()).abs() < 1e-12);
}

#[test]
fn coarse_grain_preview_is_opaque_ternary() {
    let buf = rgba(40, 40, |x, _| if x < 20 { 0 } else { 255 });
    let out = coarse_grain_rgba(&buf, 40, 40, 3, 0.23).unwrap();
    assert_eq!(out.len(), buf.len());
    assert!(out.chunks(4).all(|p| p[3] == 255 && [0, 128, 255].contains(&p[0])));
    assert_eq!(&out[..4], &[0, 0, 0, 255]);
    assert_eq!(&out[out.len() - 4..], &[255, 255, 255, 255]);
    assert!(coarse_grain_rgba(&buf, 40, 40, 3, 0.9).is_err());
}

#[test]
fn curve_peaks_where_asked() {
    let c = aesthetic_curve(1.35, 0.2, 201);
    assert_eq!(c.len(), 201);
    let argmax = c.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(argmax, 135);
    assert_eq!(c[135], 1.0);
}

#[test]
fn glicko_step_from_fresh_ratings() {
    let r = glicko_pair((1500.0, 350.0), (1500.0, 350.0), "win").unwrap();
    assert!((r[0] - 1662.2).abs() < 0.5 && (r[2] - 1337.8).abs() < 0.5);
    assert!(r[1] > 290.0 && r[1] < 291.0);
    assert!(glicko_pair((1500.0, 350.0), (1500.0, 350.0), "draw").is_err());
    assert!(glicko_pair((1500.0, -1.0), (1500.0, 350.0), "tie").is_err());
}
