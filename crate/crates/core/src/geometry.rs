//! Physical complexity of layered forms.
//!
//! Each layer is one or more closed outlines. A polygon scores the mean of
//! its convexity deviation (area deficit against the convex hull) and the
//! quartile coefficient of dispersion of its interior angles. A layer scores
//! the mean over its polygons and the form scores the mean over its layers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }
}

/// Twice the signed shoelace area; positive for counter-clockwise order.
/// Coordinates are taken relative to the first vertex to limit cancellation
/// far from the origin.
fn signed_area2(pts: &[Point]) -> f64 {
    let Some(&origin) = pts.first() else { return 0.0 };
    pts.windows(2).map(|w| w[0].sub(origin).cross(w[1].sub(origin))).sum()
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, without
/// collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| a.sub(o).cross(b.sub(o));
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = q2.sub(q1).cross(p1.sub(q1));
    let d2 = q2.sub(q1).cross(p2.sub(q1));
    let d3 = p2.sub(p1).cross(q1.sub(p1));
    let d4 = p2.sub(p1).cross(q2.sub(p1));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// A simple closed outline; the closing edge is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerPolygon {
    vertices: Vec<Point>,
}

impl LayerPolygon {
    /// Validates and wraps an outline. A repeated first vertex at the end is
    /// dropped.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::Parameter(format!("polygon has {} vertices, need 3", vertices.len())));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::Parameter("polygon has non-finite coordinates".into()));
        }
        let n = vertices.len();
        if (0..n).any(|i| vertices[i] == vertices[(i + 1) % n]) {
            return Err(Error::Parameter("polygon has a zero-length edge".into()));
        }
        if signed_area2(&vertices) == 0.0 {
            return Err(Error::Domain("polygon has zero area".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                    return Err(Error::Parameter(format!("polygon edges {i} and {j} intersect")));
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area2(&self.vertices).abs() / 2.0
    }

    /// Interior angle at every vertex, in degrees, each in `(0, 360)`.
    pub fn interior_angles(&self) -> Vec<f64> {
        let v = &self.vertices;
        let n = v.len();
        let ccw = signed_area2(v) > 0.0;
        (0..n)
            .map(|i| {
                let prev = v[(i + n - 1) % n];
                let next = v[(i + 1) % n];
                let e_in = v[i].sub(prev);
                let e_out = next.sub(v[i]);
                let turn = e_in.cross(e_out).atan2(e_in.dot(e_out)).to_degrees();
                if ccw {
                    180.0 - turn
                } else {
                    180.0 + turn
                }
            })
            .collect()
    }
}

/// `1 - area(poly) / area(hull(poly))`.
pub fn convexity_deviation(poly: &LayerPolygon) -> Result<f64> {
    let hull = convex_hull(poly.vertices());
    let hull_area = signed_area2(&hull).abs() / 2.0;
    if hull.len() < 3 || hull_area == 0.0 {
        return Err(Error::Domain("degenerate polygon has no hull area".into()));
    }
    Ok((1.0 - poly.area() / hull_area).max(0.0))
}

/// Linear-interpolation quantile (type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Quartile coefficient of dispersion `(Q3 - Q1) / (Q3 + Q1)`.
pub fn quartile_dispersion(values: &[f64]) -> Result<f64> {
    if values.len() < 3 {
        return Err(Error::Parameter(format!("need at least 3 values, got {}", values.len())));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    if q1 + q3 <= 0.0 {
        return Err(Error::Domain("quartiles sum to zero".into()));
    }
    Ok((q3 - q1) / (q3 + q1))
}

pub fn angle_dispersion(poly: &LayerPolygon) -> Result<f64> {
    quartile_dispersion(&poly.interior_angles())
}

pub fn polygon_score(poly: &LayerPolygon) -> Result<f64> {
    Ok((convexity_deviation(poly)? + angle_dispersion(poly)?) / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub z: i64,
    pub polygons: Vec<LayerPolygon>,
}

impl Layer {
    pub fn score(&self) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.polygons {
            total += polygon_score(p)?;
        }
        Ok(total / self.polygons.len() as f64)
    }
}

/// Ordered stack of layers with strictly increasing `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredForm {
    layers: Vec<Layer>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FormFile {
    layers: Vec<LayerFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LayerFile {
    z: i64,
    polygons: Vec<Vec<[f64; 2]>>,
}

impl LayeredForm {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Malformed("form has no layers".into()));
        }
        for (i, layer) in layers.iter().enumerate() {
            if layer.polygons.is_empty() {
                return Err(Error::Layer { layer: i, msg: "layer has no polygons".into() });
            }
            if i > 0 && layer.z <= layers[i - 1].z {
                return Err(Error::Layer {
                    layer: i,
                    msg: format!("z {} does not increase on {}", layer.z, layers[i - 1].z),
                });
            }
        }
        Ok(Self { layers })
    }

    /// Parses `{"layers": [{"z": int, "polygons": [[[x, y], ...], ...]}, ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: FormFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut layers = Vec::with_capacity(file.layers.len());
        for (i, lf) in file.layers.into_iter().enumerate() {
            let polygons = lf
                .polygons
                .into_iter()
                .enumerate()
                .map(|(j, pts)| {
                    LayerPolygon::new(pts.into_iter().map(|[x, y]| Point::new(x, y)).collect())
                        .map_err(|e| Error::Layer { layer: i, msg: format!("polygon {j}: {e}") })
                })
                .collect::<Result<Vec<_>>>()?;
            layers.push(Layer { z: lf.z, polygons });
        }
        Self::new(layers)
    }

    pub fn to_json(&self) -> String {
        let file = FormFile {
            layers: self
                .layers
                .iter()
                .map(|l| LayerFile {
                    z: l.z,
                    polygons: l
                        .polygons
                        .iter()
                        .map(|p| p.vertices().iter().map(|v| [v.x, v.y]).collect())
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("form serialises")
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }
}

/// Mean layer score, each layer weighted equally.
pub fn physical_complexity(form: &LayeredForm) -> Result<f64> {
    let mut total = 0.0;
    for (i, layer) in form.layers().iter().enumerate() {
        total += layer.score().map_err(|e| Error::Layer { layer: i, msg: e.to_string() })?;
    }
    Ok(total / form.layers().len() as f64)
}
