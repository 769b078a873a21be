//! Component and hole counts of binary rasters.
//!
//! Foreground is 8-connected and background 4-connected, the dual pair for
//! which the Euler number is well defined. Components come from a two-pass
//! union-find labelling; the Euler number comes from bit-quad counts, so
//! holes are derived as `components - euler` without a second labelling.

use crate::imaging::BinaryImage;

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new() -> Self {
        Self { parent: Vec::new() }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Number of 8-connected foreground components.
pub fn count_components(bin: &BinaryImage) -> usize {
    let (w, h) = (bin.width(), bin.height());
    const NONE: u32 = u32::MAX;
    let mut labels = vec![NONE; w * h];
    let mut sets = DisjointSet::new();

    for y in 0..h {
        for x in 0..w {
            if !bin.get(x, y) {
                continue;
            }
            // Already-visited 8-neighbours: W, NW, N, NE.
            let mut neighbours = [NONE; 4];
            if x > 0 {
                neighbours[0] = labels[y * w + x - 1];
            }
            if y > 0 {
                let up = (y - 1) * w;
                if x > 0 {
                    neighbours[1] = labels[up + x - 1];
                }
                neighbours[2] = labels[up + x];
                if x + 1 < w {
                    neighbours[3] = labels[up + x + 1];
                }
            }
            let mut label = NONE;
            for &n in neighbours.iter().filter(|&&n| n != NONE) {
                if label == NONE {
                    label = n;
                } else {
                    sets.union(label, n);
                }
            }
            if label == NONE {
                label = sets.make();
            }
            labels[y * w + x] = label;
        }
    }
    (0..sets.parent.len() as u32).filter(|&i| sets.find(i) == i).count()
}

/// Euler number (components minus holes) from 2x2 bit-quad counts over the
/// zero-padded raster: `(Q1 - Q3 - 2 QD) / 4`.
pub fn euler_bit_quads(bin: &BinaryImage) -> i64 {
    let (w, h) = (bin.width() as isize, bin.height() as isize);
    let px = |x: isize, y: isize| -> u8 {
        if x < 0 || y < 0 || x >= w || y >= h {
            0
        } else {
            bin.get(x as usize, y as usize) as u8
        }
    };
    let (mut q1, mut q3, mut qd) = (0i64, 0i64, 0i64);
    for y in -1..h {
        for x in -1..w {
            let a = px(x, y);
            let b = px(x + 1, y);
            let c = px(x, y + 1);
            let d = px(x + 1, y + 1);
            match a + b + c + d {
                1 => q1 += 1,
                3 => q3 += 1,
                2 if a == d => qd += 1,
                _ => {}
            }
        }
    }
    (q1 - q3 - 2 * qd) / 4
}

/// Number of 4-connected background regions that do not touch the border.
pub fn count_holes(bin: &BinaryImage) -> usize {
    let components = count_components(bin) as i64;
    (components - euler_bit_quads(bin)) as usize
}
