//! Independent oracles and synthetic data shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use gesture_knn::imaging::{self, BinaryMask, PixelBuffer, Point};

/// Skin-toned RGB: Y 182, Cb 105, Cr 155 under full-range BT.601.
pub const SKIN: [u8; 3] = [220, 170, 140];
pub const BLACK: [u8; 3] = [0, 0, 0];

pub fn mask_from_rows(rows: &[&str]) -> BinaryMask {
    let h = rows.len();
    let w = rows[0].len();
    BinaryMask::from_fn(w, h, |x, y| rows[y].as_bytes()[x] == b'#').unwrap()
}

/// 8-connected components by union-find, listed in order of their first
/// row-major pixel. Each component is its full pixel set.
pub fn components_oracle(mask: &BinaryMask) -> Vec<BTreeSet<Point>> {
    let (w, h) = (mask.width(), mask.height());
    let mut parent: Vec<usize> = (0..w * h).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let on = |x: usize, y: usize| mask.bits()[y * w + x];
    for y in 0..h {
        for x in 0..w {
            if !on(x, y) {
                continue;
            }
            for (dx, dy) in [(-1i64, -1i64), (0, -1), (1, -1), (-1, 0)] {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx >= 0 && ny >= 0 && (nx as usize) < w && on(nx as usize, ny as usize) {
                    let a = find(&mut parent, y * w + x);
                    let b = find(&mut parent, ny as usize * w + nx as usize);
                    parent[a] = b;
                }
            }
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut groups: BTreeMap<usize, BTreeSet<Point>> = BTreeMap::new();
    for y in 0..h {
        for x in 0..w {
            if on(x, y) {
                let root = find(&mut parent, y * w + x);
                if !groups.contains_key(&root) {
                    order.push(root);
                }
                groups
                    .entry(root)
                    .or_default()
                    .insert(Point::new(x as i64, y as i64));
            }
        }
    }
    order
        .into_iter()
        .map(|r| groups.remove(&r).unwrap())
        .collect()
}

/// Outer border of one component: its pixels that have a 4-neighbour in the
/// background region reachable (4-connected) from outside the frame, with
/// every other pixel of the frame treated as background.
pub fn outer_border_oracle(component: &BTreeSet<Point>, w: usize, h: usize) -> BTreeSet<Point> {
    let (pw, ph) = (w as i64 + 2, h as i64 + 2);
    let inside = |x: i64, y: i64| component.contains(&Point::new(x - 1, y - 1));
    let mut exterior = vec![false; (pw * ph) as usize];
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    exterior[0] = true;
    while let Some((x, y)) = queue.pop_front() {
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= pw || ny >= ph {
                continue;
            }
            let idx = (ny * pw + nx) as usize;
            if !exterior[idx] && !inside(nx, ny) {
                exterior[idx] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    component
        .iter()
        .copied()
        .filter(|p| {
            [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .any(|(dx, dy)| exterior[((p.y + 1 + dy) * pw + (p.x + 1 + dx)) as usize])
        })
        .collect()
}

/// (m00, m10, m01) by visiting every pixel of the frame.
pub fn moments_oracle(mask: &BinaryMask, component: &BTreeSet<Point>) -> (f64, f64, f64) {
    let (mut m00, mut m10, mut m01) = (0.0, 0.0, 0.0);
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if component.contains(&Point::new(x as i64, y as i64)) {
                m00 += 1.0;
                m10 += x as f64;
                m01 += y as f64;
            }
        }
    }
    (m00, m10, m01)
}

/// Full sort of all training distances, then the vote rules applied to the
/// first `k`: most votes, then smallest distance sum, then smallest name.
pub fn knn_oracle(points: &[Vec<f64>], labels: &[String], k: usize, q: &[f64]) -> String {
    let mut all: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum();
            (d2.sqrt(), i)
        })
        .collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut tally: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for &(d, i) in &all[..k] {
        let e = tally.entry(labels[i].as_str()).or_insert((0, 0.0));
        e.0 += 1;
        e.1 += d;
    }
    let best_count = tally.values().map(|v| v.0).max().unwrap();
    let best_sum = tally
        .values()
        .filter(|v| v.0 == best_count)
        .map(|v| v.1)
        .fold(f64::INFINITY, f64::min);
    tally
        .iter()
        .find(|(_, v)| v.0 == best_count && v.1 == best_sum)
        .map(|(l, _)| l.to_string())
        .unwrap()
}

/// Ellipse with integer centre and semi-axes.
#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    pub cx: i64,
    pub cy: i64,
    pub a: i64,
    pub b: i64,
}

impl Ellipse {
    pub fn contains(&self, x: i64, y: i64) -> bool {
        let (dx, dy) = (x - self.cx, y - self.cy);
        dx * dx * self.b * self.b + dy * dy * self.a * self.a <= self.a * self.a * self.b * self.b
    }
}

pub const FRAME_W: usize = 240;
pub const FRAME_H: usize = 200;

/// Black frame with a skin ellipse and, optionally, a 3x3 skin speck.
pub fn ellipse_frame(e: Ellipse, speck: Option<(i64, i64)>) -> PixelBuffer {
    PixelBuffer::from_fn(FRAME_W, FRAME_H, |x, y| {
        let (x, y) = (x as i64, y as i64);
        let in_speck = speck.is_some_and(|(sx, sy)| (x - sx).abs() <= 1 && (y - sy).abs() <= 1);
        if e.contains(x, y) || in_speck {
            SKIN
        } else {
            BLACK
        }
    })
    .unwrap()
}

/// Three pseudo-gestures: wide, tall and round hands at distinct positions.
pub const GESTURES: [(&str, Ellipse); 3] = [
    (
        "Palm to Palm",
        Ellipse {
            cx: 80,
            cy: 60,
            a: 40,
            b: 20,
        },
    ),
    (
        "Fingers Interlocked",
        Ellipse {
            cx: 160,
            cy: 90,
            a: 18,
            b: 40,
        },
    ),
    (
        "Fingers Interlaced",
        Ellipse {
            cx: 110,
            cy: 145,
            a: 28,
            b: 28,
        },
    ),
];

/// Deterministic pose jitter in [-3, 3] for frame `i`.
pub fn jitter(i: usize, salt: usize) -> (i64, i64) {
    let h = (i * 7919 + salt * 104_729) % 49;
    ((h % 7) as i64 - 3, (h / 7) as i64 - 3)
}

pub fn posed(base: Ellipse, i: usize, salt: usize) -> Ellipse {
    let (dx, dy) = jitter(i, salt);
    Ellipse {
        cx: base.cx + dx,
        cy: base.cy + dy,
        ..base
    }
}

/// Writes `count` frames of one gesture as PPM, every third with a speck.
pub fn write_gesture_frames(dir: &Path, base: Ellipse, count: usize, salt: usize) -> Vec<Ellipse> {
    std::fs::create_dir_all(dir).unwrap();
    (0..count)
        .map(|i| {
            let e = posed(base, i, salt);
            let speck = (i % 3 == 0).then_some((5, 5));
            let frame = ellipse_frame(e, speck);
            imaging::write_frame(&dir.join(format!("frame_{i:03}.ppm")), &frame).unwrap();
            e
        })
        .collect()
}
