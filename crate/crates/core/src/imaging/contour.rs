use std::collections::VecDeque;

use super::BinaryMask;
use crate::error::{Error, Result};

/// Integer pixel coordinate; `y` grows downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Point::new(self.x + dx, self.y + dy)
    }

    pub fn is_8_neighbour(self, other: Point) -> bool {
        self != other && (self.x - other.x).abs() <= 1 && (self.y - other.y).abs() <= 1
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point::new(x, y)
    }
}

/// Closed, ordered point sequence around a region border.
///
/// Contours produced by [`trace_contours`] have consecutive points that are
/// 8-neighbours and the last point adjacent to the first. Hand-built contours
/// (polygon corners, for instance) only need to be non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Contour {
    points: Vec<Point>,
}

impl Contour {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Contour { points })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().copied().map(Point::from).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }
}

/// Clockwise on screen (y down), starting east.
const DIRS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];
const WEST: usize = 4;

fn dir_index(from: Point, to: Point) -> usize {
    let d = (to.x - from.x, to.y - from.y);
    DIRS.iter()
        .position(|&v| v == d)
        .expect("points are 8-neighbours")
}

/// Traces the outer border of every 8-connected foreground component.
///
/// Components are discovered in row-major order. Each border starts at the
/// component's first row-major pixel and runs clockwise on screen, so the
/// first step goes east along the top edge when possible. Thin parts are
/// walked out and back, so a pixel may appear more than once. Holes are not
/// traced.
pub fn trace_contours(mask: &BinaryMask) -> Vec<Contour> {
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut contours = Vec::new();

    for y in 0..h {
        for x in 0..w {
            let idx = y * w + x;
            if !mask.bits()[idx] || seen[idx] {
                continue;
            }
            let start = Point::new(x as i64, y as i64);
            mark_component(mask, start, &mut seen);
            contours.push(follow_border(mask, start));
        }
    }
    contours
}

/// Border following with the classic stop rule: finish when the walk is back
/// at `start` having arrived from the point the initial reverse search found.
fn follow_border(mask: &BinaryMask, start: Point) -> Contour {
    let fg = |p: Point| mask.get(p.x, p.y);

    // The pixel west of the row-major first pixel is always background. The
    // counter-clockwise search from there finds the last point of the loop.
    let last = (1..8)
        .map(|i| (WEST + 8 - i) % 8)
        .map(|d| start.offset(DIRS[d].0, DIRS[d].1))
        .find(|&p| fg(p));
    let Some(last) = last else {
        return Contour {
            points: vec![start],
        };
    };

    let mut points = Vec::new();
    let mut prev = last;
    let mut cur = start;
    loop {
        points.push(cur);
        let back = dir_index(cur, prev);
        let next = (1..=8)
            .map(|i| (back + i) % 8)
            .map(|d| cur.offset(DIRS[d].0, DIRS[d].1))
            .find(|&p| fg(p))
            .expect("component has at least two pixels");
        if next == start && cur == last {
            break;
        }
        prev = cur;
        cur = next;
    }
    Contour { points }
}

fn mark_component(mask: &BinaryMask, seed: Point, seen: &mut [bool]) -> Vec<Point> {
    let w = mask.width();
    let mut queue = VecDeque::from([seed]);
    let mut pixels = Vec::new();
    seen[seed.y as usize * w + seed.x as usize] = true;
    while let Some(p) = queue.pop_front() {
        pixels.push(p);
        for (dx, dy) in DIRS {
            let q = p.offset(dx, dy);
            if mask.get(q.x, q.y) {
                let idx = q.y as usize * w + q.x as usize;
                if !seen[idx] {
                    seen[idx] = true;
                    queue.push_back(q);
                }
            }
        }
    }
    pixels
}

/// All pixels of the 8-connected component containing `seed`, or an empty
/// list when `seed` is background.
pub(crate) fn component_pixels(mask: &BinaryMask, seed: Point) -> Vec<Point> {
    if !mask.get(seed.x, seed.y) {
        return Vec::new();
    }
    let mut seen = vec![false; mask.width() * mask.height()];
    mark_component(mask, seed, &mut seen)
}
