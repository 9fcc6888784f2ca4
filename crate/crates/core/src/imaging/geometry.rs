use super::contour::{Contour, Point};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Twice the signed shoelace area; exact for integer points.
pub fn twice_signed_area(points: &[Point]) -> i64 {
    if points.len() < 3 {
        return 0;
    }
    let n = points.len();
    (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum()
}

/// Polygon (shoelace) area enclosed by the contour points.
///
/// This is the area of the polygon through pixel centres, not the pixel
/// count: a filled 3x3 square traces a border whose polygon spans 2x2, so its
/// area is 4 rather than 9.
pub fn contour_area<T: Scalar>(c: &Contour) -> T {
    T::of_i64(twice_signed_area(c.points()).abs()) / T::of_i64(2)
}

/// Closed arc length; diagonal steps count sqrt(2).
pub fn contour_perimeter<T: Scalar>(c: &Contour) -> T {
    let p = c.points();
    if p.len() < 2 {
        return T::zero();
    }
    (0..p.len())
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % p.len()]);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            T::of_i64(dx * dx + dy * dy).sqrt()
        })
        .sum()
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Monotone-chain convex hull.
///
/// Vertices come back counter-clockwise in the mathematical orientation
/// (positive signed area with y treated as an ordinary axis), starting from
/// the lexicographically smallest point, with collinear points dropped.
/// Inputs of one or two points are returned unchanged.
pub fn convex_hull(c: &Contour) -> Contour {
    let src = c.points();
    if src.len() <= 2 {
        return c.clone();
    }
    let mut pts = src.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return Contour::new(pts).expect("non-empty");
    }

    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Contour::new(hull).expect("non-empty")
}

/// Contour with the largest polygon area; the earliest wins a tie.
pub fn largest_contour(cs: &[Contour]) -> Result<&Contour> {
    let mut best: Option<(&Contour, i64)> = None;
    for c in cs {
        let area = twice_signed_area(c.points()).abs();
        if best.is_none_or(|(_, a)| area > a) {
            best = Some((c, area));
        }
    }
    best.map(|(c, _)| c).ok_or(Error::EmptyInput)
}
