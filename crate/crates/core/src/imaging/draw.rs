//! Minimal raster overlays used by the annotate command.

use super::contour::{Contour, Point};
use super::PixelBuffer;

pub const GREEN: [u8; 3] = [0, 255, 0];
pub const RED: [u8; 3] = [255, 0, 0];
pub const BLUE: [u8; 3] = [0, 0, 255];

pub fn draw_contour(buf: &mut PixelBuffer, c: &Contour, colour: [u8; 3]) {
    for p in c.points() {
        buf.put(p.x, p.y, colour);
    }
}

/// Every pixel within Euclidean distance `radius` of `center`.
pub fn fill_circle(buf: &mut PixelBuffer, center: Point, radius: i64, colour: [u8; 3]) {
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            if dx * dx + dy * dy <= radius * radius {
                buf.put(center.x + dx, center.y + dy, colour);
            }
        }
    }
}

/// Midpoint (Bresenham) circle outline.
pub fn draw_circle(buf: &mut PixelBuffer, center: Point, radius: i64, colour: [u8; 3]) {
    let (mut x, mut y) = (radius, 0i64);
    let mut err = 1 - radius;
    while x >= y {
        for (dx, dy) in [
            (x, y),
            (y, x),
            (-y, x),
            (-x, y),
            (-x, -y),
            (-y, -x),
            (y, -x),
            (x, -y),
        ] {
            buf.put(center.x + dx, center.y + dy, colour);
        }
        y += 1;
        if err < 0 {
            err += 2 * y + 1;
        } else {
            x -= 1;
            err += 2 * (y - x) + 1;
        }
    }
}
