//! Region moments, centroid, centroid-to-contour distances and extreme points,
//! assembled into the 10-value feature vector.

use crate::error::{Error, Result};
use crate::imaging::{self, BinaryMask, Contour, PixelBuffer, Point, SkinRange};
use crate::scalar::Scalar;

/// Number of integers in a feature vector.
pub const FEATURE_LEN: usize = 10;

/// Column names in feature-vector order.
pub const FEATURE_NAMES: [&str; FEATURE_LEN] = [
    "cx", "cy", "left_x", "left_y", "right_x", "right_y", "top_x", "top_y", "bottom_x", "bottom_y",
];

/// Zeroth and first-order spatial moments of a filled region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<T> {
    pub m00: T,
    pub m10: T,
    pub m01: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centroid<T> {
    pub cx: T,
    pub cy: T,
}

impl<T: Scalar> Centroid<T> {
    pub fn new(cx: T, cy: T) -> Self {
        Centroid { cx, cy }
    }

    /// Pixel nearest-below the centroid, truncating toward zero.
    pub fn truncated(&self) -> Point {
        Point::new(
            self.cx.trunc().to_i64().unwrap_or(0),
            self.cy.trunc().to_i64().unwrap_or(0),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremePoints {
    pub left: Point,
    pub right: Point,
    pub top: Point,
    pub bottom: Point,
}

/// Ten non-negative integers (centroid, left, right, top, bottom) plus an
/// optional class label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureVector {
    pub values: [u32; FEATURE_LEN],
    pub label: Option<String>,
}

impl FeatureVector {
    pub fn new(values: [u32; FEATURE_LEN], label: Option<String>) -> Self {
        FeatureVector { values, label }
    }

    pub fn unlabelled(values: [u32; FEATURE_LEN]) -> Self {
        FeatureVector {
            values,
            label: None,
        }
    }

    pub fn labelled(values: [u32; FEATURE_LEN], label: impl Into<String>) -> Self {
        FeatureVector {
            values,
            label: Some(label.into()),
        }
    }

    pub fn to_scalars<T: Scalar>(&self) -> Vec<T> {
        self.values
            .iter()
            .map(|&v| T::of_i64(i64::from(v)))
            .collect()
    }
}

/// Sums over every pixel of the 8-connected component whose border is `region`.
pub fn compute_moments<T: Scalar>(mask: &BinaryMask, region: &Contour) -> Result<Moments<T>> {
    let pixels = imaging::contour::component_pixels(mask, region.first());
    if pixels.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let (sx, sy) = pixels
        .iter()
        .fold((0i64, 0i64), |(sx, sy), p| (sx + p.x, sy + p.y));
    Ok(Moments {
        m00: T::of_usize(pixels.len()),
        m10: T::of_i64(sx),
        m01: T::of_i64(sy),
    })
}

pub fn centroid<T: Scalar>(m: &Moments<T>) -> Result<Centroid<T>> {
    if m.m00 <= T::zero() {
        return Err(Error::ZeroMass);
    }
    Ok(Centroid {
        cx: m.m10 / m.m00,
        cy: m.m01 / m.m00,
    })
}

/// Euclidean distance from the centroid to one contour point.
pub fn centroid_contour_distance<T: Scalar>(c: &Centroid<T>, p: Point) -> T {
    let dx = c.cx - T::of_i64(p.x);
    let dy = c.cy - T::of_i64(p.y);
    (dx * dx + dy * dy).sqrt()
}

/// Centroid distance for every contour point, in contour order.
pub fn radial_profile<T: Scalar>(c: &Centroid<T>, contour: &Contour) -> Vec<T> {
    contour
        .points()
        .iter()
        .map(|&p| centroid_contour_distance(c, p))
        .collect()
}

/// Leftmost, rightmost, topmost and bottommost contour points. Ties go to the
/// first occurrence in contour order.
pub fn extreme_points(contour: &Contour) -> ExtremePoints {
    let pts = contour.points();
    let first = pts[0];
    let mut e = ExtremePoints {
        left: first,
        right: first,
        top: first,
        bottom: first,
    };
    for &p in &pts[1..] {
        if p.x < e.left.x {
            e.left = p;
        }
        if p.x > e.right.x {
            e.right = p;
        }
        if p.y < e.top.y {
            e.top = p;
        }
        if p.y > e.bottom.y {
            e.bottom = p;
        }
    }
    e
}

fn coord(v: i64) -> u32 {
    u32::try_from(v.max(0)).unwrap_or(u32::MAX)
}

/// Flattens centroid and extremes into feature order. The centroid is
/// truncated toward zero; negative coordinates saturate at 0.
pub fn build_feature_vector<T: Scalar>(
    c: &Centroid<T>,
    e: &ExtremePoints,
    label: Option<String>,
) -> FeatureVector {
    let cp = c.truncated();
    let values = [
        cp.x, cp.y, e.left.x, e.left.y, e.right.x, e.right.y, e.top.x, e.top.y, e.bottom.x,
        e.bottom.y,
    ]
    .map(coord);
    FeatureVector { values, label }
}

/// Everything extracted from one frame's largest skin region.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFeatures<T> {
    pub contour: Contour,
    pub area: T,
    pub centroid: Centroid<T>,
    pub extremes: ExtremePoints,
}

impl<T: Scalar> FrameFeatures<T> {
    pub fn to_vector(&self, label: Option<String>) -> FeatureVector {
        build_feature_vector(&self.centroid, &self.extremes, label)
    }
}

/// Convert, mask, trace, keep the largest contour and measure it.
///
/// Returns `None` when the frame has no contour or the largest one encloses
/// less than `min_area` square pixels.
pub fn analyze_frame<T: Scalar>(
    frame: &PixelBuffer,
    range: &SkinRange,
    min_area: T,
) -> Option<FrameFeatures<T>> {
    let mask = imaging::skin_mask(&imaging::rgb_to_ycbcr(frame), range);
    analyze_mask(&mask, min_area)
}

pub fn analyze_mask<T: Scalar>(mask: &BinaryMask, min_area: T) -> Option<FrameFeatures<T>> {
    let contours = imaging::trace_contours(mask);
    let contour = imaging::largest_contour(&contours).ok()?;
    let area: T = imaging::contour_area(contour);
    if area < min_area {
        return None;
    }
    let moments = compute_moments(mask, contour).ok()?;
    let centroid = centroid(&moments).ok()?;
    Some(FrameFeatures {
        contour: contour.clone(),
        area,
        centroid,
        extremes: extreme_points(contour),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contour(coords: &[(i64, i64)]) -> Contour {
        Contour::from_coords(coords).unwrap()
    }

    #[test]
    fn moments_single_pixel_and_rectangle() {
        let mask = BinaryMask::from_fn(10, 10, |x, y| (x, y) == (4, 7)).unwrap();
        let m: Moments<f64> = compute_moments(&mask, &contour(&[(4, 7)])).unwrap();
        assert_eq!(
            m,
            Moments {
                m00: 1.0,
                m10: 4.0,
                m01: 7.0
            }
        );

        let mask = BinaryMask::from_fn(10, 10, |x, y| (2..=5).contains(&x) && (3..=7).contains(&y))
            .unwrap();
        let region = &imaging::trace_contours(&mask)[0];
        let m: Moments<f64> = compute_moments(&mask, region).unwrap();
        assert_eq!(
            m,
            Moments {
                m00: 20.0,
                m10: 70.0,
                m01: 100.0
            }
        );
        let c = centroid(&m).unwrap();
        assert_eq!((c.cx, c.cy), (3.5, 5.0));
        assert_eq!(c.truncated(), Point::new(3, 5));
    }

    #[test]
    fn moments_of_background_region_fail() {
        let mask = BinaryMask::from_fn(4, 4, |_, _| false).unwrap();
        let r: Result<Moments<f64>> = compute_moments(&mask, &contour(&[(1, 1)]));
        assert!(matches!(r, Err(Error::EmptyRegion)));
    }

    #[test]
    fn centroid_zero_mass() {
        let m = Moments {
            m00: 0.0f64,
            m10: 0.0,
            m01: 0.0,
        };
        assert!(matches!(centroid(&m), Err(Error::ZeroMass)));
        let m = Moments {
            m00: 1.0f32,
            m10: 4.0,
            m01: 7.0,
        };
        assert_eq!(centroid(&m).unwrap(), Centroid::new(4.0, 7.0));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(
            centroid_contour_distance(&Centroid::new(0.0f64, 0.0), Point::new(3, 4)),
            5.0
        );
        let d = centroid_contour_distance(&Centroid::new(112.0f64, 175.0), Point::new(74, 192));
        assert!((d - 1733f64.sqrt()).abs() < 1e-12);
        assert!((d - 41.629316).abs() < 1e-6);
        assert_eq!(
            centroid_contour_distance(&Centroid::new(9.0f64, 2.0), Point::new(9, 2)),
            0.0
        );
    }

    #[test]
    fn radial_profile_examples() {
        assert_eq!(
            radial_profile(&Centroid::new(4.0f64, 7.0), &contour(&[(4, 7)])),
            vec![0.0]
        );
        let prof = radial_profile(
            &Centroid::new(1.0f64, 1.0),
            &contour(&[(0, 0), (2, 0), (2, 2), (0, 2)]),
        );
        assert_eq!(prof, vec![2f64.sqrt(); 4]);
    }

    #[test]
    fn extreme_points_tie_break_first_occurrence() {
        let e = extreme_points(&contour(&[(0, 0), (5, 0), (5, 5)]));
        assert_eq!(e.left, Point::new(0, 0));
        assert_eq!(e.right, Point::new(5, 0));
        assert_eq!(e.top, Point::new(0, 0));
        assert_eq!(e.bottom, Point::new(5, 5));

        let e = extreme_points(&contour(&[(4, 7)]));
        assert!([e.left, e.right, e.top, e.bottom]
            .iter()
            .all(|&p| p == Point::new(4, 7)));
    }

    #[test]
    fn disk_extremes() {
        let mask = BinaryMask::from_fn(100, 100, |x, y| {
            let (dx, dy) = (x as i64 - 50, y as i64 - 50);
            dx * dx + dy * dy <= 400
        })
        .unwrap();
        let cs = imaging::trace_contours(&mask);
        assert_eq!(cs.len(), 1);
        let e = extreme_points(&cs[0]);
        assert_eq!(e.left, Point::new(30, 50));
        assert_eq!(e.right, Point::new(70, 50));
        assert_eq!(e.top, Point::new(50, 30));
        assert_eq!(e.bottom, Point::new(50, 70));
    }

    #[test]
    fn feature_vector_layout() {
        let e = ExtremePoints {
            left: Point::new(74, 192),
            right: Point::new(153, 149),
            top: Point::new(122, 104),
            bottom: Point::new(74, 239),
        };
        let v = build_feature_vector(
            &Centroid::new(112.0f64, 175.0),
            &e,
            Some("Palm to Palm".into()),
        );
        assert_eq!(v.values, [112, 175, 74, 192, 153, 149, 122, 104, 74, 239]);
        assert_eq!(v.label.as_deref(), Some("Palm to Palm"));

        let z = Point::new(0, 0);
        let zero = ExtremePoints {
            left: z,
            right: z,
            top: z,
            bottom: z,
        };
        assert_eq!(
            build_feature_vector(&Centroid::new(0.0f64, 0.0), &zero, None).values,
            [0; 10]
        );

        let p = Point::new(1, 2);
        let single = ExtremePoints {
            left: p,
            right: p,
            top: p,
            bottom: p,
        };
        let v = build_feature_vector(&Centroid::new(3.9f64, 5.9), &single, None);
        assert_eq!(v.values, [3, 5, 1, 2, 1, 2, 1, 2, 1, 2]);
        assert_eq!(v.label, None);
    }

    #[test]
    fn analyze_skips_small_regions() {
        let mask = BinaryMask::from_fn(20, 20, |x, y| x < 4 && y < 4).unwrap();
        assert!(analyze_mask::<f64>(&mask, 500.0).is_none());
        let f = analyze_mask::<f64>(&mask, 0.0).unwrap();
        assert_eq!(f.area, 9.0);
        assert_eq!(f.centroid, Centroid::new(1.5, 1.5));
    }
}
