//! Frame buffers, YCbCr skin segmentation, contour tracing and contour geometry.

mod codec;
pub(crate) mod contour;
pub mod draw;
mod geometry;

pub use codec::{
    decode_frame, decode_png, decode_ppm, encode_png, encode_ppm, read_frame, write_frame,
};
pub use contour::{trace_contours, Contour, Point};
pub use geometry::{
    contour_area, contour_perimeter, convex_hull, largest_contour, twice_signed_area,
};

use crate::error::{Error, Result};

/// Row-major RGB frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelBuffer {
    width: usize,
    height: usize,
    data: Vec<[u8; 3]>,
}

impl PixelBuffer {
    pub fn new(width: usize, height: usize, data: Vec<[u8; 3]>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(PixelBuffer {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::new(width, height, vec![rgb; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.data[y * self.width + x]
    }

    /// Writes a pixel; coordinates outside the frame are ignored.
    pub fn put(&mut self, x: i64, y: i64, rgb: [u8; 3]) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            let idx = y as usize * self.width + x as usize;
            self.data[idx] = rgb;
        }
    }
}

/// One pixel in YCbCr, channels named to avoid the (Y, Cr, Cb) vs (Y, Cb, Cr) ordering trap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ycbcr {
    pub y: u8,
    pub cb: u8,
    pub cr: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YcbcrBuffer {
    width: usize,
    height: usize,
    data: Vec<Ycbcr>,
}

impl YcbcrBuffer {
    pub fn new(width: usize, height: usize, data: Vec<Ycbcr>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(YcbcrBuffer {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[Ycbcr] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> Ycbcr {
        self.data[y * self.width + x]
    }
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidBuffer(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    if width.checked_mul(height) != Some(len) {
        return Err(Error::InvalidBuffer(format!(
            "{len} pixels for a {width}x{height} frame"
        )));
    }
    Ok(())
}

/// Inclusive per-channel skin thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkinRange {
    pub y_min: u8,
    pub y_max: u8,
    pub cr_min: u8,
    pub cr_max: u8,
    pub cb_min: u8,
    pub cb_max: u8,
}

impl Default for SkinRange {
    /// Y in [0,255], Cr in [133,179], Cb in [77,127].
    fn default() -> Self {
        SkinRange {
            y_min: 0,
            y_max: 255,
            cr_min: 133,
            cr_max: 179,
            cb_min: 77,
            cb_max: 127,
        }
    }
}

impl SkinRange {
    pub fn new(y: (u8, u8), cr: (u8, u8), cb: (u8, u8)) -> Result<Self> {
        for (name, (lo, hi)) in [("Y", y), ("Cr", cr), ("Cb", cb)] {
            if lo > hi {
                return Err(Error::InvalidBuffer(format!(
                    "skin range {name}: min {lo} exceeds max {hi}"
                )));
            }
        }
        Ok(SkinRange {
            y_min: y.0,
            y_max: y.1,
            cr_min: cr.0,
            cr_max: cr.1,
            cb_min: cb.0,
            cb_max: cb.1,
        })
    }

    pub fn contains(&self, px: Ycbcr) -> bool {
        (self.y_min..=self.y_max).contains(&px.y)
            && (self.cr_min..=self.cr_max).contains(&px.cr)
            && (self.cb_min..=self.cb_max).contains(&px.cb)
    }
}

/// Row-major foreground mask; `true` marks skin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        check_dims(width, height, bits.len())?;
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self::new(width, height, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Foreground test with out-of-bounds treated as background.
    pub fn get(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bits[y as usize * self.width + x as usize]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

fn round_channel(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Full-range BT.601 conversion of a single pixel, rounded half-up and clamped.
pub fn rgb_pixel_to_ycbcr([r, g, b]: [u8; 3]) -> Ycbcr {
    let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
    Ycbcr {
        y: round_channel(0.299 * r + 0.587 * g + 0.114 * b),
        cb: round_channel(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b),
        cr: round_channel(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b),
    }
}

pub fn rgb_to_ycbcr(src: &PixelBuffer) -> YcbcrBuffer {
    YcbcrBuffer {
        width: src.width,
        height: src.height,
        data: src.data.iter().map(|&p| rgb_pixel_to_ycbcr(p)).collect(),
    }
}

pub fn skin_mask(src: &YcbcrBuffer, range: &SkinRange) -> BinaryMask {
    BinaryMask {
        width: src.width,
        height: src.height,
        bits: src.data.iter().map(|&p| range.contains(p)).collect(),
    }
}
