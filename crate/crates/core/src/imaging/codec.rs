//! Binary PPM (P6, maxval 255) and 8-bit PNG frame I/O.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use super::PixelBuffer;
use crate::error::{Error, Result};

fn decode_err(path: &Path, offset: usize, message: impl Into<String>) -> Error {
    Error::Decode {
        path: path.to_path_buf(),
        offset: offset as u64,
        message: message.into(),
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    /// Skips whitespace and `#` comments.
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, path: &Path, what: &str) -> Result<usize> {
        self.skip_blank();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(decode_err(path, start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| decode_err(path, start, format!("{what} out of range")))
    }
}

/// Decodes a binary P6 image with maxval 255.
pub fn decode_ppm(bytes: &[u8], path: &Path) -> Result<PixelBuffer> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(decode_err(path, 0, "missing P6 magic number"));
    }
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number(path, "width")?;
    let height = cur.number(path, "height")?;
    let maxval_at = {
        cur.skip_blank();
        cur.pos
    };
    let maxval = cur.number(path, "maxval")?;
    if maxval != 255 {
        return Err(decode_err(
            path,
            maxval_at,
            format!("unsupported maxval {maxval}"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(decode_err(
            path,
            2,
            format!("zero dimension {width}x{height}"),
        ));
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(decode_err(
                path,
                cur.pos,
                "expected whitespace after maxval",
            ))
        }
    }
    let need = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| decode_err(path, 2, "dimensions overflow"))?;
    let raster = &bytes[cur.pos..];
    if raster.len() < need {
        return Err(decode_err(
            path,
            bytes.len(),
            format!("truncated raster: {} of {need} bytes", raster.len()),
        ));
    }
    let data = raster[..need]
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    PixelBuffer::new(width, height, data)
}

pub fn encode_ppm(buf: &PixelBuffer) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", buf.width(), buf.height()).into_bytes();
    out.reserve(buf.pixels().len() * 3);
    for px in buf.pixels() {
        out.extend_from_slice(px);
    }
    out
}

/// Decodes an 8-bit RGB or RGBA PNG; alpha is dropped.
pub fn decode_png(bytes: &[u8], path: &Path) -> Result<PixelBuffer> {
    let mut cursor = Cursor::new(bytes);
    let decoded = (|| {
        let mut reader = png::Decoder::new(&mut cursor).read_info()?;
        let mut raw = vec![0; reader.output_buffer_size().unwrap_or(0)];
        let info = reader.next_frame(&mut raw)?;
        Ok::<_, png::DecodingError>((info, raw))
    })();
    let (info, raw) =
        decoded.map_err(|e| decode_err(path, cursor.position() as usize, e.to_string()))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(decode_err(
            path,
            0,
            format!("unsupported bit depth {:?}", info.bit_depth),
        ));
    }
    let channels = match info.color_type {
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        other => {
            return Err(decode_err(
                path,
                0,
                format!("unsupported colour type {other:?}"),
            ))
        }
    };
    let (w, h) = (info.width as usize, info.height as usize);
    let mut data = Vec::with_capacity(w * h);
    for row in raw.chunks(info.line_size).take(h) {
        data.extend(
            row[..w * channels]
                .chunks_exact(channels)
                .map(|c| [c[0], c[1], c[2]]),
        );
    }
    PixelBuffer::new(w, h, data)
}

pub fn encode_png(buf: &PixelBuffer, path: &Path) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let wrap = |e: png::EncodingError| decode_err(path, 0, e.to_string());
    {
        let mut enc = png::Encoder::new(&mut out, buf.width() as u32, buf.height() as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().map_err(wrap)?;
        let flat: Vec<u8> = buf.pixels().iter().flatten().copied().collect();
        writer.write_image_data(&flat).map_err(wrap)?;
    }
    Ok(out)
}

fn is_png(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

/// Decodes by content: PNG signature first, otherwise PPM.
pub fn decode_frame(bytes: &[u8], path: &Path) -> Result<PixelBuffer> {
    if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
        decode_png(bytes, path)
    } else {
        decode_ppm(bytes, path)
    }
}

pub fn read_frame(path: &Path) -> Result<PixelBuffer> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_frame(&bytes, path)
}

/// Writes PNG for a `.png` extension and PPM otherwise.
pub fn write_frame(path: &Path, buf: &PixelBuffer) -> Result<()> {
    let bytes = if is_png(path) {
        encode_png(buf, path)?
    } else {
        encode_ppm(buf)
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("frame.ppm")
    }

    #[test]
    fn ppm_encoding_is_exact() {
        let buf = PixelBuffer::new(2, 1, vec![[1, 2, 3], [250, 251, 252]]).unwrap();
        assert_eq!(
            encode_ppm(&buf),
            b"P6\n2 1\n255\n\x01\x02\x03\xfa\xfb\xfc".to_vec()
        );
        assert_eq!(decode_ppm(&encode_ppm(&buf), p()).unwrap(), buf);
    }

    #[test]
    fn ppm_header_comments_and_whitespace() {
        let bytes = b"P6 # made by hand\n  1\t1 # dims\n255\n\x07\x08\x09";
        let buf = decode_ppm(bytes, p()).unwrap();
        assert_eq!(buf.pixels(), &[[7, 8, 9]]);
    }

    #[test]
    fn ppm_errors_carry_offsets() {
        let err = decode_ppm(b"P3\n1 1\n255\n", p()).unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 0, .. }), "{err}");

        let err = decode_ppm(b"P6\n1 1\n65535\n", p()).unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 7, .. }), "{err}");

        let err = decode_ppm(b"P6\n2 2\n255\n\x00\x00\x00", p()).unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 14, .. }), "{err}");
        assert!(err.to_string().starts_with("frame.ppm: byte 14"));

        let err = decode_ppm(b"P6\nx", p()).unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 3, .. }), "{err}");
    }

    #[test]
    fn png_round_trip() {
        let buf = PixelBuffer::from_fn(3, 2, |x, y| [x as u8 * 40, y as u8 * 90, 7]).unwrap();
        let bytes = encode_png(&buf, Path::new("a.png")).unwrap();
        assert_eq!(decode_frame(&bytes, Path::new("a.png")).unwrap(), buf);
    }

    #[test]
    fn png_rgba_drops_alpha() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 2, 1);
            enc.set_color(png::ColorType::Rgba);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[1, 2, 3, 0, 4, 5, 6, 255]).unwrap();
        }
        let buf = decode_png(&out, Path::new("a.png")).unwrap();
        assert_eq!(buf.pixels(), &[[1, 2, 3], [4, 5, 6]]);
    }

    #[test]
    fn png_garbage_is_a_decode_error() {
        let mut bytes = b"\x89PNG\r\n\x1a\n".to_vec();
        bytes.extend_from_slice(&[0; 10]);
        assert!(matches!(
            decode_frame(&bytes, Path::new("x.png")),
            Err(Error::Decode { .. })
        ));
    }
}
