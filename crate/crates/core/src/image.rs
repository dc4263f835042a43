//! Minimal 8-bit RGB raster with binary PPM (P6) input and output.

use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("malformed PPM: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Rgb = [u8; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    /// Row-major pixels.
    pub pixels: Vec<Rgb>,
}

impl RgbImage {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Self {
        Self {
            width,
            height,
            pixels: vec![color; width * height],
        }
    }

    /// A deterministic test target: a diagonal gradient with a disc and a bar.
    pub fn test_pattern(width: usize, height: usize) -> Self {
        let mut img = Self::filled(width, height, [0, 0, 0]);
        let (w, h) = (width.max(1) as f64, height.max(1) as f64);
        for y in 0..height {
            for x in 0..width {
                let (fx, fy) = (x as f64 / w, y as f64 / h);
                let mut c = [(255.0 * fx) as u8, (255.0 * fy) as u8, 96];
                let (dx, dy) = (fx - 0.35, fy - 0.4);
                if dx * dx + dy * dy < 0.06 {
                    c = [240, 200, 30];
                }
                if (0.7..0.85).contains(&fx) && fy > 0.2 {
                    c = [20, 40, 200];
                }
                img.pixels[y * width + x] = c;
            }
        }
        img
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }

    pub fn from_ppm(bytes: &[u8]) -> Result<Self, ImageError> {
        let mut pos = 0usize;
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
                if bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    pos += 1;
                }
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(ImageError::Format("truncated header".into()));
            }
            fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
        }
        if fields[0] != "P6" {
            return Err(ImageError::Format(format!("expected P6, found {}", fields[0])));
        }
        let num = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| ImageError::Format(format!("bad {what} {s:?}")))
        };
        let (width, height, maxval) = (
            num(&fields[1], "width")?,
            num(&fields[2], "height")?,
            num(&fields[3], "maxval")?,
        );
        if maxval != 255 {
            return Err(ImageError::Format(format!("only 8-bit images supported, maxval {maxval}")));
        }
        // exactly one whitespace byte separates the header from the raster
        pos += 1;
        let need = width * height * 3;
        let data = bytes
            .get(pos..pos + need)
            .ok_or_else(|| ImageError::Format(format!("expected {need} raster bytes")))?;
        Ok(Self {
            width,
            height,
            pixels: data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ImageError> {
        Self::from_ppm(&fs::read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ImageError> {
        fs::write(path, self.to_ppm())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppm_round_trip() {
        let img = RgbImage::test_pattern(7, 5);
        assert_eq!(RgbImage::from_ppm(&img.to_ppm()).unwrap(), img);
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut bytes = b"P6\n# made by hand\n1 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        let img = RgbImage::from_ppm(&bytes).unwrap();
        assert_eq!(img.pixels, vec![[1, 2, 3]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RgbImage::from_ppm(b"P3\n1 1\n255\n").is_err());
        assert!(RgbImage::from_ppm(b"P6\n2 2\n255\n\x00\x00").is_err());
        assert!(RgbImage::from_ppm(b"P6\n1 1\n65535\n\x00\x00\x00").is_err());
    }
}
