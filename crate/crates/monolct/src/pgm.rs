//! Minimal PGM (portable graymap) reader/writer.
//!
//! Reads binary (P5) and ASCII (P2) files with maxval <= 255; writes always
//! emit P5 with maxval 255 and the canonical header `P5\n{w} {h}\n255\n`,
//! so reading and re-writing a canonical P5 file is byte-identical.
//! Pixel values map to [0, 1] on read and are quantized round-half-up on
//! write.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// A grayscale image with pixels in [0, 1], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub h: usize,
    pub w: usize,
    pub pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(h: usize, w: usize, pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != h * w {
            return Err(Error::DimensionMismatch(format!(
                "{h}x{w} image needs {} pixels, got {}",
                h * w,
                pixels.len()
            )));
        }
        Ok(GrayImage { h, w, pixels })
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Malformed {
            format: "pgm",
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.data.get(self.pos).copied()
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_separators(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(b) = self.peek() {
                    self.pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read_token(&mut self) -> Result<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("unexpected end of header"));
        }
        Ok(&self.data[start..self.pos])
    }

    fn read_number(&mut self, name: &str) -> Result<usize> {
        let tok = self.read_token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| self.err(format!("bad {name} value")))
    }
}

/// Parses PGM bytes (P5 or P2, maxval <= 255).
pub fn decode(data: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { data, pos: 0 };
    let magic = cur.read_token()?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        _ => {
            return Err(Error::Malformed {
                format: "pgm",
                offset: 0,
                msg: "magic must be P5 or P2".into(),
            })
        }
    };
    let w = cur.read_number("width")?;
    let h = cur.read_number("height")?;
    let maxval = cur.read_number("maxval")?;
    if w == 0 || h == 0 {
        return Err(cur.err("zero dimensions"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::Unsupported(format!(
            "maxval {maxval} not supported (need 1..=255)"
        )));
    }
    let mut pixels = Vec::with_capacity(h * w);
    if binary {
        // Exactly one whitespace byte separates the header from raster data.
        match cur.peek() {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(cur.err("missing raster separator")),
        }
        let need = h * w;
        if data.len() - cur.pos < need {
            return Err(Error::Malformed {
                format: "pgm",
                offset: data.len(),
                msg: format!(
                    "truncated raster: expected {need} bytes, got {}",
                    data.len() - cur.pos
                ),
            });
        }
        for &b in &data[cur.pos..cur.pos + need] {
            if b as usize > maxval {
                return Err(cur.err(format!("sample {b} exceeds maxval {maxval}")));
            }
            pixels.push(b as f64 / maxval as f64);
        }
    } else {
        for _ in 0..h * w {
            let v = cur.read_number("sample")?;
            if v > maxval {
                return Err(cur.err(format!("sample {v} exceeds maxval {maxval}")));
            }
            pixels.push(v as f64 / maxval as f64);
        }
    }
    GrayImage::new(h, w, pixels)
}

/// Encodes as binary P5 with maxval 255, quantizing round-half-up.
pub fn encode(img: &GrayImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + img.pixels.len());
    out.extend_from_slice(format!("P5\n{} {}\n255\n", img.w, img.h).as_bytes());
    for &p in &img.pixels {
        let q = (p * 255.0).round().clamp(0.0, 255.0) as u8;
        out.push(q);
    }
    out
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let data = std::fs::read(path)?;
    decode(&data)
}

pub fn write_pgm(path: &Path, img: &GrayImage) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(&encode(img))?;
    Ok(())
}
