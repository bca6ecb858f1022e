//! Uniformly sampled signals and fields with explicit grid geometry.
//!
//! Grids are centered: helpers place sample j of an N-point signal at
//! x_j = (j - N/2) dx, and pixel (row, col) of an HxW field at
//! (x, y) = ((col - W/2) dx, (row - H/2) dy). The frequency-domain
//! counterpart of an N-point axis sampled at spacing dx carries the spacing
//! 2 pi b / (N dx) under an LCT with parameter b.
//!
//! Serialization formats:
//! - CSV rows `x,re,im` (1D only);
//! - binary "LCT1": 16-byte header (magic `LCT1`, u32 N, f64 dx, little
//!   endian) followed by N little-endian f64 (re, im) pairs; centered grid
//!   implied;
//! - binary "LCT2": header (magic `LCT2`, u32 H, u32 W, f64 dx, f64 dy)
//!   followed by H*W row-major pairs; centered grid implied.

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

const GRID_TOL: f64 = 1e-9;

/// A uniformly sampled complex 1D signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal1D {
    pub samples: Vec<Complex64>,
    /// Coordinate of the first sample.
    pub x0min: f64,
    /// Sample spacing, strictly positive.
    pub dx: f64,
}

impl SampledSignal1D {
    pub fn new(samples: Vec<Complex64>, x0min: f64, dx: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::GridMismatch(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::GridMismatch(format!("spacing must be positive, got {dx}")));
        }
        Ok(SampledSignal1D { samples, x0min, dx })
    }

    /// Builds an N-point centered signal, x_j = (j - N/2) dx.
    pub fn centered(n: usize, dx: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let x0min = -(n as f64 / 2.0) * dx;
        let samples = (0..n)
            .map(|j| f((j as f64 - n as f64 / 2.0) * dx))
            .collect();
        Self::new(samples, x0min, dx)
    }

    /// Builds a centered signal from a real-valued function.
    pub fn centered_real(n: usize, dx: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::centered(n, dx, |x| Complex64::new(f(x), 0.0))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Coordinate of sample j.
    pub fn x(&self, j: usize) -> f64 {
        self.x0min + j as f64 * self.dx
    }

    /// True when the grid is the centered grid x_j = (j - N/2) dx.
    pub fn is_centered(&self) -> bool {
        let expected = -(self.len() as f64 / 2.0) * self.dx;
        (self.x0min - expected).abs() <= GRID_TOL * self.dx * self.len() as f64
    }

    /// Discrete L2 energy, sum |f_j|^2 dx.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx
    }

    /// Pointwise map preserving the grid.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &z)| f(self.x(j), z))
            .collect();
        SampledSignal1D {
            samples,
            x0min: self.x0min,
            dx: self.dx,
        }
    }

    /// Applies a Tukey (raised-cosine) window tapering the outer
    /// `taper_frac` of the domain on each side.
    pub fn windowed(&self, taper_frac: f64) -> Self {
        let n = self.len();
        let w = tukey_window(n, taper_frac);
        let samples = self
            .samples
            .iter()
            .zip(&w)
            .map(|(z, &wj)| z * wj)
            .collect();
        SampledSignal1D {
            samples,
            x0min: self.x0min,
            dx: self.dx,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (j, z) in self.samples.iter().enumerate() {
            writeln!(out, "{},{},{}", self.x(j), z.re, z.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut xs = Vec::new();
        let mut samples = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut parts = t.split(',');
            let mut field = |name: &str| -> Result<f64> {
                parts
                    .next()
                    .ok_or_else(|| Error::Malformed {
                        format: "csv",
                        offset: lineno,
                        msg: format!("missing {name} column"),
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Malformed {
                        format: "csv",
                        offset: lineno,
                        msg: format!("bad {name} value: {e}"),
                    })
            };
            xs.push(field("x")?);
            let re = field("re")?;
            let im = field("im")?;
            samples.push(Complex64::new(re, im));
        }
        if samples.len() < 2 {
            return Err(Error::Malformed {
                format: "csv",
                offset: 0,
                msg: "need at least 2 rows".into(),
            });
        }
        let dx = xs[1] - xs[0];
        if !(dx > 0.0) {
            return Err(Error::GridMismatch("x column must be strictly increasing".into()));
        }
        for (j, pair) in xs.windows(2).enumerate() {
            if ((pair[1] - pair[0]) - dx).abs() > GRID_TOL * dx.abs().max(1.0) {
                return Err(Error::GridMismatch(format!(
                    "non-uniform spacing between rows {j} and {}",
                    j + 1
                )));
            }
        }
        SampledSignal1D::new(samples, xs[0], dx)
    }

    /// Writes the binary "LCT1" format. The grid must be centered since the
    /// header stores only N and dx.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        if !self.is_centered() {
            return Err(Error::GridMismatch(
                "binary LCT1 format requires a centered grid".into(),
            ));
        }
        out.write_all(b"LCT1")?;
        out.write_all(&(self.len() as u32).to_le_bytes())?;
        out.write_all(&self.dx.to_le_bytes())?;
        for z in &self.samples {
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut header = [0u8; 16];
        read_exact_at(&mut input, &mut header, 0, "LCT1")?;
        if &header[0..4] != b"LCT1" {
            return Err(Error::Malformed {
                format: "LCT1",
                offset: 0,
                msg: "bad magic".into(),
            });
        }
        let n = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
        let dx = f64::from_le_bytes(header[8..16].try_into().unwrap());
        let mut body = vec![0u8; n * 16];
        read_exact_at(&mut input, &mut body, 16, "LCT1")?;
        let samples = body
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[0..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..16].try_into().unwrap()),
                )
            })
            .collect();
        SampledSignal1D::new(samples, -(n as f64 / 2.0) * dx, dx)
    }
}

/// A uniformly sampled complex field, row-major, on a centered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub h: usize,
    pub w: usize,
    pub dx: f64,
    pub dy: f64,
    pub samples: Vec<Complex64>,
}

impl Field2D {
    pub fn zeros(h: usize, w: usize, dx: f64, dy: f64) -> Result<Self> {
        if h < 2 || w < 2 {
            return Err(Error::GridMismatch(format!("field must be at least 2x2, got {h}x{w}")));
        }
        if !(dx > 0.0) || !(dy > 0.0) {
            return Err(Error::GridMismatch("spacings must be positive".into()));
        }
        Ok(Field2D {
            h,
            w,
            dx,
            dy,
            samples: vec![Complex64::new(0.0, 0.0); h * w],
        })
    }

    /// Builds an HxW field from a function of the centered coordinates.
    pub fn from_fn(
        h: usize,
        w: usize,
        dx: f64,
        dy: f64,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let mut field = Self::zeros(h, w, dx, dy)?;
        for r in 0..h {
            let y = field.y(r);
            for c in 0..w {
                let x = field.x(c);
                field.samples[r * w + c] = f(x, y);
            }
        }
        Ok(field)
    }

    /// Wraps real-valued pixels (row-major) with unit spacing.
    pub fn from_gray(pixels: &[f64], h: usize, w: usize) -> Result<Self> {
        if pixels.len() != h * w {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} field needs {} pixels, got {}",
                h,
                w,
                h * w,
                pixels.len()
            )));
        }
        let mut field = Self::zeros(h, w, 1.0, 1.0)?;
        for (dst, &p) in field.samples.iter_mut().zip(pixels) {
            *dst = Complex64::new(p, 0.0);
        }
        Ok(field)
    }

    #[inline]
    pub fn idx(&self, row: usize, col: usize) -> usize {
        row * self.w + col
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.samples[self.idx(row, col)]
    }

    /// Horizontal coordinate of a column (axis 1).
    #[inline]
    pub fn x(&self, col: usize) -> f64 {
        (col as f64 - self.w as f64 / 2.0) * self.dx
    }

    /// Vertical coordinate of a row (axis 2).
    #[inline]
    pub fn y(&self, row: usize) -> f64 {
        (row as f64 - self.h as f64 / 2.0) * self.dy
    }

    /// Discrete L2 energy, sum |f|^2 dx dy.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx * self.dy
    }

    pub fn map(&self, f: impl Fn(f64, f64, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for r in 0..self.h {
            let y = self.y(r);
            for c in 0..self.w {
                let x = self.x(c);
                let i = r * self.w + c;
                out.samples[i] = f(x, y, self.samples[i]);
            }
        }
        out
    }

    /// Relative L2 distance to another field on the same grid.
    pub fn rel_l2_distance(&self, other: &Field2D) -> f64 {
        assert_eq!(self.samples.len(), other.samples.len());
        let num: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.samples.iter().map(|z| z.norm_sqr()).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(b"LCT2")?;
        out.write_all(&(self.h as u32).to_le_bytes())?;
        out.write_all(&(self.w as u32).to_le_bytes())?;
        out.write_all(&self.dx.to_le_bytes())?;
        out.write_all(&self.dy.to_le_bytes())?;
        for z in &self.samples {
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut header = [0u8; 28];
        read_exact_at(&mut input, &mut header, 0, "LCT2")?;
        if &header[0..4] != b"LCT2" {
            return Err(Error::Malformed {
                format: "LCT2",
                offset: 0,
                msg: "bad magic".into(),
            });
        }
        let h = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
        let w = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
        let dx = f64::from_le_bytes(header[12..20].try_into().unwrap());
        let dy = f64::from_le_bytes(header[20..28].try_into().unwrap());
        let mut body = vec![0u8; h * w * 16];
        read_exact_at(&mut input, &mut body, 28, "LCT2")?;
        let samples: Vec<Complex64> = body
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[0..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..16].try_into().unwrap()),
                )
            })
            .collect();
        let mut field = Field2D::zeros(h, w, dx, dy)?;
        field.samples = samples;
        Ok(field)
    }
}

fn read_exact_at<R: Read>(
    input: &mut R,
    buf: &mut [u8],
    base: usize,
    format: &'static str,
) -> Result<()> {
    let mut filled = 0;
    while filled < buf.len() {
        let n = input.read(&mut buf[filled..])?;
        if n == 0 {
            return Err(Error::Malformed {
                format,
                offset: base + filled,
                msg: format!("truncated: expected {} more bytes", buf.len() - filled),
            });
        }
        filled += n;
    }
    Ok(())
}

/// Tukey window: flat center, raised-cosine taper over the outer
/// `taper_frac` of each side. `taper_frac = 0.1` tapers the outer 10%.
pub fn tukey_window(n: usize, taper_frac: f64) -> Vec<f64> {
    let taper = taper_frac.clamp(0.0, 0.5);
    let edge = (n as f64 - 1.0) * taper;
    (0..n)
        .map(|j| {
            let u = j as f64;
            let v = (n as f64 - 1.0) - u;
            let d = u.min(v);
            if edge == 0.0 || d >= edge {
                1.0
            } else {
                0.5 * (1.0 - (std::f64::consts::PI * d / edge).cos())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_grid_coordinates() {
        let s = SampledSignal1D::centered(8, 0.5, |x| Complex64::new(x, 0.0)).unwrap();
        assert_eq!(s.x(0), -2.0);
        assert_eq!(s.x(4), 0.0);
        assert_eq!(s.x(7), 1.5);
        assert!(s.is_centered());
    }

    #[test]
    fn csv_round_trip() {
        let s = SampledSignal1D::centered(16, 0.25, |x| Complex64::new(x.sin(), x.cos())).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = SampledSignal1D::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), s.len());
        assert!((back.dx - s.dx).abs() < 1e-12);
        for (a, b) in back.samples.iter().zip(&s.samples) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn binary_round_trip_1d() {
        let s = SampledSignal1D::centered(10, 0.1, |x| Complex64::new(x, -x)).unwrap();
        let mut buf = Vec::new();
        s.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[0..4], b"LCT1");
        assert_eq!(buf.len(), 16 + 10 * 16);
        let back = SampledSignal1D::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn binary_truncation_reports_offset() {
        let s = SampledSignal1D::centered(10, 0.1, |x| Complex64::new(x, 0.0)).unwrap();
        let mut buf = Vec::new();
        s.write_binary(&mut buf).unwrap();
        buf.truncate(40);
        match SampledSignal1D::read_binary(buf.as_slice()) {
            Err(Error::Malformed { offset, .. }) => assert_eq!(offset, 40),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn binary_round_trip_2d() {
        let f = Field2D::from_fn(4, 6, 0.5, 0.25, |x, y| Complex64::new(x * y, x - y)).unwrap();
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        let back = Field2D::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn tukey_window_shape() {
        let w = tukey_window(100, 0.1);
        assert_eq!(w[0], 0.0);
        assert_eq!(w[50], 1.0);
        assert_eq!(w[99], 0.0);
        assert!(w[5] > 0.0 && w[5] < 1.0);
        // Flat region covers the inner 80%.
        assert!(w[15..85].iter().all(|&v| v == 1.0));
    }
}
