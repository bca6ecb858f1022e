//! Centered discrete Fourier transforms on top of rustfft.
//!
//! The transforms here use grids centered at index N/2 on both sides:
//!
//!   forward:  out[k] = sum_j exp(-i 2 pi (k - N/2)(j - N/2) / N) in[j]
//!   inverse:  out[j] = sum_k exp(+i 2 pi (j - N/2)(k - N/2) / N) in[k]
//!
//! The inverse is unnormalized; forward followed by inverse scales by N.
//! Both reduce to a plain FFT conjugated by (-1)^j / (-1)^k sign flips and a
//! global phase i^(-N), so they are exact for every N.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Plans for one transform length.
#[derive(Clone)]
pub struct CenteredDft {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// exp(-i pi N / 2) = i^(-N).
    phase: Complex64,
}

impl CenteredDft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let phase = match n % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        CenteredDft { n, fwd, inv, phase }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn flip_odd(data: &mut [Complex64]) {
        for z in data.iter_mut().skip(1).step_by(2) {
            *z = -*z;
        }
    }

    /// In-place centered forward transform.
    pub fn forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        Self::flip_odd(data);
        self.fwd.process(data);
        Self::flip_odd(data);
        for z in data.iter_mut() {
            *z *= self.phase;
        }
    }

    /// In-place centered inverse transform (unnormalized).
    pub fn inverse(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        Self::flip_odd(data);
        self.inv.process(data);
        Self::flip_odd(data);
        let conj_phase = self.phase.conj();
        for z in data.iter_mut() {
            *z *= conj_phase;
        }
    }
}

/// Row/column plans for one field shape.
pub struct CenteredDft2D {
    pub rows: CenteredDft,
    pub cols: CenteredDft,
    h: usize,
    w: usize,
}

impl CenteredDft2D {
    pub fn new(h: usize, w: usize) -> Self {
        CenteredDft2D {
            rows: CenteredDft::new(w),
            cols: CenteredDft::new(h),
            h,
            w,
        }
    }

    /// Applies the centered transform along every row, then every column.
    /// `inverse` selects the unnormalized inverse on both axes.
    pub fn transform(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.h * self.w);
        let (h, w) = (self.h, self.w);
        data.par_chunks_exact_mut(w).for_each(|row| {
            if inverse {
                self.rows.inverse(row);
            } else {
                self.rows.forward(row);
            }
        });
        // Columns via transpose so the per-axis pass stays contiguous.
        let mut t = transpose(data, h, w);
        t.par_chunks_exact_mut(h).for_each(|col| {
            if inverse {
                self.cols.inverse(col);
            } else {
                self.cols.forward(col);
            }
        });
        let back = transpose(&t, w, h);
        data.copy_from_slice(&back);
    }
}

fn transpose(data: &[Complex64], h: usize, w: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for r in 0..h {
        for c in 0..w {
            out[c * h + r] = data[r * w + c];
        }
    }
    out
}
