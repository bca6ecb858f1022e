//! Forward and inverse linear canonical transforms.
//!
//! For parameters (a, b, c, d) with ad - bc = 1 and b > 0 the transform is
//!
//!   F(w) = 1/sqrt(i 2 pi b) * exp(i d w^2 / 2b)
//!          * integral exp(-i w x / b) [exp(i a x^2 / 2b) f(x)] dx,
//!
//! discretized as pre-chirp, centered FFT scaled by dx, post-chirp. The
//! frequency grid is tied to b: dw = 2 pi b / (N dx), so that the discrete
//! pair is exactly unitary and the inverse (with parameters (d, -b, -c, a))
//! recovers the input to machine precision.
//!
//! For b = 0 the transform is the chirp multiplication
//! sqrt(d) exp(i c d w^2 / 2) f(d w), evaluated on the input grid with
//! linear interpolation; d <= 0 is rejected (the root convention would need
//! a complex sqrt(d)).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::complex_sqrt;
use crate::error::{Error, Result};
use crate::signal::{Field2D, SampledSignal1D};
use crate::spectral::{CenteredDft, CenteredDft2D};

const DET_TOL: f64 = 1e-12;

/// The real parameter 4-tuple (a, b, c, d) with ad - bc = 1 and b >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LctParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LctParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > DET_TOL {
            return Err(Error::InvalidParams(format!(
                "ad - bc = {det} but must equal 1"
            )));
        }
        if b < 0.0 {
            return Err(Error::InvalidParams(
                "b < 0 is not supported; negate the parameter tuple".into(),
            ));
        }
        Ok(LctParams { a, b, c, d })
    }

    /// Completes (a, b) to a full tuple with d = 1 and c = (ad - 1)/b.
    pub fn from_ab(a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::InvalidParams(format!("b must be positive, got {b}")));
        }
        Self::new(a, b, (a - 1.0) / b, 1.0)
    }

    /// The Fourier tuple (0, 1, -1, 0).
    pub fn fourier() -> Self {
        LctParams {
            a: 0.0,
            b: 1.0,
            c: -1.0,
            d: 0.0,
        }
    }

    /// Inversion tuple (d, -b, -c, a). Only used internally: its b is
    /// negative for b > 0 inputs and it is applied with conjugate kernels.
    pub fn inverse_tuple(&self) -> (f64, f64, f64, f64) {
        (self.d, -self.b, -self.c, self.a)
    }

    fn require_b_positive(&self) -> Result<()> {
        if self.b > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "this operation needs b > 0, got b = {}",
                self.b
            )))
        }
    }

    /// True when the pre-chirp phase step a x_max dx / 2b stays below pi/4,
    /// i.e. at least 8 samples per chirp period at the domain edges.
    pub fn chirp_sampling_adequate(&self, x_max: f64, dx: f64) -> bool {
        if self.b == 0.0 {
            return true;
        }
        (self.a * x_max * dx / (2.0 * self.b)).abs() <= std::f64::consts::FRAC_PI_4
    }
}

/// 1/sqrt(i 2 pi b) with the principal root.
fn forward_constant(b: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) / complex_sqrt(Complex64::new(0.0, std::f64::consts::TAU * b))
}

/// 1/sqrt(-i 2 pi b) with the principal root.
fn inverse_constant(b: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) / complex_sqrt(Complex64::new(0.0, -std::f64::consts::TAU * b))
}

fn require_centered(s: &SampledSignal1D) -> Result<()> {
    if s.is_centered() {
        Ok(())
    } else {
        Err(Error::GridMismatch(
            "transforms require the centered grid x_j = (j - N/2) dx".into(),
        ))
    }
}

fn warn_chirp_sampling(p: &LctParams, n: usize, dx: f64) {
    let x_max = (n as f64 / 2.0) * dx;
    if !p.chirp_sampling_adequate(x_max, dx) {
        log::warn!(
            "pre-chirp phase step a*x_max*dx/(2b) = {:.3} exceeds pi/4; \
             the chirp is undersampled at the domain edges",
            (p.a * x_max * dx / (2.0 * p.b)).abs()
        );
    }
}

/// One-axis chirp-FFT-chirp pass, reusable across rows of a field.
struct AxisPass {
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    plan: CenteredDft,
    inverse: bool,
}

impl AxisPass {
    /// Forward pass for an axis with n samples spaced dx. Returns the pass
    /// and the output (frequency) spacing.
    fn forward(p: &LctParams, n: usize, dx: f64, plan: CenteredDft) -> (Self, f64) {
        let dw = std::f64::consts::TAU * p.b / (n as f64 * dx);
        let half = n as f64 / 2.0;
        let pre = (0..n)
            .map(|j| {
                let x = (j as f64 - half) * dx;
                Complex64::from_polar(1.0, p.a * x * x / (2.0 * p.b))
            })
            .collect();
        let konst = forward_constant(p.b) * dx;
        let post = (0..n)
            .map(|k| {
                let w = (k as f64 - half) * dw;
                konst * Complex64::from_polar(1.0, p.d * w * w / (2.0 * p.b))
            })
            .collect();
        (
            AxisPass {
                pre,
                post,
                plan,
                inverse: false,
            },
            dw,
        )
    }

    /// Inverse pass for an axis with n samples spaced dw. Returns the pass
    /// and the output (signal) spacing.
    fn inverse(p: &LctParams, n: usize, dw: f64, plan: CenteredDft) -> (Self, f64) {
        let dx = std::f64::consts::TAU * p.b / (n as f64 * dw);
        let half = n as f64 / 2.0;
        let pre = (0..n)
            .map(|k| {
                let w = (k as f64 - half) * dw;
                Complex64::from_polar(1.0, -p.d * w * w / (2.0 * p.b))
            })
            .collect();
        let konst = inverse_constant(p.b) * dw;
        let post = (0..n)
            .map(|j| {
                let x = (j as f64 - half) * dx;
                konst * Complex64::from_polar(1.0, -p.a * x * x / (2.0 * p.b))
            })
            .collect();
        (
            AxisPass {
                pre,
                post,
                plan,
                inverse: true,
            },
            dx,
        )
    }

    fn apply(&self, data: &mut [Complex64]) {
        for (z, c) in data.iter_mut().zip(&self.pre) {
            *z *= c;
        }
        if self.inverse {
            self.plan.inverse(data);
        } else {
            self.plan.forward(data);
        }
        for (z, c) in data.iter_mut().zip(&self.post) {
            *z *= c;
        }
    }
}

/// Forward 1D LCT. For b > 0 the output lives on the centered frequency
/// grid w_k = (k - N/2) dw with dw = 2 pi b / (N dx); for b = 0 the output
/// stays on the input grid.
pub fn lct_forward_1d(f: &SampledSignal1D, p: &LctParams) -> Result<SampledSignal1D> {
    require_centered(f)?;
    if p.b == 0.0 {
        return chirp_branch_1d(f, p);
    }
    warn_chirp_sampling(p, f.len(), f.dx);
    let n = f.len();
    let (pass, dw) = AxisPass::forward(p, n, f.dx, CenteredDft::new(n));
    let mut data = f.samples.clone();
    pass.apply(&mut data);
    SampledSignal1D::new(data, -(n as f64 / 2.0) * dw, dw)
}

/// Inverse 1D LCT, applying the kernel with parameters (d, -b, -c, a).
/// The input must live on the frequency grid produced by [`lct_forward_1d`]
/// with the same parameters.
pub fn lct_inverse_1d(big_f: &SampledSignal1D, p: &LctParams) -> Result<SampledSignal1D> {
    require_centered(big_f)?;
    if p.b == 0.0 {
        // Inverse of the chirp multiplication is the chirp multiplication
        // with parameters (d, 0, -c, a).
        let q = LctParams::new(p.d, 0.0, -p.c, p.a)?;
        return chirp_branch_1d(big_f, &q);
    }
    let n = big_f.len();
    let (pass, dx) = AxisPass::inverse(p, n, big_f.dx, CenteredDft::new(n));
    let mut data = big_f.samples.clone();
    pass.apply(&mut data);
    SampledSignal1D::new(data, -(n as f64 / 2.0) * dx, dx)
}

/// b = 0 branch: sqrt(d) exp(i c d w^2 / 2) f(d w) on the input grid.
fn chirp_branch_1d(f: &SampledSignal1D, p: &LctParams) -> Result<SampledSignal1D> {
    if p.d <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "b = 0 requires d > 0 for a real root, got d = {}",
            p.d
        )));
    }
    let n = f.len();
    let scale = p.d.sqrt();
    let half = n as f64 / 2.0;
    let samples = (0..n)
        .map(|k| {
            let w = (k as f64 - half) * f.dx;
            let chirp = Complex64::from_polar(1.0, p.c * p.d * w * w / 2.0);
            scale * chirp * sample_linear(f, p.d * w)
        })
        .collect();
    SampledSignal1D::new(samples, f.x0min, f.dx)
}

/// Linear interpolation of a centered signal at an arbitrary coordinate;
/// zero outside the sampled span. Exact on grid nodes.
fn sample_linear(f: &SampledSignal1D, x: f64) -> Complex64 {
    let pos = (x - f.x0min) / f.dx;
    if pos < 0.0 || pos > (f.len() - 1) as f64 {
        return Complex64::new(0.0, 0.0);
    }
    let j0 = pos.floor() as usize;
    let frac = pos - j0 as f64;
    if frac == 0.0 {
        return f.samples[j0];
    }
    let j1 = (j0 + 1).min(f.len() - 1);
    f.samples[j0] * (1.0 - frac) + f.samples[j1] * frac
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Separable 2D LCT: the kernel factors into per-axis 1D kernels, each
/// carrying its own 1/sqrt(+-i 2 pi b), so the overall constant is the
/// square of the 1D one and the stated inversion/Parseval identities hold.
pub fn lct_2d(f: &Field2D, p: &LctParams, direction: Direction) -> Result<Field2D> {
    p.require_b_positive()?;
    warn_chirp_sampling(p, f.w.max(f.h), f.dx.max(f.dy));
    let plans = CenteredDft2D::new(f.h, f.w);
    let (row_pass, out_dx) = match direction {
        Direction::Forward => AxisPass::forward(p, f.w, f.dx, plans.rows.clone()),
        Direction::Inverse => AxisPass::inverse(p, f.w, f.dx, plans.rows.clone()),
    };
    let (col_pass, out_dy) = match direction {
        Direction::Forward => AxisPass::forward(p, f.h, f.dy, plans.cols.clone()),
        Direction::Inverse => AxisPass::inverse(p, f.h, f.dy, plans.cols.clone()),
    };

    let mut data = f.samples.clone();
    data.par_chunks_exact_mut(f.w)
        .for_each(|row| row_pass.apply(row));

    // Column pass over the transposed buffer.
    let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
    for r in 0..f.h {
        for c in 0..f.w {
            t[c * f.h + r] = data[r * f.w + c];
        }
    }
    t.par_chunks_exact_mut(f.h)
        .for_each(|col| col_pass.apply(col));
    for c in 0..f.w {
        for r in 0..f.h {
            data[r * f.w + c] = t[c * f.h + r];
        }
    }

    let mut out = Field2D::zeros(f.h, f.w, out_dx, out_dy)?;
    out.samples = data;
    Ok(out)
}

/// Direct trapezoidal evaluation of the LCT integral at arbitrary
/// frequencies. O(N * M); the ground-truth oracle for [`lct_forward_1d`].
pub fn lct_quadrature_oracle(
    f: &SampledSignal1D,
    p: &LctParams,
    omegas: &[f64],
) -> Result<Vec<Complex64>> {
    p.require_b_positive()?;
    let konst = forward_constant(p.b);
    let n = f.len();
    Ok(omegas
        .iter()
        .map(|&w| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let x = f.x(j);
                let weight = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                let phase = (p.d * w * w - 2.0 * w * x + p.a * x * x) / (2.0 * p.b);
                acc += f.samples[j] * Complex64::from_polar(weight, phase);
            }
            konst * acc * f.dx
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(n: usize, dx: f64) -> SampledSignal1D {
        SampledSignal1D::centered_real(n, dx, |x| (-x * x / 2.0).exp()).unwrap()
    }

    fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    /// Smooth band-limited-ish test signal with a deterministic seed.
    fn random_smooth(n: usize, dx: f64, seed: u64) -> SampledSignal1D {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(f64, f64, f64)> = (0..6)
            .map(|_| {
                (
                    rng.random_range(-1.0..1.0),
                    rng.random_range(0.3..3.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        SampledSignal1D::centered(n, dx, |x| {
            let mut z = Complex64::new(0.0, 0.0);
            for &(amp, freq, phase) in &modes {
                z += Complex64::from_polar(amp, freq * x * std::f64::consts::PI + phase);
            }
            z * (-x * x / 18.0).exp()
        })
        .unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(LctParams::new(1.0, 1.0, 0.0, 1.0).is_ok());
        assert!(LctParams::new(1.0, 1.0, 1.0, 1.0).is_err()); // det = 0
        assert!(LctParams::new(0.0, -1.0, 1.0, 0.0).is_err()); // b < 0
        let p = LctParams::from_ab(2.0, 0.5).unwrap();
        assert!((p.a * p.d - p.b * p.c - 1.0).abs() < 1e-12);
        assert_eq!(p.d, 1.0);
    }

    #[test]
    fn fourier_case_gaussian() {
        // FT of the unit Gaussian is itself; the (0,1,-1,0) kernel carries
        // an extra 1/sqrt(i) = e^{-i pi/4}.
        let n = 1024;
        let f = gaussian(n, 16.0 / n as f64);
        let big = lct_forward_1d(&f, &LctParams::fourier()).unwrap();
        let rot = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        let mut max_err: f64 = 0.0;
        for k in 0..n {
            let w = big.x(k);
            let want = rot * (-w * w / 2.0).exp();
            max_err = max_err.max((big.samples[k] - want).norm());
        }
        assert!(max_err < 1e-10, "max_err = {max_err:.3e}");
    }

    #[test]
    fn identity_params_pass_through() {
        let f = random_smooth(256, 0.05, 7);
        let p = LctParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let out = lct_forward_1d(&f, &p).unwrap();
        assert!(rel_l2(&out.samples, &f.samples) < 1e-14);
        let back = lct_inverse_1d(&out, &p).unwrap();
        assert!(rel_l2(&back.samples, &f.samples) < 1e-14);
    }

    #[test]
    fn chirp_branch_rejects_nonpositive_d() {
        let f = gaussian(64, 0.1);
        // a = -1, d = -1 gives ad - bc = 1 with b = 0.
        let p = LctParams::new(-1.0, 0.0, 0.5, -1.0).unwrap();
        assert!(matches!(
            lct_forward_1d(&f, &p),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn chirp_branch_scaling_matches_direct_evaluation() {
        let f = random_smooth(128, 0.1, 3);
        let p = LctParams::new(2.0, 0.0, 0.3, 0.5).unwrap();
        let out = lct_forward_1d(&f, &p).unwrap();
        for k in (0..128).step_by(7) {
            let w = out.x(k);
            let want = p.d.sqrt()
                * Complex64::from_polar(1.0, p.c * p.d * w * w / 2.0)
                * super::sample_linear(&f, p.d * w);
            assert!((out.samples[k] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn parseval_energy_is_preserved() {
        let f = random_smooth(512, 0.04, 11);
        let p = LctParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let big = lct_forward_1d(&f, &p).unwrap();
        let rel = (big.energy() - f.energy()).abs() / f.energy();
        assert!(rel < 1e-12, "rel = {rel:.3e}");
    }

    #[test]
    fn round_trip_gaussian() {
        let f = gaussian(512, 16.0 / 512.0);
        let p = LctParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let big = lct_forward_1d(&f, &p).unwrap();
        let back = lct_inverse_1d(&big, &p).unwrap();
        assert!((back.dx - f.dx).abs() < 1e-12);
        let max_err = back
            .samples
            .iter()
            .zip(&f.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(max_err < 1e-12, "max_err = {max_err:.3e}");
    }

    #[test]
    fn round_trip_fourier_params() {
        let f = random_smooth(256, 0.06, 5);
        let p = LctParams::fourier();
        let back = lct_inverse_1d(&lct_forward_1d(&f, &p).unwrap(), &p).unwrap();
        assert!(rel_l2(&back.samples, &f.samples) < 1e-13);
    }

    #[test]
    fn oracle_agrees_with_fast_path() {
        let n = 512;
        let f = gaussian(n, 16.0 / n as f64);
        let p = LctParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let fast = lct_forward_1d(&f, &p).unwrap();
        let omegas: Vec<f64> = (0..n).map(|k| fast.x(k)).collect();
        let slow = lct_quadrature_oracle(&f, &p, &omegas).unwrap();
        let rel = rel_l2(&fast.samples, &slow);
        assert!(rel < 1e-4, "rel = {rel:.3e}");
    }

    #[test]
    fn oracle_constant_signal_at_zero_frequency() {
        let n = 256;
        let dx = 0.05;
        let f = SampledSignal1D::centered(n, dx, |_| Complex64::new(1.0, 0.0)).unwrap();
        let p = LctParams::fourier();
        let got = lct_quadrature_oracle(&f, &p, &[0.0]).unwrap()[0];
        // Trapezoid of 1 over the sampled span.
        let span = (n - 1) as f64 * dx;
        let want = forward_constant(1.0) * span;
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn oracle_empty_frequency_list() {
        let f = gaussian(64, 0.2);
        let p = LctParams::fourier();
        assert!(lct_quadrature_oracle(&f, &p, &[]).unwrap().is_empty());
    }

    /// (0,1,-1,0) equals a directly coded unitary Fourier sum times 1/sqrt(i).
    #[test]
    fn reduces_to_unitary_fourier_transform() {
        let n = 128;
        let f = random_smooth(n, 0.1, 17);
        let fast = lct_forward_1d(&f, &LctParams::fourier()).unwrap();
        let inv_sqrt_i = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        let mut max_err: f64 = 0.0;
        for k in 0..n {
            let w = fast.x(k);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let x = f.x(j);
                acc += f.samples[j] * Complex64::from_polar(1.0, -w * x);
            }
            let want = inv_sqrt_i * acc * f.dx / std::f64::consts::TAU.sqrt();
            max_err = max_err.max((fast.samples[k] - want).norm());
        }
        assert!(max_err < 1e-10, "max_err = {max_err:.3e}");
    }

    #[test]
    fn two_dimensional_gaussian_fourier_case() {
        let n = 128;
        let dx = 12.0 / n as f64;
        let f = Field2D::from_fn(n, n, dx, dx, |x, y| {
            Complex64::new((-(x * x + y * y) / 2.0).exp(), 0.0)
        })
        .unwrap();
        let big = lct_2d(&f, &LctParams::fourier(), Direction::Forward).unwrap();
        let rot = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_2);
        let mut max_err: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let (wx, wy) = (big.x(c), big.y(r));
                let want = rot * (-(wx * wx + wy * wy) / 2.0).exp();
                max_err = max_err.max((big.at(r, c) - want).norm());
            }
        }
        assert!(max_err < 1e-9, "max_err = {max_err:.3e}");
    }

    #[test]
    fn two_dimensional_round_trip_and_parseval() {
        let n = 64;
        let f = Field2D::from_fn(n, n, 0.15, 0.15, |x, y| {
            Complex64::new(
                (x * 1.3).sin() * (y * 0.7).cos(),
                (x * 0.4 - y * 1.1).sin(),
            ) * (-(x * x + y * y) / 8.0).exp()
        })
        .unwrap();
        let p = LctParams::new(1.0, 2.0, 0.0, 0.5).unwrap();
        let big = lct_2d(&f, &p, Direction::Forward).unwrap();
        let rel_energy = (big.energy() - f.energy()).abs() / f.energy();
        assert!(rel_energy < 1e-12, "rel_energy = {rel_energy:.3e}");
        let back = lct_2d(&big, &p, Direction::Inverse).unwrap();
        let rel = back.rel_l2_distance(&f);
        assert!(rel < 1e-12, "rel = {rel:.3e}");
    }
}
