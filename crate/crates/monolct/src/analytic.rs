//! Generalized analytic signals in one dimension.
//!
//! The parameter (a,b)-Hilbert transform conjugates the classical Hilbert
//! transform by chirps:
//!
//!   H^{(a,b)} f = exp(-i a x^2 / 2b) * H[exp(i a t^2 / 2b) f(t)],
//!
//! computed spectrally (chirp, FFT, -i sign(w) multiplier, inverse FFT,
//! de-chirp). The generalized analytic signal f + i H^{(a,b)} f has a
//! one-sided spectrum in the LCT domain and extends holomorphically to the
//! upper half plane; [`gas_extend`] evaluates that extension by quadrature
//! over the computed spectrum, and [`poisson_extend_1d`] provides the
//! Poisson / conjugate-Poisson convolution route for cross-checking.

use num_complex::Complex64;

use crate::clifford::complex_sqrt;
use crate::error::{Error, Result};
use crate::lct::{lct_forward_1d, lct_inverse_1d, LctParams};
use crate::signal::SampledSignal1D;
use crate::spectral::CenteredDft;

/// A point z = x + i y in the open upper half plane (y > 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) {
            return Err(Error::InvalidParams(format!(
                "upper half plane requires y > 0, got y = {y}"
            )));
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// A generalized analytic signal: f + i H^{(a,b)} f with its parameters.
#[derive(Debug, Clone)]
pub struct GasSignal {
    pub signal: SampledSignal1D,
    pub a: f64,
    pub b: f64,
}

fn require_b_positive(b: f64) -> Result<()> {
    if b > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("b must be positive, got {b}")))
    }
}

/// Hilbert multiplier on the centered frequency grid: -i sign(w), with the
/// DC bin passed to zero and, for even N, the unpaired most-negative bin
/// (Nyquist) zeroed as well so conjugate symmetry is preserved exactly.
fn hilbert_multiplier(n: usize, k: usize) -> Complex64 {
    let offset = k as f64 - n as f64 / 2.0;
    if offset == 0.0 || (n % 2 == 0 && k == 0) {
        Complex64::new(0.0, 0.0)
    } else if offset > 0.0 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// Parameter (a,b)-Hilbert transform, energy preserving away from the
/// zeroed DC/Nyquist bins.
pub fn pht(f: &SampledSignal1D, a: f64, b: f64) -> Result<SampledSignal1D> {
    require_b_positive(b)?;
    let n = f.len();
    let plan = CenteredDft::new(n);
    let input_real = f.samples.iter().all(|z| z.im == 0.0);

    let mut data: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = f.x(j);
            f.samples[j] * Complex64::from_polar(1.0, a * x * x / (2.0 * b))
        })
        .collect();
    plan.forward(&mut data);
    for (k, z) in data.iter_mut().enumerate() {
        *z *= hilbert_multiplier(n, k);
    }
    plan.inverse(&mut data);
    let scale = 1.0 / n as f64;
    let mut samples: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = f.x(j);
            data[j] * scale * Complex64::from_polar(1.0, -a * x * x / (2.0 * b))
        })
        .collect();
    // For a = 0 the operator maps real signals to real signals and the
    // multiplier preserves conjugate symmetry exactly, so the imaginary
    // part is pure roundoff.
    if a == 0.0 && input_real {
        for z in samples.iter_mut() {
            z.im = 0.0;
        }
    }
    SampledSignal1D::new(samples, f.x0min, f.dx)
}

/// Generalized analytic signal f + i H^{(a,b)} f.
pub fn gas(f: &SampledSignal1D, a: f64, b: f64) -> Result<GasSignal> {
    let h = pht(f, a, b)?;
    let samples = f
        .samples
        .iter()
        .zip(&h.samples)
        .map(|(fz, hz)| fz + Complex64::i() * hz)
        .collect();
    Ok(GasSignal {
        signal: SampledSignal1D::new(samples, f.x0min, f.dx)?,
        a,
        b,
    })
}

/// Spectral-domain weight implementing "suppress the negative frequencies":
/// 2 on positive bins, 0 on negative bins, 1 on the DC bin and (even N) on
/// the unpaired Nyquist bin. Matches 1 + i * hilbert_multiplier exactly.
fn analytic_weight(n: usize, k: usize) -> f64 {
    let offset = k as f64 - n as f64 / 2.0;
    if offset == 0.0 || (n % 2 == 0 && k == 0) {
        1.0
    } else if offset > 0.0 {
        2.0
    } else {
        0.0
    }
}

/// Generalized analytic signal computed through the LCT domain: zero the
/// negative-frequency half of the transform, double the positive half,
/// invert. Agrees with [`gas`] to machine precision.
pub fn gas_spectral(f: &SampledSignal1D, p: &LctParams) -> Result<GasSignal> {
    require_b_positive(p.b)?;
    let mut big = lct_forward_1d(f, p)?;
    let n = big.len();
    for (k, z) in big.samples.iter_mut().enumerate() {
        *z *= analytic_weight(n, k);
    }
    let signal = lct_inverse_1d(&big, p)?;
    Ok(GasSignal {
        signal,
        a: p.a,
        b: p.b,
    })
}

/// Fraction of LCT-domain energy sitting on the negative-frequency half.
pub fn negative_frequency_energy_fraction(s: &SampledSignal1D, p: &LctParams) -> Result<f64> {
    let big = lct_forward_1d(s, p)?;
    let n = big.len();
    let mut neg = 0.0;
    let mut total = 0.0;
    for k in 0..n {
        let e = big.samples[k].norm_sqr();
        total += e;
        if (k as f64 - n as f64 / 2.0) < 0.0 {
            neg += e;
        }
    }
    if total == 0.0 {
        Ok(0.0)
    } else {
        Ok(neg / total)
    }
}

const TAIL_FRACTION_LIMIT: f64 = 1e-6;

/// Evaluates the upper-half-plane extension
/// f_A(z) = 2 * integral_0^inf K^{(d,-b,-c,a)}(z, w) F(w) dw
/// by trapezoidal quadrature over the computed spectrum at each point.
///
/// Fails when the computed spectrum does not decay (tail energy of the
/// outer 10% of bins above 1e-6 of the total), since the integral then has
/// no usable numerical meaning.
pub fn gas_extend(
    f: &SampledSignal1D,
    p: &LctParams,
    pts: &[HalfPlanePoint],
) -> Result<Vec<Complex64>> {
    require_b_positive(p.b)?;
    let big = lct_forward_1d(f, p)?;
    let n = big.len();

    let total: f64 = big.samples.iter().map(|z| z.norm_sqr()).sum();
    let tail_bins = (n / 10).max(1);
    let tail: f64 = big.samples[..tail_bins]
        .iter()
        .chain(&big.samples[n - tail_bins..])
        .map(|z| z.norm_sqr())
        .sum();
    if total > 0.0 && tail / total > TAIL_FRACTION_LIMIT {
        return Err(Error::NonDecayingSpectrum {
            fraction: tail / total,
            limit: TAIL_FRACTION_LIMIT,
        });
    }

    // Kernel K^{(d,-b,-c,a)}(z, w) =
    //   1/sqrt(-i 2 pi b) e^{-i a z^2/2b} e^{i z w / b} e^{-i d w^2/2b}.
    let konst = Complex64::new(1.0, 0.0)
        / complex_sqrt(Complex64::new(0.0, -std::f64::consts::TAU * p.b));
    let dw = big.dx;
    Ok(pts
        .iter()
        .map(|pt| {
            let z = pt.to_complex();
            let zchirp = (-Complex64::i() * p.a * z * z / (2.0 * p.b)).exp();
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let w = big.x(k);
                if w < 0.0 {
                    continue;
                }
                let weight = if w == 0.0 { 0.5 } else { 1.0 };
                let kernel = (Complex64::i() * (z * w / p.b - p.d * w * w / (2.0 * p.b))).exp();
                acc += big.samples[k] * kernel * weight;
            }
            2.0 * konst * zchirp * acc * dw
        })
        .collect())
}

/// Trapezoidal Poisson and conjugate-Poisson convolutions of a sampled
/// signal at one upper-half-plane point:
/// P_y(x) = (1/pi) y/(x^2+y^2), Q_y(x) = (1/pi) x/(x^2+y^2).
pub fn poisson_extend_1d(g: &SampledSignal1D, x: f64, y: f64) -> Result<(Complex64, Complex64)> {
    if !(y > 0.0) {
        return Err(Error::InvalidParams(format!(
            "Poisson extension requires y > 0, got y = {y}"
        )));
    }
    let n = g.len();
    let mut p = Complex64::new(0.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let s = x - g.x(j);
        let weight = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        let den = std::f64::consts::PI * (s * s + y * y);
        p += g.samples[j] * (weight * y / den);
        q += g.samples[j] * (weight * s / den);
    }
    Ok((p * g.dx, q * g.dx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn windowed_cos(n: usize, dx: f64, freq: f64) -> SampledSignal1D {
        SampledSignal1D::centered_real(n, dx, |x| (freq * x).cos())
            .unwrap()
            .windowed(0.1)
    }

    /// Slow principal-value Hilbert sum with symmetric exclusion of the
    /// singular sample; ground truth for the spectral path.
    fn pht_pv_oracle(f: &SampledSignal1D, a: f64, b: f64) -> Vec<Complex64> {
        let n = f.len();
        (0..n)
            .map(|i| {
                let x = f.x(i);
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let t = f.x(j);
                    let chirp = Complex64::from_polar(1.0, a * t * t / (2.0 * b));
                    acc += f.samples[j] * chirp / (x - t);
                }
                let dechirp = Complex64::from_polar(1.0, -a * x * x / (2.0 * b));
                dechirp * acc * f.dx / std::f64::consts::PI
            })
            .collect()
    }

    #[test]
    fn classical_hilbert_pair() {
        let n = 2048;
        let dx = 16.0 / n as f64;
        let f = windowed_cos(n, dx, 5.0);
        let h = pht(&f, 0.0, 1.0).unwrap();
        let mut max_err: f64 = 0.0;
        for j in 0..n {
            let x = f.x(j);
            if x.abs() > 4.0 {
                continue;
            }
            max_err = max_err.max((h.samples[j] - Complex64::new((5.0 * x).sin(), 0.0)).norm());
        }
        assert!(max_err < 1e-3, "max interior error {max_err:.3e}");
    }

    #[test]
    fn rejects_nonpositive_b() {
        let f = windowed_cos(64, 0.1, 2.0);
        assert!(pht(&f, 0.0, 0.0).is_err());
        assert!(pht(&f, 1.0, -1.0).is_err());
    }

    #[test]
    fn double_application_negates() {
        let n = 2048;
        let dx = 16.0 / n as f64;
        let f = windowed_cos(n, dx, 5.0);
        let hh = pht(&pht(&f, 0.0, 1.0).unwrap(), 0.0, 1.0).unwrap();
        let mut max_err: f64 = 0.0;
        for j in 0..n {
            if f.x(j).abs() > 4.0 {
                continue;
            }
            max_err = max_err.max((hh.samples[j] + f.samples[j]).norm());
        }
        assert!(max_err < 1e-3, "max interior error {max_err:.3e}");
    }

    /// Random signal adapted to (a,b): synthesized in the chirped frequency
    /// domain with empty DC/Nyquist bins, where the multiplier is unitary.
    fn random_adapted(n: usize, dx: f64, a: f64, b: f64, seed: u64) -> SampledSignal1D {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut spec = vec![Complex64::new(0.0, 0.0); n];
        for (k, z) in spec.iter_mut().enumerate() {
            let offset = k as f64 - n as f64 / 2.0;
            if offset == 0.0 || k == 0 {
                continue;
            }
            *z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let plan = CenteredDft::new(n);
        plan.inverse(&mut spec);
        let g = SampledSignal1D::new(spec, -(n as f64 / 2.0) * dx, dx).unwrap();
        g.map(|x, z| z * Complex64::from_polar(1.0 / n as f64, -a * x * x / (2.0 * b)))
    }

    #[test]
    fn isometry_on_adapted_signals() {
        for (i, &(a, b)) in [(0.0, 1.0), (1.0, 2.0), (2.0, 1.0), (0.5, 0.7)].iter().enumerate() {
            for seed in 0..5 {
                let f = random_adapted(256, 0.05, a, b, 100 * i as u64 + seed);
                let h = pht(&f, a, b).unwrap();
                let rel = (h.energy() - f.energy()).abs() / f.energy();
                assert!(rel < 1e-12, "a={a} b={b} rel={rel:.3e}");
            }
        }
    }

    #[test]
    fn matches_principal_value_oracle() {
        let n = 512;
        let dx = 16.0 / n as f64;
        let f = windowed_cos(n, dx, 3.0);
        let fast = pht(&f, 1.0, 2.0).unwrap();
        let slow = pht_pv_oracle(&f, 1.0, 2.0);
        // The p.v. sum is a first-order discretization; compare loosely on
        // the interior.
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..n {
            if f.x(j).abs() > 4.0 {
                continue;
            }
            num += (fast.samples[j] - slow[j]).norm_sqr();
            den += slow[j].norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < 5e-2, "rel={rel:.3e}");
    }

    #[test]
    fn gas_of_cosine_is_complex_exponential() {
        let n = 2048;
        let dx = 16.0 / n as f64;
        let f = windowed_cos(n, dx, 5.0);
        let g = gas(&f, 0.0, 1.0).unwrap();
        let mut max_err: f64 = 0.0;
        for j in 0..n {
            let x = f.x(j);
            if x.abs() > 4.0 {
                continue;
            }
            let want = Complex64::from_polar(1.0, 5.0 * x);
            max_err = max_err.max((g.signal.samples[j] - want).norm());
        }
        assert!(max_err < 1e-3, "max interior error {max_err:.3e}");
    }

    #[test]
    fn gas_real_part_is_input() {
        let f = windowed_cos(512, 0.03, 4.0);
        let g = gas(&f, 0.0, 1.0).unwrap();
        for (gz, fz) in g.signal.samples.iter().zip(&f.samples) {
            assert_eq!(gz.re, fz.re);
        }
    }

    #[test]
    fn gas_suppresses_negative_frequencies() {
        let n = 1024;
        let dx = 16.0 / n as f64;
        let f = SampledSignal1D::centered_real(n, dx, |x| {
            (5.0 * x).cos() * (-x * x / 8.0).exp()
        })
        .unwrap();
        let p = LctParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let g = gas(&f, p.a, p.b).unwrap();
        let frac = negative_frequency_energy_fraction(&g.signal, &p).unwrap();
        assert!(frac < 1e-6, "negative-frequency fraction {frac:.3e}");
    }

    #[test]
    fn spectral_route_matches_direct_route() {
        let n = 1024;
        let dx = 16.0 / n as f64;
        let f = windowed_cos(n, dx, 5.0);
        for p in [
            LctParams::fourier(),
            LctParams::new(2.0, 1.0, 1.0, 1.0).unwrap(),
        ] {
            let direct = gas(&f, p.a, p.b).unwrap();
            let spectral = gas_spectral(&f, &p).unwrap();
            let num: f64 = direct
                .signal
                .samples
                .iter()
                .zip(&spectral.signal.samples)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum();
            let den: f64 = direct.signal.samples.iter().map(|z| z.norm_sqr()).sum();
            let rel = (num / den).sqrt();
            assert!(rel < 1e-12, "a={} b={}: rel={rel:.3e}", p.a, p.b);
        }
    }

    #[test]
    fn spectral_route_of_zero_is_zero() {
        let f = SampledSignal1D::centered(64, 0.1, |_| Complex64::new(0.0, 0.0)).unwrap();
        let g = gas_spectral(&f, &LctParams::fourier()).unwrap();
        assert!(g.signal.samples.iter().all(|z| z.norm() < 1e-14));
    }

    fn gaussian_cos(n: usize, dx: f64) -> SampledSignal1D {
        SampledSignal1D::centered_real(n, dx, |x| (5.0 * x).cos() * (-x * x / 2.0).exp()).unwrap()
    }

    #[test]
    fn extension_boundary_limit_recovers_gas() {
        let n = 2048;
        let dx = 40.0 / n as f64;
        let f = gaussian_cos(n, dx);
        let p = LctParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let g = gas(&f, p.a, p.b).unwrap();
        let pts: Vec<HalfPlanePoint> = (0..20)
            .map(|i| HalfPlanePoint::new(-2.0 + 4.0 * i as f64 / 19.0, 1e-3).unwrap())
            .collect();
        let vals = gas_extend(&f, &p, &pts).unwrap();
        let mut max_err: f64 = 0.0;
        for (pt, v) in pts.iter().zip(&vals) {
            // Nearest grid sample.
            let j = ((pt.x() - g.signal.x0min) / g.signal.dx).round() as usize;
            let err = (v - g.signal.samples[j]).norm();
            max_err = max_err.max(err);
        }
        assert!(max_err < 1e-2, "max boundary error {max_err:.3e}");
    }

    #[test]
    fn extension_matches_poisson_convolution() {
        let n = 2048;
        let dx = 40.0 / n as f64;
        let f = gaussian_cos(n, dx);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let pts: Vec<HalfPlanePoint> = (0..10)
            .map(|_| {
                HalfPlanePoint::new(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0))
                    .unwrap()
            })
            .collect();
        for p in [
            LctParams::fourier(),
            LctParams::new(1.0, 1.0, 0.0, 1.0).unwrap(),
            LctParams::new(2.0, 1.0, 1.0, 1.0).unwrap(),
        ] {
            let spectral = gas_extend(&f, &p, &pts).unwrap();
            let g = f.map(|x, z| z * Complex64::from_polar(1.0, p.a * x * x / (2.0 * p.b)));
            let mut num = 0.0;
            let mut den = 0.0;
            for (pt, sv) in pts.iter().zip(&spectral) {
                let (pp, qq) = poisson_extend_1d(&g, pt.x(), pt.y()).unwrap();
                let z = pt.to_complex();
                let chirp = (-Complex64::i() * p.a * z * z / (2.0 * p.b)).exp();
                let direct = chirp * (pp + Complex64::i() * qq);
                num += (sv - direct).norm_sqr();
                den += direct.norm_sqr();
            }
            let rel = (num / den).sqrt();
            assert!(rel < 1e-3, "a={} b={}: rel={rel:.3e}", p.a, p.b);
        }
    }

    #[test]
    fn extension_of_zero_is_zero() {
        let f = SampledSignal1D::centered(256, 0.05, |_| Complex64::new(0.0, 0.0)).unwrap();
        let pts = [HalfPlanePoint::new(0.3, 0.5).unwrap()];
        let vals = gas_extend(&f, &LctParams::fourier(), &pts).unwrap();
        assert!(vals[0].norm() == 0.0);
    }

    #[test]
    fn extension_rejects_flat_spectra() {
        // A spike has a flat spectrum; the tail-energy check must fire.
        let mut f = SampledSignal1D::centered(256, 0.05, |_| Complex64::new(0.0, 0.0)).unwrap();
        f.samples[128] = Complex64::new(1.0, 0.0);
        let pts = [HalfPlanePoint::new(0.0, 0.5).unwrap()];
        assert!(matches!(
            gas_extend(&f, &LctParams::fourier(), &pts),
            Err(Error::NonDecayingSpectrum { .. })
        ));
    }

    #[test]
    fn half_plane_point_requires_positive_height() {
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
        assert!(HalfPlanePoint::new(0.0, -1.0).is_err());
    }

    #[test]
    fn poisson_kernel_has_unit_mass() {
        let g = SampledSignal1D::centered(4096, 0.05, |_| Complex64::new(1.0, 0.0)).unwrap();
        let (p, _) = poisson_extend_1d(&g, 0.3, 0.5).unwrap();
        assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-2, "P = {p}");
    }

    #[test]
    fn poisson_of_cosine_decays_exponentially() {
        // P_y * cos = e^{-y} cos(x), Q_y * cos = e^{-y} sin(x).
        let g = SampledSignal1D::centered(16384, 0.05, |t| Complex64::new(t.cos(), 0.0)).unwrap();
        let (x, y) = (0.7, 0.5);
        let (p, q) = poisson_extend_1d(&g, x, y).unwrap();
        let scale = (-y as f64).exp();
        assert!((p - Complex64::new(scale * x.cos(), 0.0)).norm() < 2e-3, "P = {p}");
        assert!((q - Complex64::new(scale * x.sin(), 0.0)).norm() < 2e-3, "Q = {q}");
    }

    #[test]
    fn holomorphy_stencil_residual() {
        // Discrete Cauchy-Riemann residual of the extension on a 5x5 stencil.
        let n = 2048;
        let dx = 40.0 / n as f64;
        let f = gaussian_cos(n, dx);
        let p = LctParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let (x0, y0, h) = (0.4, 0.8, 0.02);
        let mut pts = Vec::new();
        for iy in 0..5 {
            for ix in 0..5 {
                pts.push(
                    HalfPlanePoint::new(
                        x0 + (ix as f64 - 2.0) * h,
                        y0 + (iy as f64 - 2.0) * h,
                    )
                    .unwrap(),
                );
            }
        }
        let v = gas_extend(&f, &p, &pts).unwrap();
        let at = |ix: usize, iy: usize| v[iy * 5 + ix];
        let mut max_ratio: f64 = 0.0;
        for iy in 1..4 {
            for ix in 1..4 {
                let dzx = (at(ix + 1, iy) - at(ix - 1, iy)) / (2.0 * h);
                let dzy = (at(ix, iy + 1) - at(ix, iy - 1)) / (2.0 * h);
                // Holomorphic: d/dy = i d/dx.
                let residual = (dzy - Complex64::i() * dzx).norm();
                let grad = dzx.norm().max(dzy.norm());
                max_ratio = max_ratio.max(residual / grad);
            }
        }
        assert!(max_ratio < 1e-3, "max CR residual ratio {max_ratio:.3e}");
    }
}
