//! Complex Clifford algebras C^(n) for n <= 3.
//!
//! Generators satisfy e_i e_j + e_j e_i = -2 delta_ij. Basis blades are
//! indexed by subsets of {1..n} and stored in grade-then-lexicographic order
//! (1, e1, e2, e3, e12, e13, e23, e123), which also fixes the serialization
//! order used by [`std::fmt::Display`].
//!
//! The module also hosts the principal-branch complex functions shared by the
//! whole crate: [`complex_sqrt`], [`complex_ln`] and [`complex_arctan`], all
//! with the argument taken in (-pi, pi].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum supported generator count.
pub const MAX_DIM: usize = 3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Principal argument in (-pi, pi]. A negative-zero imaginary part is treated
/// as zero so that e.g. -1 - 0i still maps to +pi.
fn principal_arg(z: Complex64) -> f64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    im.atan2(z.re)
}

/// Principal square root: |z|^(1/2) e^(i arg(z)/2) with arg(z) in (-pi, pi].
///
/// The result argument therefore lies in (-pi/2, pi/2], so complex_sqrt(-1) = i.
pub fn complex_sqrt(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return ZERO;
    }
    let r = z.norm().sqrt();
    let half = principal_arg(z) / 2.0;
    Complex64::from_polar(r, half)
}

/// Principal logarithm: ln|z| + i arg(z) with arg(z) in (-pi, pi].
pub fn complex_ln(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), principal_arg(z))
}

/// Principal arctangent via (1/2i) ln((1+iz)/(1-iz)).
///
/// Real inputs map into (-pi/2, pi/2). The points z = +-i are poles of the
/// formula and are rejected.
pub fn complex_arctan(z: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    let num = Complex64::new(1.0, 0.0) + i * z;
    let den = Complex64::new(1.0, 0.0) - i * z;
    if num.norm() == 0.0 || den.norm() == 0.0 {
        return Err(Error::SingularInput(format!("arctan is singular at z = {z}")));
    }
    Ok(complex_ln(num / den) / (2.0 * i))
}

/// Blade masks for dimension `n`, sorted by grade then lexicographically.
fn blade_order(n: usize) -> Vec<u8> {
    let mut masks: Vec<u8> = (0..(1u8 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// Position of a blade mask within the fixed basis order.
fn blade_index(n: usize, mask: u8) -> usize {
    blade_order(n).iter().position(|&m| m == mask).unwrap()
}

/// Sign and result mask of the product of two basis blades under e_i^2 = -1.
fn blade_mul(s: u8, t: u8) -> (f64, u8) {
    // Count transpositions needed to interleave t into s in canonical order.
    let mut a = s >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & t).count_ones();
        a >>= 1;
    }
    // Each common generator contracts with e_i^2 = -1.
    let contractions = (s & t).count_ones();
    let sign = if (swaps + contractions) % 2 == 0 { 1.0 } else { -1.0 };
    (sign, s ^ t)
}

fn blade_name(mask: u8) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut s = String::from("e");
    for i in 0..MAX_DIM {
        if mask & (1 << i) != 0 {
            s.push(char::from(b'1' + i as u8));
        }
    }
    s
}

/// A complex Clifford number: one complex coefficient per basis blade.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordNum {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl CliffordNum {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension must be 1..=3");
        CliffordNum {
            n,
            coeffs: vec![ZERO; 1 << n],
        }
    }

    pub fn scalar(n: usize, value: Complex64) -> Self {
        let mut x = Self::zero(n);
        x.coeffs[0] = value;
        x
    }

    /// The generator e_j, 1-based.
    pub fn basis(n: usize, j: usize) -> Self {
        assert!((1..=n).contains(&j), "generator index out of range");
        let mut x = Self::zero(n);
        let idx = blade_index(n, 1 << (j - 1));
        x.coeffs[idx] = Complex64::new(1.0, 0.0);
        x
    }

    /// Builds from coefficients in the fixed basis order (length 2^n).
    pub fn from_coeffs(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients for n={n}, got {}",
                1 << n,
                coeffs.len()
            )));
        }
        Ok(CliffordNum { n, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficients in the fixed basis order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of the blade with generator set `mask` (bit i = e_{i+1}).
    pub fn coeff(&self, mask: u8) -> Complex64 {
        self.coeffs[blade_index(self.n, mask)]
    }

    pub fn coeff_mut(&mut self, mask: u8) -> &mut Complex64 {
        let idx = blade_index(self.n, mask);
        &mut self.coeffs[idx]
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CliffordNum { n: self.n, coeffs })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CliffordNum { n: self.n, coeffs })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        CliffordNum {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Grade projection: keeps blades with exactly `grade` generators.
    pub fn grade(&self, grade: usize) -> Self {
        let order = blade_order(self.n);
        let mut out = Self::zero(self.n);
        for (idx, mask) in order.iter().enumerate() {
            if mask.count_ones() as usize == grade {
                out.coeffs[idx] = self.coeffs[idx];
            }
        }
        out
    }

    /// Coefficient-wise norm, sqrt of the sum of |x_S|^2.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(format!(
                "operands have dimensions {} and {}",
                self.n, rhs.n
            )));
        }
        Ok(())
    }
}

/// Geometric product under e_i e_j = -e_j e_i (i != j), e_i^2 = -1.
pub fn geometric_product(x: &CliffordNum, y: &CliffordNum) -> Result<CliffordNum> {
    x.check_dim(y)?;
    let n = x.n;
    let order = blade_order(n);
    let mut out = CliffordNum::zero(n);
    for (si, &s) in order.iter().enumerate() {
        let xs = x.coeffs[si];
        if xs == ZERO {
            continue;
        }
        for (ti, &t) in order.iter().enumerate() {
            let yt = y.coeffs[ti];
            if yt == ZERO {
                continue;
            }
            let (sign, mask) = blade_mul(s, t);
            let idx = blade_index(n, mask);
            out.coeffs[idx] += xs * yt * sign;
        }
    }
    Ok(out)
}

/// Splits a Clifford number into scalar part, vector part and the rest.
///
/// The three pieces sum back to the input.
pub fn grade_parts(x: &CliffordNum) -> (Complex64, Vec<Complex64>, CliffordNum) {
    let scalar = x.coeffs[0];
    let vector: Vec<Complex64> = (1..=x.n).map(|j| x.coeff(1 << (j - 1))).collect();
    let mut rest = x.clone();
    rest.coeffs[0] = ZERO;
    for j in 1..=x.n {
        *rest.coeff_mut(1 << (j - 1)) = ZERO;
    }
    (scalar, vector, rest)
}

impl std::fmt::Display for CliffordNum {
    /// Serializes as `(re+imi)*eS` terms in the fixed basis order, skipping
    /// exact-zero coefficients. The zero element prints as `0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let order = blade_order(self.n);
        let mut first = true;
        for (idx, &mask) in order.iter().enumerate() {
            let c = self.coeffs[idx];
            if c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.im < 0.0 {
                format!("({}{}i)", c.re, c.im)
            } else {
                format!("({}+{}i)", c.re, c.im)
            };
            if mask == 0 {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{coeff}*{}", blade_name(mask))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A paravector: complex scalar part plus complex vector part.
#[derive(Debug, Clone, PartialEq)]
pub struct Paravector {
    pub scalar: Complex64,
    pub vector: Vec<Complex64>,
}

impl Paravector {
    pub fn new(scalar: Complex64, vector: Vec<Complex64>) -> Self {
        assert!((1..=MAX_DIM).contains(&vector.len()), "dimension must be 1..=3");
        Paravector { scalar, vector }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// Paravector conjugate: scalar part kept, vector part negated.
    pub fn conj(&self) -> Self {
        Paravector {
            scalar: self.scalar,
            vector: self.vector.iter().map(|v| -v).collect(),
        }
    }

    /// Embeds into the full algebra with zero coefficients on grades >= 2.
    pub fn to_clifford(&self) -> CliffordNum {
        let n = self.dim();
        let mut x = CliffordNum::zero(n);
        x.coeffs[0] = self.scalar;
        for (j, &v) in self.vector.iter().enumerate() {
            *x.coeff_mut(1 << j) = v;
        }
        x
    }

    /// Complex pseudo-norm of the full paravector, sqrt(y0^2 + ... + yn^2).
    pub fn pseudo_norm(&self) -> Complex64 {
        let sum = self.scalar * self.scalar
            + self
                .vector
                .iter()
                .map(|v| v * v)
                .sum::<Complex64>();
        complex_sqrt(sum)
    }

    /// Complex pseudo-norm of the vector part, sqrt(y1^2 + ... + yn^2).
    pub fn vector_pseudo_norm(&self) -> Complex64 {
        let sum = self.vector.iter().map(|v| v * v).sum::<Complex64>();
        complex_sqrt(sum)
    }

    pub fn norm(&self) -> f64 {
        (self.scalar.norm_sqr()
            + self.vector.iter().map(|v| v.norm_sqr()).sum::<f64>())
        .sqrt()
    }
}

/// Polar form A e^(I theta) of a paravector with nonvanishing pseudo-norms.
#[derive(Debug, Clone)]
pub struct PolarForm {
    /// Complex amplitude A.
    pub amplitude: Complex64,
    /// Complex phase theta.
    pub theta: Complex64,
    /// Complex unit vector I with I*I = -1 (geometric product).
    pub axis: Vec<Complex64>,
}

impl PolarForm {
    /// cos(theta) + I sin(theta) as a paravector (complex trigonometry).
    pub fn phase_factor(&self) -> Paravector {
        let c = self.theta.cos();
        let s = self.theta.sin();
        Paravector {
            scalar: c,
            vector: self.axis.iter().map(|i| i * s).collect(),
        }
    }

    /// A (cos(theta) + I sin(theta)); reconstructs the decomposed paravector.
    pub fn reconstruct(&self) -> Paravector {
        let phase = self.phase_factor();
        Paravector {
            scalar: self.amplitude * phase.scalar,
            vector: phase.vector.iter().map(|v| self.amplitude * v).collect(),
        }
    }
}

/// Polar decomposition of a paravector.
///
/// Returns `None` (undefined, callers must branch) when the product of the
/// two pseudo-norms vanishes. Otherwise:
///
/// - A = sqrt(y0^2 + ... + yn^2),
/// - I = (y1 e1 + ... + yn en) / sqrt(y1^2 + ... + yn^2),
/// - theta = pi/2 when y0 = 0, else the arctangent of
///   sqrt(y1^2+...+yn^2)/y0, with the log branch aligned so that
///   A e^(I theta) always reconstructs the input. On the aligned set this is
///   exactly the principal arctan; elsewhere the two differ by pi while
///   keeping tan(theta) identical.
pub fn polar_decompose(p: &Paravector) -> Option<PolarForm> {
    let amp = p.pseudo_norm();
    let vnorm = p.vector_pseudo_norm();
    if (amp * vnorm).norm() == 0.0 {
        return None;
    }
    let axis: Vec<Complex64> = p.vector.iter().map(|v| v / vnorm).collect();
    let theta = if p.scalar == ZERO {
        Complex64::new(std::f64::consts::FRAC_PI_2, 0.0)
    } else {
        // e^(i theta) = (y0 + i*vnorm)/A, so cos(theta) = y0/A and
        // sin(theta) = vnorm/A hold exactly on every branch.
        let zeta = (p.scalar + Complex64::i() * vnorm) / amp;
        complex_ln(zeta) / Complex64::i()
    };
    Some(PolarForm {
        amplitude: amp,
        theta,
        axis,
    })
}
