//! Per-pixel polar features of the monogenic field.
//!
//! Every pixel of a monogenic field is a paravector (f0, f1, f2); its polar
//! decomposition yields the local complex amplitude A, the complex phase
//! theta, the local complex phase vector r = I theta, and the local complex
//! attenuation rho = ln A. Pixels where the pseudo-norms (nearly) vanish
//! are masked rather than erroring: flat image regions carry no phase
//! vector.
//!
//! [`compute_differentials`] additionally assembles everything the edge
//! detectors and the Cauchy-Riemann residuals need: the spatial gradient of
//! rho, the scale derivatives of rho, r and I (central differences of the
//! re-decomposed features at x0 +- delta, which avoids differentiating
//! through the complex log branch), and the algebraic terms
//! Sc[(De^r)e^{-r}] and Vec[(DI)I].

use num_complex::Complex64;

use crate::clifford::{complex_ln, geometric_product, polar_decompose, Paravector};
use crate::edge::{dirac_apply, CliffordField2D};
use crate::error::{Error, Result};
use crate::lct::LctParams;
use crate::monogenic::{monogenic_extend, MonogenicField};
use crate::signal::Field2D;

const MASK_EPS: f64 = 1e-12;
const BRANCH_JUMP: f64 = std::f64::consts::FRAC_PI_2;

/// Pointwise polar features of a monogenic field.
#[derive(Debug, Clone)]
pub struct FeatureMaps {
    /// Local complex amplitude A.
    pub amplitude: Field2D,
    /// Complex phase theta.
    pub theta: Field2D,
    /// Local phase axis I (complex unit vector), per component.
    pub axis: Vec<Field2D>,
    /// Local complex phase vector r = I theta, per component.
    pub phase_vector: Vec<Field2D>,
    /// Local complex attenuation rho = ln A.
    pub attenuation: Field2D,
    /// True where the decomposition is defined.
    pub defined: Vec<bool>,
}

impl FeatureMaps {
    pub fn h(&self) -> usize {
        self.amplitude.h
    }

    pub fn w(&self) -> usize {
        self.amplitude.w
    }
}

/// Per-pixel polar decomposition with relative masking: pixels whose
/// pseudo-norms fall below 1e-12 of the field maxima are undefined.
pub fn compute_features(field: &MonogenicField) -> FeatureMaps {
    let (h, w) = (field.h(), field.w());
    let grid = &field.scalar;
    let mut amplitude = Field2D::zeros(h, w, grid.dx, grid.dy).unwrap();
    let mut theta = amplitude.clone();
    let mut attenuation = amplitude.clone();
    let mut axis = vec![amplitude.clone(), amplitude.clone()];
    let mut phase_vector = vec![amplitude.clone(), amplitude.clone()];
    let mut defined = vec![false; h * w];

    // First pass: raw decomposition plus the field maxima for masking.
    let mut polar = Vec::with_capacity(h * w);
    let mut vec_norms = Vec::with_capacity(h * w);
    let mut max_amp: f64 = 0.0;
    let mut max_vec: f64 = 0.0;
    for i in 0..h * w {
        let p = Paravector::new(
            field.scalar.samples[i],
            vec![field.vector[0].samples[i], field.vector[1].samples[i]],
        );
        let vn = p.vector_pseudo_norm().norm();
        max_amp = max_amp.max(p.pseudo_norm().norm());
        max_vec = max_vec.max(vn);
        vec_norms.push(vn);
        polar.push(polar_decompose(&p));
    }

    for (i, entry) in polar.into_iter().enumerate() {
        let Some(f) = entry else { continue };
        if f.amplitude.norm() < MASK_EPS * max_amp || vec_norms[i] < MASK_EPS * max_vec {
            continue;
        }
        defined[i] = true;
        amplitude.samples[i] = f.amplitude;
        theta.samples[i] = f.theta;
        attenuation.samples[i] = complex_ln(f.amplitude);
        for j in 0..2 {
            axis[j].samples[i] = f.axis[j];
            phase_vector[j].samples[i] = f.axis[j] * f.theta;
        }
    }

    FeatureMaps {
        amplitude,
        theta,
        axis,
        phase_vector,
        attenuation,
        defined,
    }
}

/// Everything the differential methods need at one scale, masked jointly.
#[derive(Debug, Clone)]
pub struct Differentials {
    pub features: FeatureMaps,
    /// Spatial gradient of rho as the vector components of D rho.
    pub grad_rho: Vec<Field2D>,
    /// d rho / d x0.
    pub drho_dx0: Field2D,
    /// d r / d x0, per component.
    pub dr_dx0: Vec<Field2D>,
    /// d I / d x0, per component.
    pub di_dx0: Vec<Field2D>,
    /// Sc[(D e^r) e^{-r}].
    pub sc_term: Field2D,
    /// Vec[(D I) I], per component.
    pub vec_term: Vec<Field2D>,
    /// sin^2(theta).
    pub sin_sq: Field2D,
    /// sin(theta) cos(theta) - theta.
    pub sincos_minus_theta: Field2D,
    /// Joint mask: defined at all three scales, no branch jumps, full
    /// interior stencil.
    pub defined: Vec<bool>,
    pub x0: f64,
    pub delta: f64,
}

/// Assembles the differential feature terms at scale x0 > 0 with scale
/// derivatives taken at x0 +- delta (default x0/100).
pub fn compute_differentials(
    f: &Field2D,
    p: &LctParams,
    x0: f64,
    delta: Option<f64>,
) -> Result<Differentials> {
    if !(x0 > 0.0) {
        return Err(Error::InvalidParams(format!("x0 must be positive, got {x0}")));
    }
    let delta = delta.unwrap_or(x0 / 100.0);
    if !(delta > 0.0 && delta < x0) {
        return Err(Error::InvalidParams(format!(
            "scale step must satisfy 0 < delta < x0, got {delta}"
        )));
    }
    let mid = monogenic_extend(f, p, x0)?;
    let plus = monogenic_extend(f, p, x0 + delta)?;
    let minus = monogenic_extend(f, p, x0 - delta)?;
    let feats = compute_features(&mid);
    let f_plus = compute_features(&plus);
    let f_minus = compute_features(&minus);

    let (h, w) = (feats.h(), feats.w());
    let zero = Field2D::zeros(h, w, f.dx, f.dy)?;

    // Joint mask: defined at the three scales, no scale-direction branch
    // jump, interior pixels, no spatial branch jump to any 4-neighbor.
    let mut defined = vec![false; h * w];
    for r in 1..h - 1 {
        for c in 1..w - 1 {
            let i = r * w + c;
            if !(feats.defined[i] && f_plus.defined[i] && f_minus.defined[i]) {
                continue;
            }
            if (f_plus.theta.samples[i] - f_minus.theta.samples[i]).norm() > BRANCH_JUMP {
                continue;
            }
            let ok = [i - 1, i + 1, i - w, i + w].iter().all(|&nb| {
                feats.defined[nb]
                    && (feats.theta.samples[i] - feats.theta.samples[nb]).norm() <= BRANCH_JUMP
                    && (feats.attenuation.samples[i].im - feats.attenuation.samples[nb].im).abs()
                        <= BRANCH_JUMP
            });
            if ok {
                defined[i] = true;
            }
        }
    }

    // Scale derivatives by central differences of the decomposed features.
    let mut drho_dx0 = zero.clone();
    let mut dr_dx0 = vec![zero.clone(), zero.clone()];
    let mut di_dx0 = vec![zero.clone(), zero.clone()];
    for i in 0..h * w {
        if !defined[i] {
            continue;
        }
        let inv = 1.0 / (2.0 * delta);
        drho_dx0.samples[i] =
            (f_plus.attenuation.samples[i] - f_minus.attenuation.samples[i]) * inv;
        for j in 0..2 {
            dr_dx0[j].samples[i] =
                (f_plus.phase_vector[j].samples[i] - f_minus.phase_vector[j].samples[i]) * inv;
            di_dx0[j].samples[i] =
                (f_plus.axis[j].samples[i] - f_minus.axis[j].samples[i]) * inv;
        }
    }

    // Spatial terms. D rho for a scalar field is the gradient placed on the
    // vector blades.
    let rho_field = CliffordField2D::from_scalar(&feats.attenuation);
    let d_rho = dirac_apply(&rho_field)?;
    let grad_rho = vec![d_rho.comps[1].clone(), d_rho.comps[2].clone()];

    // e^r = cos(theta) + I sin(theta) as a paravector field.
    let mut exp_r = CliffordField2D::zeros(2, h, w, f.dx, f.dy)?;
    let mut axis_field = CliffordField2D::zeros(2, h, w, f.dx, f.dy)?;
    for i in 0..h * w {
        if !feats.defined[i] {
            continue;
        }
        let ct = feats.theta.samples[i].cos();
        let st = feats.theta.samples[i].sin();
        exp_r.comps[0].samples[i] = ct;
        exp_r.comps[1].samples[i] = feats.axis[0].samples[i] * st;
        exp_r.comps[2].samples[i] = feats.axis[1].samples[i] * st;
        axis_field.comps[1].samples[i] = feats.axis[0].samples[i];
        axis_field.comps[2].samples[i] = feats.axis[1].samples[i];
    }
    let d_exp_r = dirac_apply(&exp_r)?;
    let d_axis = dirac_apply(&axis_field)?;

    let mut sc_term = zero.clone();
    let mut vec_term = vec![zero.clone(), zero.clone()];
    let mut sin_sq = zero.clone();
    let mut sincos_minus_theta = zero.clone();
    for i in 0..h * w {
        if !defined[i] {
            continue;
        }
        let theta = feats.theta.samples[i];
        let (ct, st) = (theta.cos(), theta.sin());
        sin_sq.samples[i] = st * st;
        sincos_minus_theta.samples[i] = st * ct - theta;

        // (D e^r) e^{-r} with e^{-r} = cos(theta) - I sin(theta).
        let de_r = d_exp_r.at(i);
        let exp_neg = Paravector::new(
            ct,
            vec![
                -feats.axis[0].samples[i] * st,
                -feats.axis[1].samples[i] * st,
            ],
        )
        .to_clifford();
        let prod = geometric_product(&de_r, &exp_neg)?;
        sc_term.samples[i] = prod.coeff(0);

        // (D I) I, grade-1 part.
        let di = d_axis.at(i);
        let axis_num = Paravector::new(
            Complex64::new(0.0, 0.0),
            vec![feats.axis[0].samples[i], feats.axis[1].samples[i]],
        )
        .to_clifford();
        let di_i = geometric_product(&di, &axis_num)?;
        vec_term[0].samples[i] = di_i.coeff(0b01);
        vec_term[1].samples[i] = di_i.coeff(0b10);
    }

    Ok(Differentials {
        features: feats,
        grad_rho,
        drho_dx0,
        dr_dx0,
        di_dx0,
        sc_term,
        vec_term,
        sin_sq,
        sincos_minus_theta,
        defined,
        x0,
        delta,
    })
}

/// Cauchy-Riemann residuals of the chirped scale-space field.
#[derive(Debug, Clone)]
pub struct CrResiduals {
    /// Scalar residual: i (a/b) x0 + d rho/d x0 + Sc[(De^r)e^{-r}].
    pub scalar: Field2D,
    /// Vector residual components:
    /// i (a/b) x_j + d r_j/d x0 + (D rho)_j - Vec[(DI)I]_j sin^2 theta
    /// + (sin theta cos theta - theta) d I_j/d x0.
    pub vector: Vec<Field2D>,
    pub defined: Vec<bool>,
}

impl CrResiduals {
    /// Median modulus of the scalar residual over defined pixels.
    pub fn median_scalar(&self) -> f64 {
        median_norm(&self.scalar, &self.defined)
    }

    /// Median Euclidean norm of the vector residual over defined pixels.
    pub fn median_vector(&self) -> f64 {
        median_vec_norm(&self.vector, &self.defined)
    }
}

pub(crate) fn median_norm(f: &Field2D, mask: &[bool]) -> f64 {
    let mut vals: Vec<f64> = f
        .samples
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(z, _)| z.norm())
        .collect();
    median_of(&mut vals)
}

pub(crate) fn median_vec_norm(comps: &[Field2D], mask: &[bool]) -> f64 {
    let mut vals: Vec<f64> = (0..mask.len())
        .filter(|&i| mask[i])
        .map(|i| {
            comps
                .iter()
                .map(|f| f.samples[i].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    median_of(&mut vals)
}

fn median_of(vals: &mut [f64]) -> f64 {
    if vals.is_empty() {
        return 0.0;
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals[vals.len() / 2]
}

/// Computes the Cauchy-Riemann residuals at scale x0 > 0; both should be
/// small wherever the polar features are smooth.
pub fn cr_residuals(
    f: &Field2D,
    p: &LctParams,
    x0: f64,
    delta: Option<f64>,
) -> Result<CrResiduals> {
    let d = compute_differentials(f, p, x0, delta)?;
    let (h, w) = (d.features.h(), d.features.w());
    let mut scalar = Field2D::zeros(h, w, f.dx, f.dy)?;
    let mut vector = vec![scalar.clone(), scalar.clone()];
    let ab = p.a / p.b;
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if !d.defined[i] {
                continue;
            }
            scalar.samples[i] = Complex64::new(0.0, ab * x0)
                + d.drho_dx0.samples[i]
                + d.sc_term.samples[i];
            let coords = [f.x(c), f.y(r)];
            for j in 0..2 {
                vector[j].samples[i] = Complex64::new(0.0, ab * coords[j])
                    + d.dr_dx0[j].samples[i]
                    + d.grad_rho[j].samples[i]
                    - d.vec_term[j].samples[i] * d.sin_sq.samples[i]
                    + d.sincos_minus_theta.samples[i] * d.di_dx0[j].samples[i];
            }
        }
    }
    Ok(CrResiduals {
        scalar,
        vector,
        defined: d.defined,
    })
}
