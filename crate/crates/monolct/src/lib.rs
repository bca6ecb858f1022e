//! Linear canonical transform (LCT) signal analysis and phase-based edge detection.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`clifford`]: complex Clifford algebras up to dimension 3, paravectors and
//!   their polar decomposition, and the principal-branch complex functions the
//!   rest of the crate relies on.
//! - [`signal`]: uniformly sampled 1D signals and 2D fields with explicit grid
//!   geometry, plus CSV/binary serialization.
//! - [`lct`]: forward/inverse LCT in 1D and 2D via chirp-FFT-chirp
//!   factorization, with a slow quadrature oracle for verification.
//! - [`analytic`]: the parameter (a,b)-Hilbert transform, the generalized
//!   analytic signal, and its holomorphic extension to the upper half plane.
//! - [`monogenic`]: generalized Riesz transforms, the monogenic signal, and
//!   its Poisson scale-space extension to the upper half space.
//! - [`features`]: per-pixel polar features (amplitude, phase, phase vector,
//!   attenuation) and the Cauchy-Riemann residuals of the chirped field.
//! - [`edge`]: the LCA and MDCPC edge detectors, synthetic ground-truth
//!   images, and the Pratt figure of merit.
//! - [`pgm`]: minimal binary/ASCII PGM I/O (the bit-exact contract format of
//!   the CLI).
//! - [`report`]: deterministic JSON reports (sorted keys, fixed float
//!   formatting).
//! - [`validate`]: self-check suites runnable from the CLI.

pub mod analytic;
pub mod clifford;
pub mod edge;
pub mod error;
pub mod features;
pub mod lct;
pub mod monogenic;
pub mod pgm;
pub mod report;
pub mod signal;
pub mod spectral;
pub mod validate;

pub use error::{Error, Result};
pub use lct::LctParams;
pub use signal::{Field2D, SampledSignal1D};
