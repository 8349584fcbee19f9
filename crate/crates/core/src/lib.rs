//! Transverse Dirac-type operators built from explicit frame and connection
//! data.
//!
//! The crate is organised bottom-up:
//!
//! - [`spectral`]: dense numerical kernels (Fourier differentiation,
//!   Hermitian eigensolver, Jacobi SVD, RK4, exponent fitting).
//! - [`clifford`]: complex Clifford-module representations.
//! - [`frame_geometry`]: pointwise frame/connection samples for a splitting
//!   `TM = Q ⊕ L`, the canonical connection correction and mean curvature.
//! - [`transverse_operator`]: chartwise first-order operators `A_Q`, `D_Q`,
//!   their principal symbols and Hermitian discretisations.
//! - [`torus`]: the warped flat torus with its two transverse operators.
//! - [`sphere`]: the frame bundle `SO(3) → S²` with the lifted circle action,
//!   isotypic mode reduction and the quotient operator.
//! - [`index`]: kernel dimensions and the blockwise equivariant index.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clifford;
pub mod error;
pub mod frame_geometry;
pub mod index;
pub mod parallel;
pub mod spectral;
pub mod sphere;
pub mod torus;
pub mod transverse_operator;

pub use error::{Error, Result};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix used for fiber endomorphisms and discretised operators.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Imaginary unit.
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
