//! Numerical kernels shared by the model modules: differentiation matrices,
//! a dense Hermitian eigensolver, a Jacobi SVD, scalar RK4 integrators and
//! least-squares exponent fitting.
//!
//! Everything here is stateless; callers own any parallelism.

mod eigen;
mod fit;
mod fourier;
mod grid;
mod ode;
mod svd;

pub use eigen::{hermitian_defect, hermitian_eigensolve, HermitianSpectrum, HERMITIAN_INPUT_TOL};
pub use fit::{fit_exponent, least_squares_slope};
pub use fourier::{centered_diff_matrix, fourier_diff_matrix};
pub use grid::Grid1D;
pub use ode::{integrate_linear_ode, integrate_log_ode, LogSample, StepVariable, RENORMALIZE_EVERY};
pub use svd::{singular_values, smallest_singular_value};
