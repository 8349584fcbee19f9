//! The frame bundle `SO(3) → S²` with the lifted circle action.

pub mod chart;
pub mod kernel;
pub mod reduction;

pub use chart::{frame_bundle_operator, invariant_fields, lifted_vector_fields, ChartId, InvariantFields, SphereFrame};
pub use kernel::{closed_form_kernel_section, clutching_check, clutching_defect, pde_residual, GlobalSection};
pub use reduction::{
    compare_block_reductions, quotient_reduced_operator, radial_coefficient, radial_coefficient_via_quotient,
    reduce_block, sigma_reduced_operator, theta_symbol, Chirality, RadialODE, SphereBlock,
};
