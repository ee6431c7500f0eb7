//! The scaling algebra of sections over a geometric scale grid, the
//! renormalization-group action σ̂, lifted states and their central
//! disintegration, and the flow `β → β/λ` of Gibbs states.

mod flow;
mod grid;
mod lifted;
mod section;

pub use flow::{
    flow_table, lifted_dynamics, lifted_kms_defect, rg_flow_of_gibbs, scaled_gibbs_defect, sigma_alpha_covariance,
    FlowRecord, ScaledDynamicsFamily,
};
pub use grid::{Boundary, ScaleGrid};
pub use lifted::{
    canonical_lift, center_restriction, central_disintegration, conditional_expectation_mu, lift_state, mix_lifted,
    pullback, scale_disjoint, scale_sector_witness, scaled_lift, Disintegration, LiftedState, ScaleMeasure,
};
pub use section::{sigma, sigma_index, ScalingSection};
