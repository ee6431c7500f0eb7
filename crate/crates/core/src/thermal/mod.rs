//! Dynamics generated by block Hamiltonians, Gibbs and ground states, the KMS
//! condition in complex time, and inverse-temperature four-vectors.

mod dynamics;
mod kinematics;
mod kms;

pub use dynamics::{gibbs_state, ground_state, heisenberg_evolve, Dynamics};
pub use kinematics::{
    beta_decompose, lorentz_boost, velocity_to_rapidity, InverseTemperature4Vector, RestFrame,
};
pub use kms::{
    default_probes, kms_defect, kms_report, relativistic_kms_defect, KmsReport, ProbeDefect, KMS_TIME_GRID,
};
