//! Finite-group actions, the unbroken/broken criterion on the central
//! spectrum, the augmented algebra of sections over `H\G`, and induced
//! covariant representations.

mod action;
mod augmented;
mod breaking;
mod group;
mod induced;

pub use action::{
    average_over_group, coset_average, fixed_point_algebra, group_average, verify_action, ActionAudit, ActionDefect,
    AutomorphicAction, Automorphism,
};
pub(crate) use action::fixed_subspace;
pub use augmented::{AugmentedAlgebra, AugmentedElement};
pub use breaking::{
    classify_breaking, induced_central_action, maximal_unbroken_subgroup, BreakingClassification, BreakingVerdict,
    CovariantPair, UnbrokenSubgroup,
};
pub use group::{CosetSide, CosetSpace, FiniteGroup, Subgroup};
pub use induced::{augmented_center, induce_covariant_representation, AugmentedCentreReport, CovariantRepresentation};
