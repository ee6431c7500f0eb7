//! Finite-dimensional C*-algebras `M_{n_1} ⊕ … ⊕ M_{n_B}` and their
//! subalgebra calculus.
//!
//! Subalgebras are stored as orthonormal bases under the trace inner product
//! `⟨a, b⟩ = Σᵢ Tr(aᵢ* bᵢ)`, so membership, intersection and commutation
//! constraints all reduce to dense linear algebra. In finite dimensions the
//! bicommutant of a *-algebra is the *-algebra it generates, which is what
//! [`close_under_multiplication`] computes.

mod element;
mod representation;
mod shape;
mod spectrum;
mod subalgebra;

pub use element::AlgebraElement;
pub use representation::{intertwiner_space, Representation, RepresentationStructure};
pub use shape::BlockShape;
pub use spectrum::{minimal_central_projections, CentralSpectrum};
pub use subalgebra::{center, close_under_multiplication, commutant, OperatorSubalgebra};
