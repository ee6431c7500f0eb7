use thiserror::Error;

/// Errors raised by the algebra, state, symmetry and scaling layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),

    #[error("invalid block shape: {0}")]
    InvalidShape(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("subalgebra is not commutative (max commutator norm {0:.3e})")]
    NonCommutative(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("representation is not G-stable: image of spectrum point {point} under group element {element} is not a spectrum point")]
    NotGStable { element: usize, point: usize },

    #[error("group element {element} acts trivially on the central spectrum but is not unitarily implementable (defect {defect:.3e})")]
    NotImplementable { element: usize, defect: f64 },

    #[error("hypothesis failure: {0}")]
    Hypothesis(String),

    #[error("coset space mismatch")]
    CosetMismatch,

    #[error("{0} is not on the scale grid")]
    OffGrid(f64),

    #[error("scale shift by {shift} moves a nonzero fiber out of the strict window")]
    WindowOverflow { shift: i64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("reference state is not faithful (min eigenvalue {0:.3e})")]
    NotFaithful(f64),

    #[error("exponent {0} outside the admissible range")]
    BadExponent(f64),

    #[error("four-vector is not timelike (beta = {beta}); rest frame undefined")]
    NotTimelike { beta: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
