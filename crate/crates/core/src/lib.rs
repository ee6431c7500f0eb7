#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod algebra;
pub mod error;
pub mod infogeo;
pub mod linalg;
pub mod runner;
pub mod scaling;
pub mod states;
pub mod symmetry;
pub mod thermal;

pub use error::{Error, Result};
