//! Exact and numerical verification of Rankin-Selberg coefficient
//! identities for `GL(3) x GL(2)` over the rationals.

pub mod arith;
pub mod characters;
pub mod coeffs;
pub mod error;
pub mod eulerlib;
pub mod funceq;
pub mod langlands;
pub mod matid;
pub mod random;
pub mod scalar;
pub mod symfunc;
pub mod twists;
pub mod verify;

pub use error::Error;
pub use scalar::{Field, RootOfUnity, Scalar, ScalarMode, C64, Q};
