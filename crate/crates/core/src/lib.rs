//! Eulerian simulation of surface growth (accretion and ablation) of
//! incompressible neo-Hookean solids in a through-thickness reduction.
// Negated comparisons such as `!(x > 0.0)` are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balance;
pub mod cli;
pub mod constitutive;
pub mod error;
pub mod io;
pub mod kinematics;
pub mod scenarios;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{Tensor2, Vec2};
