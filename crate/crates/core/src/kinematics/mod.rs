//! Transport of deformation measures: on the moving grid, along
//! characteristics, through the inverse motion, and on a periodic plane.

pub mod characteristics;
pub mod grid;
pub mod inverse_motion;
pub mod planar;
pub mod reconstruct;
pub mod transport;

pub use characteristics::{
    integrate_characteristics, integrate_pathline, FnField, Kinematics, Location, PathlineRecord, PathlineSample,
    VelocityField, VelocityFrame, VelocityHistory,
};
pub use grid::{FieldState, Grid1D};
pub use inverse_motion::{advance_inverse_motion, InverseMotion};
pub use reconstruct::{reconstruct_reference, ReferenceSample};
pub use transport::{advance_deformation, advance_elastic, courant_number, TopMotion, CFL_LIMIT};
