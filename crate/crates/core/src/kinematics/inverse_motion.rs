//! Inverse-motion route to `F` for bodies without growth.
//!
//! The reference position `χ⁻¹(x, t)` is passively advected,
//! `∂χ⁻¹/∂t + (v·∇)χ⁻¹ = 0`, and `F = (∇χ⁻¹)⁻¹`. For flows that do not
//! depend on `x1` we store `χ⁻¹(x) = x − d(x2)`; the displacement-like field
//! `d` then obeys `∂d/∂t + v2 ∂d/∂x2 = v` and stays independent of `x1`.
//! Inflow boundaries would need the reference configuration of incoming
//! material, so growth is rejected.

use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Vec2};

use super::grid::Grid1D;
use super::transport::{courant_number, CFL_LIMIT};

#[derive(Debug, Clone, PartialEq)]
pub struct InverseMotion {
    pub grid: Grid1D,
    /// `x − χ⁻¹(x)` per cell.
    pub displacement: Vec<Vec2>,
}

impl InverseMotion {
    /// Reference configuration equal to the current one.
    pub fn identity(grid: Grid1D) -> Self {
        Self {
            grid,
            displacement: vec![Vec2::ZERO; grid.n_cells()],
        }
    }

    /// `χ⁻¹` at the centre of cell `i`, for a point with abscissa `x1`.
    pub fn reference_position(&self, i: usize, x1: f64) -> Vec2 {
        Vec2::new(x1, self.grid.center(i)) - self.displacement[i]
    }

    /// `F = (∇χ⁻¹)⁻¹` per cell, from second-order differences of `d`
    /// (centred inside, one-sided at the two ends).
    pub fn deformation_gradients(&self) -> Result<Vec<Tensor2>> {
        let n = self.grid.n_cells();
        let dx = self.grid.dx();
        let d = &self.displacement;
        (0..n)
            .map(|i| {
                let slope = if i == 0 {
                    (d[1] * 4.0 - d[0] * 3.0 - d[2]) * (0.5 / dx)
                } else if i + 1 == n {
                    (d[n - 1] * 3.0 - d[n - 2] * 4.0 + d[n - 3]) * (0.5 / dx)
                } else {
                    (d[i + 1] - d[i - 1]) * (0.5 / dx)
                };
                let grad_chi_inv = Tensor2::new(1.0, -slope.x1, 0.0, 1.0 - slope.x2);
                grad_chi_inv.inverse()
            })
            .collect()
    }
}

/// Advance `χ⁻¹` by one forward-Euler, first-order upwind step.
///
/// `F` comes from differences of `d`, so ghost values are extrapolated
/// linearly: a constant ghost would leave an `O(Δx)` kink in `d` at the ends
/// and an `O(1)` error in `F`.
///
/// `mass_rate` is the growth rate on the boundary; anything but zero is
/// rejected with [`Error::GrowthNotSupported`].
pub fn advance_inverse_motion(
    field: &InverseMotion,
    v_faces: &[Vec2],
    dt: f64,
    mass_rate: f64,
) -> Result<InverseMotion> {
    if mass_rate != 0.0 {
        return Err(Error::GrowthNotSupported { mass_rate });
    }
    let grid = field.grid;
    let n = grid.n_cells();
    assert_eq!(v_faces.len(), n + 1, "need one velocity per face");
    if !(dt > 0.0) {
        return Err(Error::validation("dt", "time step must be positive"));
    }
    let courant = courant_number(&grid, v_faces, dt, grid.height());
    if courant > CFL_LIMIT {
        return Err(Error::CflViolation {
            courant,
            limit: CFL_LIMIT,
        });
    }
    let inv_dx = 1.0 / grid.dx();
    let d = &field.displacement;
    let displacement = (0..n)
        .map(|i| {
            let v = (v_faces[i] + v_faces[i + 1]) * 0.5;
            let advection = if v.x2 > 0.0 {
                let below = if i == 0 { d[0] * 2.0 - d[1] } else { d[i - 1] };
                (d[i] - below) * (v.x2 * inv_dx)
            } else if v.x2 < 0.0 {
                let above = if i + 1 == n {
                    d[n - 1] * 2.0 - d[n - 2]
                } else {
                    d[i + 1]
                };
                (above - d[i]) * (v.x2 * inv_dx)
            } else {
                Vec2::ZERO
            };
            d[i] + (v - advection) * dt
        })
        .collect();
    Ok(InverseMotion { grid, displacement })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn still_body_keeps_reference() {
        let grid = Grid1D::new(8, 1.0).unwrap();
        let mut motion = InverseMotion::identity(grid);
        for _ in 0..5 {
            motion = advance_inverse_motion(&motion, &[Vec2::ZERO; 9], 0.1, 0.0).unwrap();
        }
        assert!(motion.displacement.iter().all(|d| *d == Vec2::ZERO));
        assert!(motion
            .deformation_gradients()
            .unwrap()
            .iter()
            .all(|f| *f == Tensor2::IDENTITY));
    }

    #[test]
    fn rigid_translation_shifts_reference() {
        let grid = Grid1D::new(8, 1.0).unwrap();
        let c = Vec2::new(0.4, 0.0);
        let mut motion = InverseMotion::identity(grid);
        let dt = 0.05;
        for _ in 0..20 {
            motion = advance_inverse_motion(&motion, &[c; 9], dt, 0.0).unwrap();
        }
        let t = 20.0 * dt;
        for i in 0..8 {
            let x = Vec2::new(0.3, grid.center(i));
            assert!((motion.reference_position(i, 0.3) - (x - c * t)).max_abs() < 1e-14);
        }
        for f in motion.deformation_gradients().unwrap() {
            assert!((f - Tensor2::IDENTITY).max_abs() < 1e-14);
        }
    }

    #[test]
    fn growth_is_rejected() {
        let motion = InverseMotion::identity(Grid1D::new(8, 1.0).unwrap());
        assert!(matches!(
            advance_inverse_motion(&motion, &[Vec2::ZERO; 9], 0.1, 0.2),
            Err(Error::GrowthNotSupported { .. })
        ));
    }
}
