//! Grid transport of the elastic deformation and of the total deformation
//! gradient, `∂A/∂t + (v·∇)A = (∇v) A`, on the moving through-thickness grid.
//!
//! One step is: first-order upwind advection in `x2` plus a forward-Euler
//! source on the old grid, then a regrid onto `[0, H_new]`. At an accreting
//! top the inflow value is pinned to the new top face; a receding (ablation)
//! top is an outflow and takes no boundary data.

use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Vec2};

use super::grid::{regrid_cells, Grid1D};

/// Largest admissible Courant number.
pub const CFL_LIMIT: f64 = 0.9;

/// Where the top boundary ends up after the step, and what enters through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopMotion {
    pub new_height: f64,
    pub inflow: Option<Tensor2>,
}

impl TopMotion {
    pub fn fixed(height: f64) -> Self {
        Self {
            new_height: height,
            inflow: None,
        }
    }
}

/// Courant number of a step: the larger of the material speed `|v2|` and
/// the boundary speed, times `dt / Δx`.
pub fn courant_number(grid: &Grid1D, v_faces: &[Vec2], dt: f64, new_height: f64) -> f64 {
    let material = v_faces.iter().fold(0.0_f64, |m, v| m.max(v.x2.abs())) * dt;
    let boundary = (new_height - grid.height()).abs();
    material.max(boundary) / grid.dx()
}

fn check_step(
    grid: &Grid1D,
    field_len: usize,
    v_faces: &[Vec2],
    grad_v: &[Tensor2],
    dt: f64,
    new_height: f64,
) -> Result<()> {
    let n = grid.n_cells();
    assert_eq!(field_len, n, "field length must match the grid");
    assert_eq!(v_faces.len(), n + 1, "need one velocity per face");
    assert_eq!(grad_v.len(), n, "need one velocity gradient per cell");
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::validation("dt", "time step must be positive and finite"));
    }
    let courant = courant_number(grid, v_faces, dt, new_height);
    if courant > CFL_LIMIT {
        return Err(Error::CflViolation {
            courant,
            limit: CFL_LIMIT,
        });
    }
    Ok(())
}

fn upwind_step(
    grid: &Grid1D,
    field: &[Tensor2],
    v_faces: &[Vec2],
    grad_v: &[Tensor2],
    dt: f64,
    top_ghost: Tensor2,
) -> Vec<Tensor2> {
    let n = grid.n_cells();
    let inv_dx = 1.0 / grid.dx();
    (0..n)
        .map(|i| {
            let f = field[i];
            let v2 = 0.5 * (v_faces[i].x2 + v_faces[i + 1].x2);
            let advection = if v2 > 0.0 {
                let below = if i == 0 { field[0] } else { field[i - 1] };
                (f - below) * (v2 * inv_dx)
            } else if v2 < 0.0 {
                let above = if i + 1 == n { top_ghost } else { field[i + 1] };
                (above - f) * (v2 * inv_dx)
            } else {
                Tensor2::ZERO
            };
            f + (grad_v[i] * f - advection) * dt
        })
        .collect()
}

/// Advance `F_e` one step and move the top boundary to `top.new_height`.
///
/// Errors with [`Error::MissingInflowBc`] when the boundary grows without an
/// inflow value and with [`Error::CflViolation`] when the step is too long.
pub fn advance_elastic(
    grid: &Grid1D,
    f_e: &[Tensor2],
    v_faces: &[Vec2],
    grad_v: &[Tensor2],
    dt: f64,
    top: TopMotion,
) -> Result<(Grid1D, Vec<Tensor2>)> {
    check_step(grid, f_e.len(), v_faces, grad_v, dt, top.new_height)?;
    let growing = top.new_height > grid.height();
    let inflow = match (growing, top.inflow) {
        (true, None) => return Err(Error::MissingInflowBc),
        (true, Some(value)) => Some(value),
        (false, _) => None,
    };
    let ghost = inflow.unwrap_or(f_e[f_e.len() - 1]);
    let moved = upwind_step(grid, f_e, v_faces, grad_v, dt, ghost);
    let new_grid = grid.with_height(top.new_height)?;
    let out = regrid_cells(grid, &moved, &new_grid, inflow);
    Ok((new_grid, out))
}

/// Advance the total deformation gradient `F`.
///
/// Same scheme as [`advance_elastic`]; material entering through a growing
/// top takes its attachment configuration as reference, `F = I`.
pub fn advance_deformation(
    grid: &Grid1D,
    f: &[Tensor2],
    v_faces: &[Vec2],
    grad_v: &[Tensor2],
    dt: f64,
    new_height: f64,
) -> Result<(Grid1D, Vec<Tensor2>)> {
    advance_elastic(
        grid,
        f,
        v_faces,
        grad_v,
        dt,
        TopMotion {
            new_height,
            inflow: Some(Tensor2::IDENTITY),
        },
    )
}

/// Material rate of `F_e` when the relaxed shape itself evolves:
/// `Ḟ_e = (∇v) F_e + F_e F_relax d/dt(F_relax⁻¹)`.
pub fn elastic_rate_with_relax_evolution(
    f_e: &Tensor2,
    grad_v: &Tensor2,
    f_relax: &Tensor2,
    d_relax_inv_dt: &Tensor2,
) -> Tensor2 {
    *grad_v * *f_e + *f_e * *f_relax * *d_relax_inv_dt
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_rest(n: usize) -> (Vec<Vec2>, Vec<Tensor2>) {
        (vec![Vec2::ZERO; n + 1], vec![Tensor2::ZERO; n])
    }

    #[test]
    fn zero_velocity_leaves_field_unchanged() {
        let grid = Grid1D::new(8, 1.0).unwrap();
        let field: Vec<Tensor2> = (0..8).map(|i| Tensor2::new(1.0, i as f64, 0.5, 2.0)).collect();
        let (v, g) = at_rest(8);
        let (new_grid, out) = advance_elastic(&grid, &field, &v, &g, 0.1, TopMotion::fixed(1.0)).unwrap();
        assert_eq!(new_grid, grid);
        assert_eq!(out, field);
    }

    #[test]
    fn constant_shear_rate_one_step() {
        // Exact solution F_e12(t) = k t; one forward-Euler step reproduces k dt.
        let (k, dt) = (0.3, 0.01);
        let grid = Grid1D::new(8, 1.0).unwrap();
        let field = vec![Tensor2::IDENTITY; 8];
        let v: Vec<Vec2> = (0..=8).map(|j| Vec2::new(k * grid.face(j), 0.0)).collect();
        let g = vec![Tensor2::new(0.0, k, 0.0, 0.0); 8];
        let (_, out) = advance_elastic(&grid, &field, &v, &g, dt, TopMotion::fixed(1.0)).unwrap();
        for f in &out {
            assert!((f.t12() - k * dt).abs() < 1e-15);
            assert_eq!((f.t11(), f.t21(), f.t22()), (1.0, 0.0, 1.0));
        }
        let (_, out) = advance_deformation(&grid, &field, &v, &g, dt, 1.0).unwrap();
        assert!(out.iter().all(|f| (f.t12() - k * dt).abs() < 1e-15));
    }

    #[test]
    fn reduced_shear_form_is_preserved() {
        // Only ∂v1/∂x2 is non-zero: F21 stays 0, F11 = F22 stay 1.
        let grid = Grid1D::new(16, 1.0).unwrap();
        let field: Vec<Tensor2> = grid.centers().map(|x| Tensor2::shear(-0.5 * x)).collect();
        let v: Vec<Vec2> = (0..=16).map(|j| Vec2::new((3.0 * grid.face(j)).sin(), 0.0)).collect();
        let g = super::super::grid::velocity_gradients(&grid, &v);
        let top = TopMotion {
            new_height: 1.05,
            inflow: Some(Tensor2::shear(-0.5)),
        };
        let (_, out) = advance_elastic(&grid, &field, &v, &g, 0.01, top).unwrap();
        for f in &out {
            assert_eq!(f.t21(), 0.0);
            assert_eq!(f.t11(), 1.0);
            assert_eq!(f.t22(), 1.0);
        }
    }

    #[test]
    fn accretion_requires_inflow_and_respects_cfl() {
        let grid = Grid1D::new(8, 1.0).unwrap();
        let field = vec![Tensor2::IDENTITY; 8];
        let (v, g) = at_rest(8);
        let grow = TopMotion {
            new_height: 1.05,
            inflow: None,
        };
        assert!(matches!(
            advance_elastic(&grid, &field, &v, &g, 0.05, grow),
            Err(Error::MissingInflowBc)
        ));
        let too_far = TopMotion {
            new_height: 1.2,
            inflow: Some(Tensor2::IDENTITY),
        };
        assert!(matches!(
            advance_elastic(&grid, &field, &v, &g, 0.05, too_far),
            Err(Error::CflViolation { .. })
        ));
        let fast: Vec<Vec2> = vec![Vec2::new(0.0, 10.0); 9];
        assert!(matches!(
            advance_elastic(&grid, &field, &fast, &g, 0.05, TopMotion::fixed(1.0)),
            Err(Error::CflViolation { .. })
        ));
    }

    #[test]
    fn ablation_needs_no_boundary_value() {
        let grid = Grid1D::new(8, 1.0).unwrap();
        let field: Vec<Tensor2> = grid.centers().map(Tensor2::shear).collect();
        let (v, g) = at_rest(8);
        let (new_grid, out) = advance_elastic(&grid, &field, &v, &g, 0.05, TopMotion::fixed(0.95)).unwrap();
        assert_eq!(new_grid.height(), 0.95);
        // linear data is reproduced exactly inside the old centre range
        for (x, f) in new_grid.centers().zip(&out).skip(1).take(6) {
            assert!((f.t12() - x).abs() < 1e-14);
        }
    }

    #[test]
    fn upwind_advection_moves_a_profile() {
        let grid = Grid1D::new(8, 1.0).unwrap();
        let mut field = vec![Tensor2::IDENTITY; 8];
        field[3] = Tensor2::scaled_identity(2.0);
        let v = vec![Vec2::new(0.0, 1.0); 9];
        let g = vec![Tensor2::ZERO; 8];
        let dx = grid.dx();
        // Courant number 1 exceeds the bound.
        assert!(advance_elastic(&grid, &field, &v, &g, dx, TopMotion::fixed(1.0)).is_err());
        let (_, out) = advance_elastic(&grid, &field, &v, &g, 0.5 * dx, TopMotion::fixed(1.0)).unwrap();
        assert_eq!(out[3].t11(), 1.5);
        assert_eq!(out[4].t11(), 1.5);
    }

    #[test]
    fn relax_evolution_rate() {
        let f = Tensor2::new(1.1, 0.2, -0.1, 0.9);
        let g = Tensor2::new(0.0, 0.4, 0.0, 0.0);
        assert_eq!(
            elastic_rate_with_relax_evolution(&f, &g, &Tensor2::new(1.3, 0.1, 0.0, 0.8), &Tensor2::ZERO),
            g * f
        );
        let beta = 0.25;
        let r =
            elastic_rate_with_relax_evolution(&f, &Tensor2::ZERO, &Tensor2::IDENTITY, &Tensor2::scaled_identity(-beta));
        assert!((r - f * -beta).max_abs() < 1e-15);
        // F_relax = a I, d(F_relax⁻¹)/dt = b I gives (∇v) F_e + a b F_e.
        let (a, b) = (1.5, -0.4);
        let r = elastic_rate_with_relax_evolution(&f, &g, &Tensor2::scaled_identity(a), &Tensor2::scaled_identity(b));
        assert!((r - (g * f + f * (a * b))).max_abs() < 1e-15);
    }
}
