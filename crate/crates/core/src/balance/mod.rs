//! Balance of mass and momentum: growth boundary conditions, jump
//! diagnostics, the moving boundary, the density update and the quasistatic
//! momentum solver.

mod momentum;
mod tridiag;

pub use momentum::{equilibrate, quasistatic_momentum_solve_1d, Ansatz, MomentumLoad, MomentumSolution, REDUCED_TOL};
pub use tridiag::solve_tridiagonal;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::{courant_number, Grid1D, CFL_LIMIT};
use crate::tensor::{Tensor2, Vec2};

/// What is supplied at a growing surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthInput {
    /// Mass added per unit area and time; negative for ablation.
    pub mass_rate: f64,
    /// Velocity of the added material.
    pub attach_velocity: Vec2,
    /// External traction.
    pub traction: Vec2,
    pub attach_f_e: Tensor2,
}

impl GrowthInput {
    /// Density of the added material, `M / (v_a·n)`, when it is defined.
    pub fn attach_density(&self, n: Vec2) -> Option<f64> {
        let normal = self.attach_velocity.dot(n);
        (self.mass_rate != 0.0 && normal != 0.0).then(|| self.mass_rate / normal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Clamped,
    Growing,
    Traction,
}

/// Normal speed of a growing boundary, `v·n + M/ρ`.
pub fn boundary_normal_velocity(mass_rate: f64, density: f64, v: Vec2, n: Vec2) -> f64 {
    debug_assert!(density > 0.0, "density must be positive");
    v.dot(n) + mass_rate / density
}

/// Traction on a growing boundary, `M (v_a − v) + t_b`.
pub fn growth_traction(mass_rate: f64, attach_velocity: Vec2, v: Vec2, traction: Vec2) -> Vec2 {
    (attach_velocity - v) * mass_rate + traction
}

/// State on one side of a surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideState {
    pub density: f64,
    pub velocity: Vec2,
    pub stress: Tensor2,
}

impl SideState {
    /// Empty space carrying the external traction `t` on a surface with unit
    /// normal `n`.
    pub fn exterior(traction: Vec2, n: Vec2) -> Self {
        Self {
            density: 0.0,
            velocity: Vec2::ZERO,
            stress: Tensor2::new(
                traction.x1 * n.x1,
                traction.x1 * n.x2,
                traction.x2 * n.x1,
                traction.x2 * n.x2,
            ),
        }
    }
}

/// Residuals of the mass and momentum jump conditions across a surface
/// moving with velocity `v_b`.
///
/// `inside` is the body side and `n` points from it to `outside`; the jump
/// `⟦a⟧` is `a_inside − a_outside`.
pub fn jump_residuals(
    inside: &SideState,
    outside: &SideState,
    v_b: Vec2,
    n: Vec2,
    mass_rate: f64,
    attach_velocity: Vec2,
) -> (f64, Vec2) {
    let flux = |s: &SideState| s.density * (v_b - s.velocity).dot(n);
    let (flux_in, flux_out) = (flux(inside), flux(outside));
    let mass = flux_in - flux_out - mass_rate;
    let momentum = inside.velocity * flux_in - outside.velocity * flux_out
        + (inside.stress.apply(n) - outside.stress.apply(n))
        - attach_velocity * mass_rate;
    (mass, momentum)
}

/// Move a boundary with normal speed `speed` for `dt`.
pub fn advance_domain(height: f64, speed: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::validation("dt", "time step must be positive"));
    }
    checked_height(height + speed * dt)
}

/// Height after `steps` steps of length `dt` at constant `rate`, evaluated
/// without accumulating round-off.
pub fn advance_domain_steps(height: f64, rate: f64, dt: f64, steps: u64) -> Result<f64> {
    checked_height(height + rate * (steps as f64 * dt))
}

fn checked_height(height: f64) -> Result<f64> {
    if height > 0.0 && height.is_finite() {
        Ok(height)
    } else {
        Err(Error::NegativeHeight { height })
    }
}

/// Conservative first-order upwind step of `∂ρ/∂t + ∂(ρ v2)/∂x2 = 0`.
///
/// Material entering through either end carries the density of the adjacent
/// cell.
pub fn density_update(grid: &Grid1D, density: &[f64], v_faces: &[Vec2], dt: f64) -> Result<Vec<f64>> {
    let n = grid.n_cells();
    assert_eq!(density.len(), n, "field length must match the grid");
    assert_eq!(v_faces.len(), n + 1, "need one velocity per face");
    let courant = courant_number(grid, v_faces, dt, grid.height());
    if courant > CFL_LIMIT {
        return Err(Error::CflViolation {
            courant,
            limit: CFL_LIMIT,
        });
    }
    let flux: Vec<f64> = (0..=n)
        .map(|j| {
            let v = v_faces[j].x2;
            let upwind = if v > 0.0 {
                density[j.saturating_sub(1)]
            } else {
                density[j.min(n - 1)]
            };
            v * upwind
        })
        .collect();
    let ratio = dt / grid.dx();
    Ok((0..n).map(|i| density[i] - ratio * (flux[i + 1] - flux[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boundary_speed_examples() {
        assert_eq!(boundary_normal_velocity(0.0, 1.0, Vec2::ZERO, Vec2::E2), 0.0);
        assert_eq!(boundary_normal_velocity(2.0, 2.0, Vec2::new(0.3, 0.0), Vec2::E2), 1.0);
        // accretion by a uniform shear flow: M = ρ h v0 / L
        let (rho, h, v0, l) = (1.0, 0.1, 1.0, 1.0);
        let m = rho * h * v0 / l;
        assert!((boundary_normal_velocity(m, rho, Vec2::ZERO, Vec2::E2) - h * v0 / l).abs() < 1e-15);
    }

    #[test]
    fn growth_traction_examples() {
        let tb = Vec2::new(0.2, -0.3);
        assert_eq!(growth_traction(0.0, Vec2::new(5.0, 1.0), Vec2::new(1.0, 2.0), tb), tb);
        assert_eq!(
            growth_traction(0.1, Vec2::E1, Vec2::ZERO, Vec2::ZERO),
            Vec2::new(0.1, 0.0)
        );
        let (rho, h, v0, l) = (1.0, 0.1, 1.0, 1.0);
        let m = rho * h * v0 / l;
        let t = growth_traction(m, Vec2::new(v0, 0.0), Vec2::ZERO, Vec2::ZERO);
        assert!((t.x1 - rho * h * v0 * v0 / l).abs() < 1e-15 && t.x2 == 0.0);
    }

    #[test]
    fn jumps_vanish_for_admissible_states() {
        let s = SideState {
            density: 1.3,
            velocity: Vec2::new(0.2, 0.1),
            stress: Tensor2::new(1.0, 0.3, 0.3, -0.5),
        };
        assert_eq!(
            jump_residuals(&s, &s, Vec2::new(0.0, 0.7), Vec2::E2, 0.0, Vec2::ZERO),
            (0.0, Vec2::ZERO)
        );

        // steady shear accretion: σ = [[(Mv0)², Mv0], [Mv0, 0]], v = 0, v_a = v0 e1
        let (rho, h, v0, l) = (1.0, 0.1, 1.0, 1.0);
        let m = rho * h * v0 / l;
        let body = SideState {
            density: rho,
            velocity: Vec2::ZERO,
            stress: Tensor2::new((m * v0).powi(2), m * v0, m * v0, 0.0),
        };
        let vb = Vec2::new(0.0, boundary_normal_velocity(m, rho, Vec2::ZERO, Vec2::E2));
        let outside = SideState::exterior(Vec2::ZERO, Vec2::E2);
        let (mass, mom) = jump_residuals(&body, &outside, vb, Vec2::E2, m, Vec2::new(v0, 0.0));
        assert!(mass.abs() < 1e-12 && mom.max_abs() < 1e-12);
    }

    #[test]
    fn domain_updates() {
        assert_eq!(advance_domain(1.0, 0.0, 0.1).unwrap(), 1.0);
        assert_eq!(advance_domain(1.0, 1.0, 0.25).unwrap(), 1.25);
        assert!(matches!(
            advance_domain(1.0, -2.0, 0.6),
            Err(Error::NegativeHeight { .. })
        ));
        assert_eq!(
            advance_domain_steps(0.5, 0.1, 0.01, 100).unwrap(),
            0.5 + 0.1 * (100.0 * 0.01)
        );
    }

    #[test]
    fn density_unchanged_without_compression() {
        let grid = Grid1D::new(10, 1.0).unwrap();
        let rho = vec![1.0; 10];
        let shear: Vec<Vec2> = (0..=10).map(|j| Vec2::new(grid.face(j), 0.0)).collect();
        assert_eq!(density_update(&grid, &rho, &shear, 0.05).unwrap(), rho);
        let uniform = vec![Vec2::new(0.0, 0.5); 11];
        assert_eq!(density_update(&grid, &rho, &uniform, 0.05).unwrap(), rho);
    }

    #[test]
    fn compression_grows_density_exponentially() {
        let k = 0.8;
        let grid = Grid1D::new(20, 1.0).unwrap();
        let v: Vec<Vec2> = (0..=20).map(|j| Vec2::new(0.0, -k * grid.face(j))).collect();
        let dt = 1e-3;
        let mut rho = vec![1.0; 20];
        for _ in 0..1000 {
            rho = density_update(&grid, &rho, &v, dt).unwrap();
        }
        let exact = k.exp();
        for r in rho {
            assert!((r / exact - 1.0).abs() < 0.01, "{r} vs {exact}");
        }
    }

    proptest! {
        #[test]
        fn slow_growth_traction_is_linear_in_mass_rate(
            m in -1.0f64..1.0, a in -2.0f64..2.0, b in -2.0f64..2.0,
        ) {
            let va = Vec2::new(a, b);
            let tb = Vec2::new(b, a);
            let t = growth_traction(m, va, Vec2::ZERO, tb);
            prop_assert!((t - tb - va * m).max_abs() <= 1e-15);
            prop_assert_eq!(growth_traction(0.0, va, va * 3.0, tb), tb);
        }

        #[test]
        fn stepped_height_matches_closed_form(h0 in 0.1f64..2.0, rate in 0.0f64..1.0, n in 1u64..1000) {
            let dt = 1e-3;
            prop_assert_eq!(advance_domain_steps(h0, rate, dt, n).unwrap(), h0 + rate * (n as f64 * dt));
        }
    }
}
