//! Quasistatic momentum balance for fields that depend on `x2` only.
//!
//! With `∂/∂x1 = 0` and incompressibility, `v2` vanishes (clamped base) and
//! the two equilibrium equations decouple:
//!
//! * `∂σ22/∂x2 + ρ b2 = 0` fixes the pressure algebraically from the top
//!   normal traction;
//! * `∂σ12/∂x2 + ρ b1 = 0` with `σ12 = G c + μ ∂v1/∂x2`,
//!   `c = Fe11 Fe21 + Fe12 Fe22`, is a two-point problem for `v1` solved on
//!   the faces with a tridiagonal system.

use crate::constitutive::MaterialParams;
use crate::error::{Error, Result};
use crate::kinematics::Grid1D;
use crate::tensor::{Tensor2, Vec2};

use super::tridiag::solve_tridiagonal;

/// Largest deviation from the unit-shear form accepted by [`Ansatz::UnitShear`].
pub const REDUCED_TOL: f64 = 1e-8;

/// Which elastic deformations the solver accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ansatz {
    /// `Fe = [[1, γ], [0, 1]]` in every cell.
    UnitShear,
    /// Any `Fe(x2)`.
    General,
}

/// Loads on the layer. The traction on the top face is
/// `top_traction − top_drag · v(H)`, so a velocity-dependent growth traction
/// is solved implicitly together with the velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumLoad {
    pub top_traction: Vec2,
    pub top_drag: f64,
    pub body_force: Vec2,
}

impl MomentumLoad {
    pub fn traction(top_traction: Vec2) -> Self {
        Self {
            top_traction,
            top_drag: 0.0,
            body_force: Vec2::ZERO,
        }
    }

    /// Growth traction `M (v_a − v) + t_b` with `v` the unknown surface
    /// velocity.
    pub fn growth(mass_rate: f64, attach_velocity: Vec2, traction: Vec2) -> Self {
        Self {
            top_traction: attach_velocity * mass_rate + traction,
            top_drag: mass_rate,
            body_force: Vec2::ZERO,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSolution {
    pub v_faces: Vec<Vec2>,
    /// `∂v1/∂x2` per cell, from the local shear balance
    /// `μ ∂v1/∂x2 = σ12 − G c`. Equal to the face differences of `v_faces`
    /// up to round-off, but with relative precision where `Fe` is small.
    pub shear_rate: Vec<f64>,
    pub pressure: Vec<f64>,
    /// Largest discrete equilibrium residual over faces, in stress units.
    pub residual: f64,
    /// `|σ n − t|` at the top face.
    pub top_residual: f64,
}

impl MomentumSolution {
    /// `∇v` per cell built from [`MomentumSolution::shear_rate`].
    pub fn velocity_gradients(&self) -> Vec<Tensor2> {
        self.shear_rate
            .iter()
            .map(|&r| Tensor2::new(0.0, r, 0.0, 0.0))
            .collect()
    }
}

fn check_ansatz(f_e: &[Tensor2], ansatz: Ansatz) -> Result<()> {
    if ansatz == Ansatz::General {
        return Ok(());
    }
    for (cell, f) in f_e.iter().enumerate() {
        let deviation = f.t21().abs().max((f.t11() - 1.0).abs()).max((f.t22() - 1.0).abs());
        if !(deviation <= REDUCED_TOL) {
            return Err(Error::NotReduced { cell, deviation });
        }
    }
    Ok(())
}

/// Elastic shear stress per unit modulus, `(Fe Feᵀ)12`.
fn shear_part(f: &Tensor2) -> f64 {
    f.t11() * f.t21() + f.t12() * f.t22()
}

/// Solve for `v` (on faces) and `p` (per cell) given `Fe` per cell.
///
/// The base face is clamped; the top face carries `load.top_traction`.
pub fn quasistatic_momentum_solve_1d(
    grid: &Grid1D,
    f_e: &[Tensor2],
    params: &MaterialParams,
    load: MomentumLoad,
    ansatz: Ansatz,
) -> Result<MomentumSolution> {
    let n = grid.n_cells();
    assert_eq!(f_e.len(), n, "field length must match the grid");
    check_ansatz(f_e, ansatz)?;
    let g = params.shear_modulus;
    let mu = params.viscosity;
    if !(mu > 0.0) {
        return Err(Error::SingularSystem("viscosity must be positive".into()));
    }
    let dx = grid.dx();
    let rho = params.density;
    let b = load.body_force;
    let drag = load.top_drag;
    if !(drag >= 0.0) {
        return Err(Error::SingularSystem("top drag must be non-negative".into()));
    }
    let elastic: Vec<f64> = f_e.iter().map(|f| g * shear_part(f)).collect();

    // Unknowns v1 at faces 1..=n, v1 at face 0 is zero.
    let s = dx / mu;
    let mut lower = vec![-1.0; n];
    let mut diag = vec![2.0; n];
    let mut upper = vec![-1.0; n];
    let tau1 = load.top_traction.x1;
    let rhs: Vec<f64> = (1..=n)
        .map(|j| {
            if j < n {
                s * (elastic[j] - elastic[j - 1]) + rho * b.x1 * dx * s
            } else {
                s * (tau1 - elastic[n - 1]) + 0.5 * rho * b.x1 * dx * s
            }
        })
        .collect();
    lower[0] = 0.0;
    upper[n - 1] = 0.0;
    diag[n - 1] = 1.0 + s * drag;
    let v1 = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;
    // v2 vanishes, so the drag only acts on the shear component.
    let tau = load.top_traction - Vec2::new(drag * v1[n - 1], 0.0);

    let v_faces: Vec<Vec2> = std::iter::once(Vec2::ZERO)
        .chain(v1.iter().map(|&v| Vec2::new(v, 0.0)))
        .collect();
    let height = grid.height();
    let pressure: Vec<f64> = f_e
        .iter()
        .enumerate()
        .map(|(i, f)| g * (f.t21() * f.t21() + f.t22() * f.t22()) - tau.x2 - rho * b.x2 * (height - grid.center(i)))
        .collect();

    let shear_stress: Vec<f64> = (0..n)
        .map(|i| elastic[i] + mu * (v_faces[i + 1].x1 - v_faces[i].x1) / dx)
        .collect();
    let interior = (1..n).fold(0.0_f64, |m, j| {
        m.max((shear_stress[j] - shear_stress[j - 1] + rho * b.x1 * dx).abs())
    });
    let top_shear = (tau.x1 - shear_stress[n - 1] + 0.5 * rho * b.x1 * dx).abs();
    let f_top = &f_e[n - 1];
    let normal_top = -pressure[n - 1] + g * (f_top.t21() * f_top.t21() + f_top.t22() * f_top.t22());
    let top_normal = (normal_top - tau.x2 - rho * b.x2 * 0.5 * dx).abs();
    let shear_rate = (0..n)
        .map(|i| (tau.x1 + rho * b.x1 * (height - grid.center(i)) - elastic[i]) / mu)
        .collect();
    let solution = MomentumSolution {
        v_faces,
        shear_rate,
        pressure,
        residual: interior.max(top_shear),
        top_residual: top_shear.max(top_normal),
    };
    Ok(solution)
}

/// Instantaneous equilibration of a layer whose elastic state cannot carry
/// the applied shear traction.
///
/// Each cell receives the simple shear `I + δ e1⊗e2` on top of its elastic
/// deformation, with `δ` chosen so that the elastic shear stress equals the
/// top shear traction. Returns the new `Fe` and the amount of shear added.
pub fn equilibrate(f_e: &[Tensor2], params: &MaterialParams, top_shear: f64) -> Result<(Vec<Tensor2>, Vec<f64>)> {
    let g = params.shear_modulus;
    let mut out = Vec::with_capacity(f_e.len());
    let mut shears = Vec::with_capacity(f_e.len());
    for f in f_e {
        let stiffness = f.t21() * f.t21() + f.t22() * f.t22();
        if !(stiffness > 0.0) {
            return Err(Error::SingularTensor { det: f.det() });
        }
        let delta = (top_shear / g - shear_part(f)) / stiffness;
        out.push(Tensor2::new(
            f.t11() + delta * f.t21(),
            f.t12() + delta * f.t22(),
            f.t21(),
            f.t22(),
        ));
        shears.push(delta);
    }
    Ok((out, shears))
}
