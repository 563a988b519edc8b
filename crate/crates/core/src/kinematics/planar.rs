//! Doubly periodic planar grid, used to check that grid-transported
//! deformation gradients stay compatible (gradients of a motion).
//!
//! A field `F(x)` is a deformation gradient only if `F⁻¹` is the gradient of
//! the inverse motion, i.e. each row of `F⁻¹` is curl-free:
//! `∂(F⁻¹)_{N2}/∂x1 − ∂(F⁻¹)_{N1}/∂x2 = 0`.

use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Vec2};

use super::characteristics::Kinematics;
use super::transport::CFL_LIMIT;

/// `n × n` square cells on the periodic square `[0, L)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid2D {
    n: usize,
    length: f64,
}

impl PeriodicGrid2D {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::validation("n_cells", "need at least 4 cells per side"));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::validation("length", "side length must be positive"));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        (j % self.n) * self.n + (i % self.n)
    }

    pub fn center(&self, i: usize, j: usize) -> Vec2 {
        let h = self.spacing();
        Vec2::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
    }

    fn prev(&self, k: usize) -> usize {
        (k + self.n - 1) % self.n
    }

    fn next(&self, k: usize) -> usize {
        (k + 1) % self.n
    }
}

/// One forward-Euler, first-order upwind step of `∂F/∂t + (v·∇)F = (∇v)F`.
pub fn advance_periodic(
    grid: &PeriodicGrid2D,
    f: &[Tensor2],
    velocity: impl Fn(Vec2) -> Kinematics,
    dt: f64,
) -> Result<Vec<Tensor2>> {
    assert_eq!(f.len(), grid.len(), "field length must match the grid");
    let n = grid.n();
    let h = grid.spacing();
    let kin: Vec<Kinematics> = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| velocity(grid.center(i, j)))
        .collect();
    let courant = kin.iter().fold(0.0_f64, |m, k| m.max(k.v.x1.abs() + k.v.x2.abs())) * dt / h;
    if courant > CFL_LIMIT {
        return Err(Error::CflViolation {
            courant,
            limit: CFL_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(f.len());
    for j in 0..n {
        for i in 0..n {
            let k = grid.index(i, j);
            let Kinematics { v, grad_v } = kin[k];
            let here = f[k];
            let d1 = if v.x1 > 0.0 {
                here - f[grid.index(grid.prev(i), j)]
            } else {
                f[grid.index(grid.next(i), j)] - here
            };
            let d2 = if v.x2 > 0.0 {
                here - f[grid.index(i, grid.prev(j))]
            } else {
                f[grid.index(i, grid.next(j))] - here
            };
            let advection = (d1 * v.x1 + d2 * v.x2) * (1.0 / h);
            out.push(here + (grad_v * here - advection) * dt);
        }
    }
    Ok(out)
}

/// Largest compatibility defect of a field: the maximum over cells and rows
/// of the centred-difference curl of `F⁻¹`.
pub fn compatibility_defect(grid: &PeriodicGrid2D, f: &[Tensor2]) -> Result<f64> {
    assert_eq!(f.len(), grid.len(), "field length must match the grid");
    let inv: Vec<Tensor2> = f.iter().map(Tensor2::inverse).collect::<Result<_>>()?;
    let n = grid.n();
    let scale = 0.5 / grid.spacing();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let east = inv[grid.index(grid.next(i), j)];
            let west = inv[grid.index(grid.prev(i), j)];
            let north = inv[grid.index(i, grid.next(j))];
            let south = inv[grid.index(i, grid.prev(j))];
            let row1 = (east.t12() - west.t12()) * scale - (north.t11() - south.t11()) * scale;
            let row2 = (east.t22() - west.t22()) * scale - (north.t21() - south.t21()) * scale;
            worst = worst.max(row1.abs()).max(row2.abs());
        }
    }
    Ok(worst)
}
