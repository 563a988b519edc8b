use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Vec2};

/// Uniform cell-centred grid over the through-thickness coordinate `x2 ∈ [0, H]`.
///
/// Cell `i` spans `[i Δx, (i + 1) Δx]`; face `j` sits at `j Δx` for `j = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    n_cells: usize,
    height: f64,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 4;

    pub fn new(n_cells: usize, height: f64) -> Result<Self> {
        if n_cells < Self::MIN_CELLS {
            return Err(Error::validation(
                "n_cells",
                format!("need at least {} cells, got {n_cells}", Self::MIN_CELLS),
            ));
        }
        if !(height > 0.0) || !height.is_finite() {
            return Err(Error::NegativeHeight { height });
        }
        Ok(Self { n_cells, height })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn dx(&self) -> f64 {
        self.height / self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn face(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(|i| self.center(i))
    }

    pub fn with_height(&self, height: f64) -> Result<Self> {
        Self::new(self.n_cells, height)
    }
}

/// Linear blending used by every resampling step.
///
/// Implementations compute `a + s (b − a)` so that equal endpoints are
/// reproduced bitwise.
pub trait Lerp: Copy {
    fn lerp(a: Self, b: Self, s: f64) -> Self;
}

impl Lerp for f64 {
    fn lerp(a: f64, b: f64, s: f64) -> f64 {
        a + s * (b - a)
    }
}

impl Lerp for Vec2 {
    fn lerp(a: Vec2, b: Vec2, s: f64) -> Vec2 {
        Vec2::new(f64::lerp(a.x1, b.x1, s), f64::lerp(a.x2, b.x2, s))
    }
}

impl Lerp for Tensor2 {
    fn lerp(a: Tensor2, b: Tensor2, s: f64) -> Tensor2 {
        let mut out = a.0;
        for (k, o) in out.iter_mut().enumerate() {
            *o = f64::lerp(a.0[k], b.0[k], s);
        }
        Tensor2(out)
    }
}

/// Piecewise-linear interpolation of cell-centred data at `x2`.
///
/// Constant extrapolation below the first and above the last centre.
pub fn interpolate_cells<T: Lerp>(grid: &Grid1D, values: &[T], x2: f64) -> T {
    let n = grid.n_cells();
    debug_assert_eq!(values.len(), n);
    let xi = x2 / grid.dx() - 0.5;
    if xi <= 0.0 {
        return values[0];
    }
    if xi >= (n - 1) as f64 {
        return values[n - 1];
    }
    let i = xi.floor() as usize;
    T::lerp(values[i], values[i + 1], xi - i as f64)
}

/// Resample cell-centred `values` from `old` onto `new`.
///
/// When `top_value` is given, it is pinned at the new top face `new.height()`
/// and new centres above the last old centre interpolate towards it; this is
/// how freshly accreted material receives its attachment value. Without it
/// (static or receding boundary) values are extrapolated as constants.
pub fn regrid_cells<T: Lerp>(old: &Grid1D, values: &[T], new: &Grid1D, top_value: Option<T>) -> Vec<T> {
    let n_old = old.n_cells();
    let last_center = old.center(n_old - 1);
    let last = values[n_old - 1];
    new.centers()
        .map(|x| match top_value {
            Some(top) if x > last_center => {
                let span = new.height() - last_center;
                let s = ((x - last_center) / span).clamp(0.0, 1.0);
                T::lerp(last, top, s)
            }
            _ => interpolate_cells(old, values, x),
        })
        .collect()
}

/// Resample face-centred values (`n + 1` entries) from `old` onto `new`.
pub fn regrid_faces<T: Lerp>(old: &Grid1D, values: &[T], new: &Grid1D) -> Vec<T> {
    let n = old.n_cells();
    debug_assert_eq!(values.len(), n + 1);
    (0..=new.n_cells())
        .map(|j| {
            let xi = new.face(j) / old.dx();
            if xi >= n as f64 {
                values[n]
            } else {
                let i = xi.floor() as usize;
                T::lerp(values[i], values[i + 1], xi - i as f64)
            }
        })
        .collect()
}

/// Discretized fields at one instant.
///
/// Velocities live on the `n + 1` faces (staggered with respect to the
/// cell-centred deformation, pressure and density); use
/// [`FieldState::cell_velocity`] for the cell-averaged value.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub grid: Grid1D,
    pub v_faces: Vec<Vec2>,
    pub f_e: Vec<Tensor2>,
    pub pressure: Vec<f64>,
    pub density: Vec<f64>,
}

impl FieldState {
    /// Uniform state at rest.
    pub fn uniform(t: f64, grid: Grid1D, f_e: Tensor2, pressure: f64, density: f64) -> Self {
        let n = grid.n_cells();
        Self {
            t,
            grid,
            v_faces: vec![Vec2::ZERO; n + 1],
            f_e: vec![f_e; n],
            pressure: vec![pressure; n],
            density: vec![density; n],
        }
    }

    pub fn cell_velocity(&self, i: usize) -> Vec2 {
        (self.v_faces[i] + self.v_faces[i + 1]) * 0.5
    }

    /// Velocity gradients per cell, see [`velocity_gradients`].
    pub fn velocity_gradients(&self) -> Vec<Tensor2> {
        velocity_gradients(&self.grid, &self.v_faces)
    }

    pub fn is_finite(&self) -> bool {
        self.v_faces.iter().all(|v| v.is_finite())
            && self.f_e.iter().all(|f| f.is_finite())
            && self.pressure.iter().all(|p| p.is_finite())
            && self.density.iter().all(|r| r.is_finite())
    }
}

/// `∇v` per cell for a field that depends on `x2` only: the second column is
/// the face difference, the first column vanishes.
pub fn velocity_gradients(grid: &Grid1D, v_faces: &[Vec2]) -> Vec<Tensor2> {
    let dx = grid.dx();
    v_faces
        .windows(2)
        .map(|w| {
            let d = (w[1] - w[0]) * (1.0 / dx);
            Tensor2::new(0.0, d.x1, 0.0, d.x2)
        })
        .collect()
}
