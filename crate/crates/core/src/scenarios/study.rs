//! Refinement and parameter studies built on [`run`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::grid::{interpolate_cells, velocity_gradients};
use crate::kinematics::{advance_deformation, advance_inverse_motion, Grid1D, InverseMotion, PathlineRecord};
use crate::tensor::{Tensor2, Vec2};

use super::config::ScenarioConfig;
use super::driver::{run, OracleErrors, RunOptions, RunResult};

/// Errors below this are treated as round-off; no order is reported for them.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Observed order between two refinement levels, if both errors are above
/// round-off.
pub fn observed_order(coarse: f64, fine: f64, ratio: f64) -> Option<f64> {
    (coarse > NOISE_FLOOR && fine > NOISE_FLOOR).then(|| (coarse / fine).ln() / ratio.ln())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub steps: usize,
    pub seconds: f64,
    /// Errors at the final time.
    pub final_errors: OracleErrors,
    /// Worst errors over every step.
    pub worst_errors: OracleErrors,
    /// Order of the final `F_e12` error against the previous row.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub scenario: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn min_order(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.order).reduce(f64::min)
    }

    /// Errors strictly decrease row to row, or stay at round-off level.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let (coarse, fine) = (w[0].final_errors.f_e12.linf, w[1].final_errors.f_e12.linf);
            fine < coarse || fine.max(coarse) <= NOISE_FLOOR
        })
    }
}

/// Run an oracle scenario at each resolution; a fixed step is scaled with
/// the cell size.
pub fn convergence_study(config: &ScenarioConfig, resolutions: &[usize]) -> Result<ConvergenceTable> {
    if !config.kind.has_oracle() {
        return Err(Error::NoOracle(config.kind.name().into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let mut c = config.with_cells(n);
        c.dt = config.dt.map(|dt| dt * config.n_cells as f64 / n as f64);
        let r = run(&c, RunOptions::default())?;
        let final_errors = r.final_errors().ok_or_else(|| Error::NoOracle(c.kind.name().into()))?;
        let worst_errors = r.worst_errors().unwrap_or(final_errors);
        let order = rows.last().and_then(|prev| {
            observed_order(
                prev.final_errors.f_e12.linf,
                final_errors.f_e12.linf,
                n as f64 / prev.n_cells as f64,
            )
        });
        rows.push(ConvergenceRow {
            n_cells: n,
            steps: r.steps,
            seconds: r.elapsed.as_secs_f64(),
            final_errors,
            worst_errors,
            order,
        });
    }
    Ok(ConvergenceTable {
        scenario: config.kind.name().into(),
        rows,
    })
}

/// `n0, 2 n0, …` for `levels` levels.
pub fn doubling(n0: usize, levels: usize) -> Vec<usize> {
    (0..levels).map(|k| n0 << k).collect()
}

/// `F_e12` at height `x2` at the end of a run, for each viscosity of the
/// configured sweep.
pub fn viscosity_sweep(config: &ScenarioConfig, x2: f64) -> Result<Vec<(f64, f64)>> {
    config
        .mu_sweep
        .iter()
        .map(|&mu| {
            let r = run(&config.with_viscosity(mu), RunOptions::default())?;
            let s = &r.final_state;
            Ok((mu, interpolate_cells(&s.grid, &s.f_e, x2).t12()))
        })
        .collect()
}

/// Grid-transported against characteristic-integrated `F_e` on the same
/// velocity history.
#[derive(Debug, Clone)]
pub struct PathlineComparison {
    pub n_cells: usize,
    /// Largest component difference at the final time over all pathlines.
    pub discrepancy: f64,
    /// Largest `|det F_e − det F_e(attach)|` along every pathline.
    pub det_drift: f64,
    pub pathlines: Vec<PathlineRecord>,
}

pub fn compare_pathlines(config: &ScenarioConfig, count: usize) -> Result<PathlineComparison> {
    let r = run(
        config,
        RunOptions {
            record_history: false,
            pathlines: count,
        },
    )?;
    pathline_comparison(&r)
}

pub fn pathline_comparison(result: &RunResult) -> Result<PathlineComparison> {
    let s = &result.final_state;
    let det0 = result.config.attach_f_e()?.det();
    let mut discrepancy = 0.0_f64;
    let mut det_drift = 0.0_f64;
    for p in &result.pathlines {
        for sample in &p.samples {
            det_drift = det_drift.max((sample.f_e.det() - det0).abs());
        }
        let last = p.last();
        if p.ablated || last.t < s.t {
            continue;
        }
        let grid_value = interpolate_cells(&s.grid, &s.f_e, last.x.x2);
        discrepancy = discrepancy.max((grid_value - last.f_e).max_abs());
    }
    Ok(PathlineComparison {
        n_cells: s.grid.n_cells(),
        discrepancy,
        det_drift,
        pathlines: result.pathlines.clone(),
    })
}

/// Smooth shear flow without growth on `[0, 1]`:
/// `v = (sin πx2, ε sin πx2)`.
fn smooth_shear(x2: f64) -> Vec2 {
    let s = (PI * x2).sin();
    Vec2::new(s, 0.2 * s)
}

/// Largest difference between `F` transported on the grid and `F` obtained
/// from the transported inverse motion, for the smooth shear flow at `t_end`.
pub fn inverse_motion_discrepancy(n_cells: usize, t_end: f64) -> Result<f64> {
    let grid = Grid1D::new(n_cells, 1.0)?;
    let v: Vec<Vec2> = (0..=n_cells).map(|j| smooth_shear(grid.face(j))).collect();
    let grad_v = velocity_gradients(&grid, &v);
    let steps = (t_end / (0.5 * grid.dx())).ceil() as usize;
    let dt = t_end / steps as f64;
    let mut f = vec![Tensor2::IDENTITY; n_cells];
    let mut motion = InverseMotion::identity(grid);
    for _ in 0..steps {
        f = advance_deformation(&grid, &f, &v, &grad_v, dt, 1.0)?.1;
        motion = advance_inverse_motion(&motion, &v, dt, 0.0)?;
    }
    let from_chi = motion.deformation_gradients()?;
    Ok(f.iter()
        .zip(&from_chi)
        .map(|(a, b)| (*a - *b).max_abs())
        .fold(0.0, f64::max))
}
