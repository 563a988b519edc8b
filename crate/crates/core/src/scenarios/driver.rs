//! Time marching shared by every scenario.
//!
//! Each step transports `F_e` with the current velocity (accreted material
//! enters with its attachment value), moves the top boundary, updates the
//! density and re-solves the quasistatic momentum balance on the new grid.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::balance::{
    boundary_normal_velocity, density_update, equilibrate, growth_traction, jump_residuals,
    quasistatic_momentum_solve_1d, Ansatz, MomentumLoad, SideState,
};
use crate::constitutive::total_stress;
use crate::error::{Error, Result};
use crate::kinematics::grid::regrid_cells;
use crate::kinematics::{
    advance_elastic, integrate_characteristics, FieldState, Grid1D, PathlineRecord, TopMotion, VelocityFrame,
    VelocityHistory,
};
use crate::tensor::{Tensor2, Vec2};

use super::config::{ScenarioConfig, ScenarioKind};
use super::oracle::{exact_point, oracle_applies};

/// Start time, as a fraction of `t_end`, of a body grown from nothing.
pub const SEED_FRACTION: f64 = 1e-6;
/// Explicit relaxation steps are kept below this fraction of `μ/G`.
pub const RELAX_FRACTION: f64 = 0.5;
/// Residual above which the through-thickness reduction is reported as
/// inconsistent.
pub const ANSATZ_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Keep every solved state, not only the snapshots.
    pub record_history: bool,
    /// Number of characteristics integrated through the grown region.
    pub pathlines: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub linf: f64,
    /// Root mean square over cells.
    pub rms: f64,
}

impl Norms {
    fn of(errors: impl Iterator<Item = f64>) -> Self {
        let (mut linf, mut sum, mut count) = (0.0_f64, 0.0, 0usize);
        for e in errors {
            linf = linf.max(e.abs());
            sum += e * e;
            count += 1;
        }
        let rms = if count == 0 { 0.0 } else { (sum / count as f64).sqrt() };
        Self { linf, rms }
    }

    fn max(self, other: Self) -> Self {
        Self {
            linf: self.linf.max(other.linf),
            rms: self.rms.max(other.rms),
        }
    }
}

/// Differences from the closed-form solution at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleErrors {
    pub f_e12: Norms,
    pub v1: Norms,
    pub pressure: Norms,
    /// Largest component of the stress error.
    pub stress: Norms,
}

impl OracleErrors {
    fn max(self, other: Self) -> Self {
        Self {
            f_e12: self.f_e12.max(other.f_e12),
            v1: self.v1.max(other.v1),
            pressure: self.pressure.max(other.pressure),
            stress: self.stress.max(other.stress),
        }
    }
}

/// Diagnostics of one solved state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepMetrics {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub height: f64,
    /// Discrete momentum residual of the solve.
    pub momentum_residual: f64,
    /// `|σn − t|` at the top face.
    pub top_residual: f64,
    pub mass_jump: f64,
    pub momentum_jump: f64,
    /// Largest `|v|` on the base face.
    pub base_velocity: f64,
    /// Largest departure of `F_e` from the unit-shear form.
    pub reduced_deviation: f64,
    /// Largest `|p − G|`.
    pub pressure_deviation: f64,
    pub oracle: Option<OracleErrors>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub config: ScenarioConfig,
    pub snapshots: Vec<FieldState>,
    /// Every solved state, when requested.
    pub history: Option<Vec<FieldState>>,
    pub metrics: Vec<StepMetrics>,
    pub pathlines: Vec<PathlineRecord>,
    pub final_state: FieldState,
    pub steps: usize,
    pub elapsed: Duration,
}

impl RunResult {
    /// Oracle errors at the final time.
    pub fn final_errors(&self) -> Option<OracleErrors> {
        self.metrics.last().and_then(|m| m.oracle)
    }

    /// Worst oracle errors over all steps.
    pub fn worst_errors(&self) -> Option<OracleErrors> {
        self.metrics.iter().filter_map(|m| m.oracle).reduce(OracleErrors::max)
    }

    pub fn max_metric(&self, f: impl Fn(&StepMetrics) -> f64) -> f64 {
        self.metrics.iter().map(f).fold(0.0, f64::max)
    }

    pub fn velocity_history(&self) -> Option<VelocityHistory> {
        self.history.as_deref().map(VelocityHistory::from_states)
    }
}

struct Marcher<'a> {
    config: &'a ScenarioConfig,
    ansatz: Ansatz,
    attach: Tensor2,
    rate: f64,
    mass_rate: f64,
    oracle: bool,
}

impl Marcher<'_> {
    fn height_at(&self, t: f64) -> Result<f64> {
        let h = self.config.initial_height + self.rate * t;
        if h > 0.0 && h.is_finite() {
            Ok(h)
        } else {
            Err(Error::NegativeHeight { height: h })
        }
    }

    fn attach_velocity(&self, surface_velocity: Vec2) -> Vec2 {
        self.config.attach_velocity().unwrap_or(surface_velocity)
    }

    fn top_traction(&self, surface_velocity: Vec2) -> Vec2 {
        growth_traction(
            self.mass_rate,
            self.attach_velocity(surface_velocity),
            surface_velocity,
            self.config.traction,
        )
    }

    /// Solve for velocity and pressure given `F_e`. A prescribed attachment
    /// velocity makes the growth traction depend on the unknown surface
    /// velocity; it is solved implicitly since a lagged traction is unstable
    /// once `M H / μ > 1`. Comoving attachment leaves only `t_b`.
    fn solve(&self, state: &mut FieldState) -> Result<((f64, f64), Vec<Tensor2>)> {
        let load = match self.config.attach_velocity() {
            Some(va) => MomentumLoad::growth(self.mass_rate, va, self.config.traction),
            None => MomentumLoad::traction(self.config.traction),
        };
        let sol = quasistatic_momentum_solve_1d(&state.grid, &state.f_e, &self.config.material, load, self.ansatz)?;
        if self.ansatz == Ansatz::General && sol.residual.max(sol.top_residual) > ANSATZ_TOL {
            return Err(Error::IncompatibleAnsatz(format!(
                "momentum residual {:e} after the reduced solve",
                sol.residual.max(sol.top_residual)
            )));
        }
        let grads = sol.velocity_gradients();
        state.v_faces = sol.v_faces;
        state.pressure = sol.pressure;
        Ok(((sol.residual, sol.top_residual), grads))
    }

    fn choose_dt(&self, state: &FieldState) -> f64 {
        if let Some(dt) = self.config.dt {
            return dt;
        }
        let speed = state.v_faces.iter().fold(self.rate.abs(), |m, v| m.max(v.x2.abs()));
        let mut dt = f64::INFINITY;
        if speed > 0.0 {
            dt = self.config.cfl * state.grid.dx() / speed;
        }
        let m = &self.config.material;
        dt = dt.min(RELAX_FRACTION * m.viscosity / m.shear_modulus);
        dt.min(self.config.t_end)
    }

    fn oracle_errors(&self, state: &FieldState) -> Result<OracleErrors> {
        let grid = &state.grid;
        let n = grid.n_cells();
        let h = grid.height();
        let grads = state.velocity_gradients();
        let mut f12 = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(n);
        let mut stress = Vec::with_capacity(n);
        for (i, grad) in grads.iter().enumerate() {
            let e = exact_point(self.config, grid.center(i), state.t)?;
            f12.push(state.f_e[i].t12() - e.f_e12);
            p.push(state.pressure[i] - e.pressure);
            let s = total_stress(&state.f_e[i], grad, state.pressure[i], &self.config.material);
            stress.push((s - e.stress).max_abs());
        }
        let v1 = (0..=n)
            .map(|j| {
                let x = grid.face(j).min(h);
                Ok(state.v_faces[j].x1 - exact_point(self.config, x, state.t)?.v1)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(OracleErrors {
            f_e12: Norms::of(f12.into_iter()),
            v1: Norms::of(v1.into_iter()),
            pressure: Norms::of(p.into_iter()),
            stress: Norms::of(stress.into_iter()),
        })
    }

    fn metrics(&self, step: usize, dt: f64, state: &FieldState, residuals: (f64, f64)) -> Result<StepMetrics> {
        let n = state.grid.n_cells();
        let g = self.config.material.shear_modulus;
        let top_v = state.v_faces[n];
        let grads = state.velocity_gradients();
        let inside = SideState {
            density: state.density[n - 1],
            velocity: top_v,
            stress: total_stress(
                &state.f_e[n - 1],
                &grads[n - 1],
                state.pressure[n - 1],
                &self.config.material,
            ),
        };
        let outside = SideState::exterior(self.config.traction, Vec2::E2);
        let speed = boundary_normal_velocity(self.mass_rate, inside.density, top_v, Vec2::E2);
        // The growth traction used the surface velocity of the previous
        // solve, so a prescribed attachment velocity leaves M (v − v_prev).
        let va = self.attach_velocity(top_v);
        let (mass_jump, momentum_jump) =
            jump_residuals(&inside, &outside, Vec2::new(0.0, speed), Vec2::E2, self.mass_rate, va);
        let reduced_deviation = state
            .f_e
            .iter()
            .map(|f| f.t21().abs().max((f.t11() - 1.0).abs()).max((f.t22() - 1.0).abs()))
            .fold(0.0, f64::max);
        let oracle = if self.oracle {
            Some(self.oracle_errors(state)?)
        } else {
            None
        };
        Ok(StepMetrics {
            step,
            t: state.t,
            dt,
            height: state.grid.height(),
            momentum_residual: residuals.0,
            top_residual: residuals.1,
            mass_jump: mass_jump.abs(),
            momentum_jump: momentum_jump.max_abs(),
            base_velocity: state.v_faces[0].max_abs(),
            reduced_deviation,
            pressure_deviation: state.pressure.iter().map(|p| (p - g).abs()).fold(0.0, f64::max),
            oracle,
        })
    }
}

/// Run any scenario.
pub fn run(config: &ScenarioConfig, options: RunOptions) -> Result<RunResult> {
    config.validate()?;
    let started = Instant::now();
    let ansatz = match config.kind {
        ScenarioKind::Thermal => Ansatz::General,
        _ => Ansatz::UnitShear,
    };
    let marcher = Marcher {
        config,
        ansatz,
        attach: config.attach_f_e()?,
        rate: config.growth_rate(),
        mass_rate: config.mass_rate(),
        oracle: oracle_applies(config),
    };
    let rho = config.material.density;
    let n = config.n_cells;

    // Initial body: a thin seed of freshly attached material, or a relaxed
    // substrate brought into equilibrium with the surface traction.
    let (t0, f_e0) = if config.initial_height == 0.0 {
        (SEED_FRACTION * config.t_end, vec![marcher.attach; n])
    } else {
        let (f, _) = equilibrate(
            &vec![Tensor2::IDENTITY; n],
            &config.material,
            marcher.top_traction(Vec2::ZERO).x1,
        )?;
        (0.0, f)
    };
    let grid = Grid1D::new(n, marcher.height_at(t0)?)?;
    let mut state = FieldState::uniform(t0, grid, Tensor2::IDENTITY, 0.0, rho);
    state.f_e = f_e0;
    let (residuals, mut grads) = marcher.solve(&mut state)?;

    let mut metrics = vec![marcher.metrics(0, 0.0, &state, residuals)?];
    let mut history = options.record_history.then(|| vec![state.clone()]);
    let mut frames: Vec<VelocityFrame> = Vec::new();
    let mut snapshots = vec![state.clone()];
    let snapshot_every = (config.t_end - t0) / config.snapshots.max(1) as f64;
    let mut next_snapshot = 1usize;
    let mut step = 0usize;

    while state.t < config.t_end {
        let mut dt = marcher.choose_dt(&state);
        let remaining = config.t_end - state.t;
        let t_new = if dt >= remaining * (1.0 - 1e-9) {
            dt = remaining;
            config.t_end
        } else {
            state.t + dt
        };
        let h_new = marcher.height_at(t_new)?;
        if options.pathlines > 0 {
            frames.push(VelocityFrame {
                t: state.t,
                grid: state.grid,
                v_faces: state.v_faces.clone(),
            });
        }
        let growing = h_new > state.grid.height();
        let top = TopMotion {
            new_height: h_new,
            inflow: growing.then_some(marcher.attach),
        };
        let (new_grid, f_e) = advance_elastic(&state.grid, &state.f_e, &state.v_faces, &grads, dt, top)?;
        let density = density_update(&state.grid, &state.density, &state.v_faces, dt)?;
        let density = regrid_cells(&state.grid, &density, &new_grid, growing.then_some(rho));
        state = FieldState {
            t: t_new,
            grid: new_grid,
            v_faces: vec![Vec2::ZERO; n + 1],
            f_e,
            pressure: vec![0.0; n],
            density,
        };
        let (residuals, new_grads) = marcher.solve(&mut state)?;
        grads = new_grads;
        step += 1;
        metrics.push(marcher.metrics(step, dt, &state, residuals)?);
        if let Some(h) = history.as_mut() {
            h.push(state.clone());
        }
        if state.t >= t0 + next_snapshot as f64 * snapshot_every && state.t < config.t_end {
            snapshots.push(state.clone());
            while t0 + next_snapshot as f64 * snapshot_every <= state.t {
                next_snapshot += 1;
            }
        }
    }
    if snapshots.last().map(|s| s.t) != Some(state.t) {
        snapshots.push(state.clone());
    }

    let pathlines = if options.pathlines > 0 && marcher.rate > 0.0 && !frames.is_empty() {
        let velocity = VelocityHistory::new(frames, state.t, state.grid.height());
        trace_grown_region(config, &velocity, marcher.attach, options.pathlines, t0)?
    } else {
        Vec::new()
    };

    Ok(RunResult {
        config: config.clone(),
        snapshots,
        history,
        metrics,
        pathlines,
        final_state: state,
        steps: step,
        elapsed: started.elapsed(),
    })
}

/// Characteristics through `count` particles evenly spread over the region
/// grown during the run, each started at the top surface at its attachment
/// time with the attachment `F_e`.
pub fn trace_grown_region(
    config: &ScenarioConfig,
    velocity: &VelocityHistory,
    attach: Tensor2,
    count: usize,
    t_start: f64,
) -> Result<Vec<PathlineRecord>> {
    let rate = config.growth_rate();
    let h0 = config.initial_height;
    let t_end = velocity.t_end();
    let grown = rate * t_end;
    (0..count)
        .filter_map(|k| {
            let x2 = h0 + grown * (k as f64 + 0.5) / count as f64;
            let t_att = (x2 - h0) / rate;
            (t_att >= t_start).then_some((x2, t_att))
        })
        .map(|(x2, t_att)| {
            // One midpoint step per stored velocity frame.
            integrate_characteristics(velocity, Vec2::new(0.0, x2), t_att, t_end, t_end, attach)
        })
        .collect()
}

pub fn run_non_normal(config: &ScenarioConfig) -> Result<RunResult> {
    expect_kind(config, ScenarioKind::NonNormal)?;
    run(config, RunOptions::default())
}

pub fn run_fdm_shear(config: &ScenarioConfig) -> Result<RunResult> {
    expect_kind(config, ScenarioKind::FdmShear)?;
    run(config, RunOptions::default())
}

pub fn run_thermal(config: &ScenarioConfig) -> Result<RunResult> {
    expect_kind(config, ScenarioKind::Thermal)?;
    run(config, RunOptions::default())
}

fn expect_kind(config: &ScenarioConfig, kind: ScenarioKind) -> Result<()> {
    if config.kind == kind {
        Ok(())
    } else {
        Err(Error::validation(
            "kind",
            format!("expected {kind}, got {}", config.kind),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsheared_growth_stays_stress_free() {
        let mut c = ScenarioConfig::non_normal().with_cells(32);
        c.alpha = 0.0;
        let r = run_non_normal(&c).unwrap();
        let s = &r.final_state;
        assert!(s.f_e.iter().all(|f| *f == Tensor2::IDENTITY));
        assert!(s.v_faces.iter().all(|v| *v == Vec2::ZERO));
        assert_eq!(s.t, 1.0);
        assert_eq!(s.grid.height(), 1.0);
    }

    #[test]
    fn unfed_accretion_is_static() {
        let mut c = ScenarioConfig::fdm_shear().with_cells(16);
        c.feed.speed = 0.0;
        c.dt = Some(0.1);
        let r = run_fdm_shear(&c).unwrap();
        assert!(r.final_state.f_e.iter().all(|f| *f == Tensor2::IDENTITY));
        assert!(r.final_state.v_faces.iter().all(|v| *v == Vec2::ZERO));
        assert_eq!(r.final_state.grid.height(), 1.0);
        assert_eq!(r.steps, 10);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        assert!(run_thermal(&ScenarioConfig::non_normal()).is_err());
    }

    #[test]
    fn fixed_step_must_respect_cfl() {
        let mut c = ScenarioConfig::non_normal().with_cells(16);
        c.dt = Some(0.01);
        assert!(matches!(
            run(&c, RunOptions::default()),
            Err(Error::CflViolation { .. })
        ));
    }

    #[test]
    fn snapshots_bracket_the_run() {
        let c = ScenarioConfig::fdm_shear().with_cells(16);
        let r = run(&c, RunOptions::default()).unwrap();
        assert_eq!(r.snapshots.first().unwrap().t, 0.0);
        assert_eq!(r.snapshots.last().unwrap().t, 1.0);
        assert!(r.snapshots.windows(2).all(|w| w[0].t < w[1].t));
        assert!(r.snapshots.len() <= c.snapshots + 1);
    }
}
