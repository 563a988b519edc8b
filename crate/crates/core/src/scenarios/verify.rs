//! Built-in verification checks, one set per scenario.

use serde::Serialize;

use crate::error::Result;
use crate::kinematics::reconstruct_reference;
use crate::tensor::Tensor2;

use super::config::{ScenarioConfig, ScenarioKind};
use super::driver::{run, RunOptions, RunResult};
use super::study::pathline_comparison;

/// Pathlines traced by the verification runs.
pub const PATHLINES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub limit: f64,
}

impl Check {
    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: Bound::AtMost,
            limit,
        }
    }

    fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound: Bound::AtLeast,
            limit,
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.limit,
            Bound::AtLeast => self.value >= self.limit,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub scenario: ScenarioKind,
    pub checks: Vec<Check>,
    pub result: RunResult,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Run the preset of `kind` and check it against its tolerances.
pub fn verify(kind: ScenarioKind) -> Result<VerifyReport> {
    let config = ScenarioConfig::preset(kind);
    let options = RunOptions {
        record_history: kind == ScenarioKind::Thermal,
        pathlines: PATHLINES,
    };
    let result = run(&config, options)?;
    let mut checks = vec![
        Check::at_most("momentum residual", result.max_metric(|m| m.momentum_residual), 1e-10),
        Check::at_most("top traction residual", result.max_metric(|m| m.top_residual), 1e-8),
        Check::at_most("base velocity", result.max_metric(|m| m.base_velocity), 0.0),
        Check::at_most("mass jump residual", result.max_metric(|m| m.mass_jump), 1e-8),
        Check::at_most("momentum jump residual", result.max_metric(|m| m.momentum_jump), 1e-8),
    ];
    match kind {
        ScenarioKind::NonNormal => {
            let e = result.final_errors().expect("oracle scenario");
            checks.push(Check::at_most("F_e12 error (final, max)", e.f_e12.linf, 1e-2));
            checks.push(Check::at_most(
                "|p - G| (all steps)",
                result.max_metric(|m| m.pressure_deviation),
                1e-8,
            ));
            checks.push(Check::at_most(
                "unit-shear deviation",
                result.max_metric(|m| m.reduced_deviation),
                1e-12,
            ));
            let pathlines = pathline_comparison(&result)?;
            checks.push(Check::at_most("pathline |det F_e - 1|", pathlines.det_drift, 1e-6));
        }
        ScenarioKind::FdmShear => {
            let e = result.worst_errors().expect("oracle scenario");
            checks.push(Check::at_most("F_e12 error", e.f_e12.linf, 1e-10));
            checks.push(Check::at_most("v1 error", e.v1.linf, 1e-10));
            checks.push(Check::at_most("pressure error", e.pressure.linf, 1e-10));
            checks.push(Check::at_most("stress error", e.stress.linf, 1e-10));
            let feed = &config.feed;
            let expected = config.initial_height + feed.thickness * feed.speed / feed.length * config.t_end;
            let h = result.final_state.grid.height();
            checks.push(Check::at_most(
                "height error",
                (h - expected).abs(),
                4.0 * f64::EPSILON * expected,
            ));
        }
        ScenarioKind::Thermal => {
            let history = result.history.as_deref().unwrap_or_default();
            let samples = reconstruct_reference(history, None)?;
            let (det_f, relax) = thermal_reconstruction(&config, &samples);
            checks.push(Check::at_most("|det F - 1| (reconstructed)", det_f, 1e-12));
            checks.push(Check::at_least("|F_relax - I| in grown region", relax, 1e-3));
            let mut relaxed = config.clone();
            relaxed.alpha = 1.0;
            let trivial = run(&relaxed, RunOptions::default())?;
            let s = &trivial.final_state;
            let deviation = s
                .f_e
                .iter()
                .map(|f| (*f - Tensor2::IDENTITY).max_abs())
                .chain(s.v_faces.iter().map(|v| v.max_abs()))
                .fold(0.0, f64::max);
            checks.push(Check::at_most("alpha = 1 deviation from rest", deviation, 1e-12));
        }
    }
    Ok(VerifyReport {
        scenario: kind,
        checks,
        result,
    })
}

/// Largest `|det F − 1|` over all samples, and largest `|F_relax − I|` at the
/// final time above the initial height.
fn thermal_reconstruction(config: &ScenarioConfig, samples: &[crate::kinematics::ReferenceSample]) -> (f64, f64) {
    let det = samples
        .iter()
        .flat_map(|s| s.f.iter())
        .map(|f| (f.det() - 1.0).abs())
        .fold(0.0, f64::max);
    let relax = samples
        .last()
        .map(|s| {
            s.f_relax
                .iter()
                .enumerate()
                .filter(|(i, _)| s.grid.center(*i) > config.initial_height)
                .map(|(_, r)| (*r - Tensor2::IDENTITY).max_abs())
                .fold(0.0, f64::max)
        })
        .unwrap_or(0.0);
    (det, relax)
}
