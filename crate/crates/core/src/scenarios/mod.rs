//! End-to-end scenario drivers, closed-form oracles and studies.

mod config;
mod driver;
mod oracle;
mod study;
mod verify;

pub use config::{ScenarioConfig, ScenarioKind, ShearFeed, DEFAULT_CELLS, DEFAULT_CFL, DEFAULT_MU_SWEEP, MIN_CELLS};
pub use driver::{
    run, run_fdm_shear, run_non_normal, run_thermal, trace_grown_region, Norms, OracleErrors, RunOptions, RunResult,
    StepMetrics, ANSATZ_TOL, RELAX_FRACTION, SEED_FRACTION,
};
pub use oracle::{analytic_non_normal, exact_point, oracle_applies, ExactPoint};
pub use study::{
    compare_pathlines, convergence_study, doubling, inverse_motion_discrepancy, observed_order, pathline_comparison,
    viscosity_sweep, ConvergenceRow, ConvergenceTable, PathlineComparison, NOISE_FLOOR,
};
pub use verify::{verify, Bound, Check, VerifyReport, PATHLINES};
