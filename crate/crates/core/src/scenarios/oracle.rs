//! Closed-form solutions used as oracles.

use crate::error::{Error, Result};
use crate::tensor::Tensor2;

use super::config::{ScenarioConfig, ScenarioKind};

/// Exact fields at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPoint {
    pub v1: f64,
    pub f_e12: f64,
    pub pressure: f64,
    /// Total Cauchy stress.
    pub stress: Tensor2,
}

/// Sheared layer grown from nothing at speed `V_G` on a clamped base.
///
/// With `λ = G/μ` and attachment time `x2/V_G`, the layer relaxes as
/// `F_e12 = −α e^{−λ(t − x2/V_G)}`, `v1 = V_G α (e^{−λ(t − x2/V_G)} − e^{−λt})`
/// and `p = G`. Returns `(v1, F_e12, p)`.
pub fn analytic_non_normal(x2: f64, t: f64, alpha: f64, g: f64, mu: f64, v_g: f64) -> Result<(f64, f64, f64)> {
    if x2 > v_g * t || x2 < 0.0 {
        return Err(Error::OutOfBody { x2, height: v_g * t, t });
    }
    let lambda = g / mu;
    let since_attach = (-lambda * (t - x2 / v_g)).exp();
    let v1 = v_g * alpha * (since_attach - (-lambda * t).exp());
    Ok((v1, -alpha * since_attach, g))
}

/// Exact fields of an oracle scenario at `(x2, t)`.
pub fn exact_point(config: &ScenarioConfig, x2: f64, t: f64) -> Result<ExactPoint> {
    let g = config.material.shear_modulus;
    match config.kind {
        ScenarioKind::NonNormal => {
            let (v1, f12, p) =
                analytic_non_normal(x2, t, config.alpha, g, config.material.viscosity, config.growth_speed)?;
            // σ12 vanishes identically: elastic and viscous shear cancel.
            Ok(ExactPoint {
                v1,
                f_e12: f12,
                pressure: p,
                stress: Tensor2::new(g * f12 * f12, 0.0, 0.0, 0.0),
            })
        }
        ScenarioKind::FdmShear => {
            let height = config.initial_height + config.growth_rate() * t;
            if x2 < 0.0 || x2 > height {
                return Err(Error::OutOfBody { x2, height, t });
            }
            let shear = config.top_traction_at_rest();
            let f12 = shear.x1 / g;
            let pressure = g - shear.x2;
            Ok(ExactPoint {
                v1: 0.0,
                f_e12: f12,
                pressure,
                stress: Tensor2::new(g * f12 * f12 + g - pressure, g * f12, g * f12, g - pressure),
            })
        }
        ScenarioKind::Thermal => Err(Error::NoOracle(config.kind.name().into())),
    }
}

/// Whether `config` admits the closed-form comparison.
pub fn oracle_applies(config: &ScenarioConfig) -> bool {
    match config.kind {
        ScenarioKind::NonNormal => config.initial_height == 0.0 && config.traction.max_abs() == 0.0,
        ScenarioKind::FdmShear => true,
        ScenarioKind::Thermal => false,
    }
}
