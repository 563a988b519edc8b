use serde::{Deserialize, Serialize};

use crate::balance::growth_traction;
use crate::constitutive::{attach_elastic_deformation, AttachmentSpec, MaterialParams};
use crate::error::{Error, Result};
use crate::kinematics::CFL_LIMIT;
use crate::tensor::{Tensor2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Growth of a sheared layer on a clamped base.
    NonNormal,
    /// Accretion of material fed by a shear flow.
    FdmShear,
    /// Growth of thermally contracted material.
    Thermal,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::NonNormal, ScenarioKind::FdmShear, ScenarioKind::Thermal];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::NonNormal => "non_normal",
            ScenarioKind::FdmShear => "fdm_shear",
            ScenarioKind::Thermal => "thermal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn has_oracle(self) -> bool {
        self != ScenarioKind::Thermal
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Shear flow that feeds the accreting surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShearFeed {
    /// Thickness of the fed stream.
    pub thickness: f64,
    /// Speed of the stream along ê1.
    pub speed: f64,
    /// Length over which the stream is deposited.
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub material: MaterialParams,
    /// Shear of the attached layer (non-normal) or thermal contraction
    /// ratio (thermal).
    pub alpha: f64,
    /// Growth speed `V_G` for the non-normal and thermal scenarios.
    pub growth_speed: f64,
    pub feed: ShearFeed,
    /// External traction on the growing surface.
    pub traction: Vec2,
    pub initial_height: f64,
    pub n_cells: usize,
    /// Fixed step; `None` selects adaptive CFL-limited steps.
    pub dt: Option<f64>,
    pub cfl: f64,
    pub t_end: f64,
    pub mu_sweep: Vec<f64>,
    /// Number of equal intervals between stored snapshots.
    pub snapshots: usize,
}

pub const MIN_CELLS: usize = 16;
pub const DEFAULT_CELLS: usize = 200;
pub const DEFAULT_CFL: f64 = 0.4;
pub const DEFAULT_MU_SWEEP: [f64; 5] = [1.0, 0.3, 0.1, 0.03, 0.01];

impl ScenarioConfig {
    fn base(kind: ScenarioKind) -> Self {
        Self {
            kind,
            material: MaterialParams {
                shear_modulus: 1.0,
                viscosity: 0.1,
                density: 1.0,
            },
            alpha: 0.0,
            growth_speed: 1.0,
            feed: ShearFeed {
                thickness: 0.0,
                speed: 0.0,
                length: 1.0,
            },
            traction: Vec2::ZERO,
            initial_height: 0.0,
            n_cells: DEFAULT_CELLS,
            dt: None,
            cfl: DEFAULT_CFL,
            t_end: 1.0,
            mu_sweep: DEFAULT_MU_SWEEP.to_vec(),
            snapshots: 10,
        }
    }

    /// Sheared layer: α = 0.5, G = 1, μ = 0.1, V_G = 1, body built from nothing.
    pub fn non_normal() -> Self {
        Self {
            alpha: 0.5,
            ..Self::base(ScenarioKind::NonNormal)
        }
    }

    /// Shear-fed accretion: ρ = 1, h = 0.1, v0 = 1, L = 1, G = 1 on a unit substrate.
    pub fn fdm_shear() -> Self {
        Self {
            feed: ShearFeed {
                thickness: 0.1,
                speed: 1.0,
                length: 1.0,
            },
            initial_height: 1.0,
            ..Self::base(ScenarioKind::FdmShear)
        }
    }

    /// Thermally contracted layer (α = 0.8) grown on a relaxed substrate.
    pub fn thermal() -> Self {
        Self {
            alpha: 0.8,
            initial_height: 0.5,
            ..Self::base(ScenarioKind::Thermal)
        }
    }

    pub fn preset(kind: ScenarioKind) -> Self {
        match kind {
            ScenarioKind::NonNormal => Self::non_normal(),
            ScenarioKind::FdmShear => Self::fdm_shear(),
            ScenarioKind::Thermal => Self::thermal(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.material;
        MaterialParams::new(m.shear_modulus, m.viscosity, m.density)?;
        if !(m.viscosity > 0.0) {
            return Err(Error::validation(
                "mu",
                "the quasistatic solve needs a positive viscosity",
            ));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::validation("t_end", "must be positive and finite"));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::validation("dt", "must be positive and finite"));
            }
        }
        if !(self.cfl > 0.0 && self.cfl <= CFL_LIMIT) {
            return Err(Error::validation("cfl", format!("must lie in (0, {CFL_LIMIT}]")));
        }
        if self.n_cells < MIN_CELLS {
            return Err(Error::validation("n_cells", format!("must be at least {MIN_CELLS}")));
        }
        if !self.alpha.is_finite() {
            return Err(Error::validation("alpha", "must be finite"));
        }
        if !self.growth_speed.is_finite() {
            return Err(Error::validation("V_G", "must be finite"));
        }
        if !self.traction.is_finite() {
            return Err(Error::validation("traction", "must be finite"));
        }
        if !(self.initial_height >= 0.0) || !self.initial_height.is_finite() {
            return Err(Error::validation("H0", "must be non-negative and finite"));
        }
        if self.mu_sweep.iter().any(|mu| !(*mu > 0.0) || !mu.is_finite()) {
            return Err(Error::validation("mu_sweep", "every viscosity must be positive"));
        }
        match self.kind {
            ScenarioKind::FdmShear => {
                let f = &self.feed;
                if !(self.initial_height > 0.0) {
                    return Err(Error::validation("H0", "shear-fed accretion needs an initial body"));
                }
                if !(f.length > 0.0) || !f.length.is_finite() {
                    return Err(Error::validation("L", "must be positive and finite"));
                }
                if !(f.thickness >= 0.0) || !f.thickness.is_finite() {
                    return Err(Error::validation("h", "must be non-negative and finite"));
                }
                if !f.speed.is_finite() {
                    return Err(Error::validation("v0", "must be finite"));
                }
            }
            ScenarioKind::Thermal if !(self.alpha > 0.0) => {
                return Err(Error::validation("alpha", "thermal contraction ratio must be positive"));
            }
            _ => {}
        }
        if self.initial_height == 0.0 && !(self.growth_rate() > 0.0) {
            return Err(Error::validation("H0", "an empty body needs a positive growth rate"));
        }
        Ok(())
    }

    /// Normal speed of the top boundary.
    pub fn growth_rate(&self) -> f64 {
        match self.kind {
            ScenarioKind::FdmShear => {
                let f = &self.feed;
                f.thickness * f.speed.abs() / f.length
            }
            _ => self.growth_speed,
        }
    }

    /// Mass added per unit area and time, `ρ V`.
    pub fn mass_rate(&self) -> f64 {
        self.material.density * self.growth_rate()
    }

    /// Velocity of attaching material, when it is prescribed. `None` means
    /// the material attaches with the velocity of the surface it joins.
    pub fn attach_velocity(&self) -> Option<Vec2> {
        match self.kind {
            ScenarioKind::FdmShear => Some(Vec2::new(self.feed.speed, 0.0)),
            _ => None,
        }
    }

    /// Traction on the top surface of a body at rest.
    pub fn top_traction_at_rest(&self) -> Vec2 {
        let va = self.attach_velocity().unwrap_or(Vec2::ZERO);
        growth_traction(self.mass_rate(), va, Vec2::ZERO, self.traction)
    }

    /// Elastic deformation of material as it attaches.
    pub fn attach_f_e(&self) -> Result<Tensor2> {
        match self.kind {
            ScenarioKind::NonNormal => Ok(Tensor2::shear(-self.alpha)),
            ScenarioKind::FdmShear => {
                let spec = AttachmentSpec::from_traction(self.top_traction_at_rest(), true);
                Ok(attach_elastic_deformation(&spec, &self.material)?.0)
            }
            ScenarioKind::Thermal => Ok(Tensor2::scaled_identity(1.0 / self.alpha)),
        }
    }

    pub fn with_cells(&self, n_cells: usize) -> Self {
        Self {
            n_cells,
            ..self.clone()
        }
    }

    pub fn with_viscosity(&self, viscosity: f64) -> Self {
        let mut out = self.clone();
        out.material.viscosity = viscosity;
        out
    }
}
