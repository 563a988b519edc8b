//! Scenario configuration files.
//!
//! TOML with a top-level `kind` and the sections `[material]`, `[growth]`,
//! `[domain]`, `[time]`, `[study]` and `[output]`. Omitted optional keys take
//! the values of the scenario preset; see the README for the full grammar.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scenarios::{ScenarioConfig, ScenarioKind};
use crate::tensor::Vec2;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: ScenarioKind,
    material: RawMaterial,
    #[serde(default)]
    growth: RawGrowth,
    #[serde(default)]
    domain: RawDomain,
    time: RawTime,
    #[serde(default)]
    study: RawStudy,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    #[serde(rename = "G")]
    shear_modulus: f64,
    mu: Option<f64>,
    rho: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrowth {
    alpha: Option<f64>,
    #[serde(rename = "V_G")]
    growth_speed: Option<f64>,
    h: Option<f64>,
    v0: Option<f64>,
    #[serde(rename = "L")]
    length: Option<f64>,
    traction: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    #[serde(rename = "H0")]
    initial_height: Option<f64>,
    n_cells: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_end: f64,
    dt: Option<f64>,
    cfl: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    mu_sweep: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    snapshots: Option<usize>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parse and validate a configuration held in memory.
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    let mut c = ScenarioConfig::preset(raw.kind);
    c.material.shear_modulus = raw.material.shear_modulus;
    if let Some(mu) = raw.material.mu {
        c.material.viscosity = mu;
    }
    if let Some(rho) = raw.material.rho {
        c.material.density = rho;
    }
    let g = raw.growth;
    if let Some(alpha) = g.alpha {
        c.alpha = alpha;
    }
    if let Some(v) = g.growth_speed {
        c.growth_speed = v;
    }
    if let Some(h) = g.h {
        c.feed.thickness = h;
    }
    if let Some(v0) = g.v0 {
        c.feed.speed = v0;
    }
    if let Some(l) = g.length {
        c.feed.length = l;
    }
    if let Some([t1, t2]) = g.traction {
        c.traction = Vec2::new(t1, t2);
    }
    if let Some(h0) = raw.domain.initial_height {
        c.initial_height = h0;
    }
    if let Some(n) = raw.domain.n_cells {
        c.n_cells = n;
    }
    c.t_end = raw.time.t_end;
    c.dt = raw.time.dt;
    if let Some(cfl) = raw.time.cfl {
        c.cfl = cfl;
    }
    if let Some(sweep) = raw.study.mu_sweep {
        c.mu_sweep = sweep;
    }
    if let Some(s) = raw.output.snapshots {
        c.snapshots = s;
    }
    c.validate()?;
    Ok(c)
}

/// Read, parse and validate a configuration file.
///
/// A file that cannot be read is reported as a parse error on line 0.
pub fn parse_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_str(&text)
}
