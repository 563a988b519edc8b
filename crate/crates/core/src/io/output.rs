//! Run artifacts: snapshot CSVs, the metrics stream, pathlines and the
//! manifest.
//!
//! Numbers are written with 17 significant digits so that reading them back
//! reproduces the in-memory values bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kinematics::FieldState;
use crate::scenarios::{RunResult, ScenarioConfig};
use crate::tensor::{Tensor2, Vec2};

pub const SNAPSHOT_HEADER: &str = "x2,v1,v2,Fe11,Fe12,Fe21,Fe22,p,rho";
pub const PATHLINE_HEADER: &str = "pathline,t,x1,x2,Fe11,Fe12,Fe21,Fe22,v1,v2";
pub const METRICS_FILE: &str = "metrics.jsonl";
pub const PATHLINES_FILE: &str = "pathlines.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub n_cells: usize,
    pub t_end: f64,
    pub steps: usize,
    pub final_height: f64,
    pub dt: Option<f64>,
    pub cfl: f64,
}

/// Summary of one run's artifacts. Every other file written to the output
/// directory is listed in `files`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub scenario: String,
    pub config: serde_json::Value,
    pub parameters: RunParameters,
    pub duration_seconds: f64,
    pub files: Vec<FileEntry>,
}

fn num(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String cannot fail");
}

fn row(out: &mut String, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        num(out, *v);
    }
    out.push('\n');
}

/// One snapshot as CSV, one row per cell with the cell-averaged velocity.
pub fn snapshot_csv(state: &FieldState) -> String {
    let mut out = String::with_capacity(200 * (state.grid.n_cells() + 1));
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for i in 0..state.grid.n_cells() {
        let v = state.cell_velocity(i);
        let f = state.f_e[i].0;
        row(
            &mut out,
            &[
                state.grid.center(i),
                v.x1,
                v.x2,
                f[0],
                f[1],
                f[2],
                f[3],
                state.pressure[i],
                state.density[i],
            ],
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub x2: Vec<f64>,
    pub velocity: Vec<Vec2>,
    pub f_e: Vec<Tensor2>,
    pub pressure: Vec<f64>,
    pub density: Vec<f64>,
}

/// Parse a snapshot CSV written by [`snapshot_csv`].
pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == SNAPSHOT_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `{SNAPSHOT_HEADER}`"),
            })
        }
    }
    let mut s = Snapshot {
        x2: Vec::new(),
        velocity: Vec::new(),
        f_e: Vec::new(),
        pressure: Vec::new(),
        density: Vec::new(),
    };
    for (k, line) in lines {
        let values = line
            .split(',')
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: k + 1,
                message: e.to_string(),
            })?;
        if values.len() != 9 {
            return Err(Error::Parse {
                line: k + 1,
                message: format!("expected 9 columns, found {}", values.len()),
            });
        }
        s.x2.push(values[0]);
        s.velocity.push(Vec2::new(values[1], values[2]));
        s.f_e.push(Tensor2([values[3], values[4], values[5], values[6]]));
        s.pressure.push(values[7]);
        s.density.push(values[8]);
    }
    Ok(s)
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<Snapshot> {
    parse_snapshot(&fs::read_to_string(path)?)
}

fn metrics_jsonl(result: &RunResult) -> Result<String> {
    let header = serde_json::json!({
        "format": "surfgrow-metrics",
        "version": 1,
        "scenario": result.config.kind.name(),
        "fields": [
            "step", "t", "dt", "height", "momentum_residual", "top_residual", "mass_jump",
            "momentum_jump", "base_velocity", "reduced_deviation", "pressure_deviation", "oracle"
        ],
    });
    let mut out = to_json(&header)?;
    out.push('\n');
    for m in &result.metrics {
        out.push_str(&to_json(m)?);
        out.push('\n');
    }
    Ok(out)
}

fn pathlines_csv(result: &RunResult) -> String {
    let mut out = String::new();
    out.push_str(PATHLINE_HEADER);
    out.push('\n');
    for (k, p) in result.pathlines.iter().enumerate() {
        for s in &p.samples {
            write!(out, "{k},").expect("writing to a String cannot fail");
            let f = s.f_e.0;
            row(&mut out, &[s.t, s.x.x1, s.x.x2, f[0], f[1], f[2], f[3], s.v.x1, s.v.x2]);
        }
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Io(std::io::Error::other(e)))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            write!(s, "{b:02x}").expect("writing to a String cannot fail");
            s
        })
}

fn is_artifact(name: &str) -> bool {
    (name.starts_with("snapshot_") && name.ends_with(".csv"))
        || name == METRICS_FILE
        || name == PATHLINES_FILE
        || name == MANIFEST_FILE
}

pub fn config_json(config: &ScenarioConfig) -> Result<serde_json::Value> {
    serde_json::to_value(config).map_err(|e| Error::Io(std::io::Error::other(e)))
}

/// Write every artifact of `result` to `out_dir` and return the manifest.
///
/// Artifacts of an earlier run in the same directory are removed first so
/// that the directory matches the manifest.
pub fn write_fields(result: &RunResult, out_dir: impl AsRef<Path>) -> Result<RunManifest> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir)?;
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_file() && entry.file_name().to_str().is_some_and(is_artifact) {
            fs::remove_file(entry.path())?;
        }
    }
    let mut files = Vec::new();
    let mut emit = |name: String, contents: String| -> Result<()> {
        let path: PathBuf = dir.join(&name);
        fs::write(&path, contents.as_bytes())?;
        files.push(FileEntry {
            name,
            bytes: contents.len() as u64,
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    };
    for (k, s) in result.snapshots.iter().enumerate() {
        emit(format!("snapshot_{k:04}.csv"), snapshot_csv(s))?;
    }
    emit(METRICS_FILE.into(), metrics_jsonl(result)?)?;
    if !result.pathlines.is_empty() {
        emit(PATHLINES_FILE.into(), pathlines_csv(result))?;
    }
    let c = &result.config;
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").into(),
        scenario: c.kind.name().into(),
        config: config_json(c)?,
        parameters: RunParameters {
            n_cells: c.n_cells,
            t_end: c.t_end,
            steps: result.steps,
            final_height: result.final_state.grid.height(),
            dt: c.dt,
            cfl: c.cfl,
        },
        duration_seconds: result.elapsed.as_secs_f64(),
        files,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    fs::write(dir.join(MANIFEST_FILE), text + "\n")?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Grid1D;

    #[test]
    fn snapshot_round_trip_is_bitwise() {
        let grid = Grid1D::new(4, 0.7).unwrap();
        let mut s = FieldState::uniform(0.3, grid, Tensor2::new(1.0, -0.1 / 3.0, 0.0, 1.0), 1.0 / 7.0, 1.0);
        s.v_faces = (0..5).map(|j| Vec2::new((j as f64).sqrt() * 0.1, 0.0)).collect();
        let text = snapshot_csv(&s);
        assert_eq!(text.lines().count(), 5);
        let back = parse_snapshot(&text).unwrap();
        for i in 0..4 {
            assert_eq!(back.x2[i].to_bits(), grid.center(i).to_bits());
            assert_eq!(back.velocity[i], s.cell_velocity(i));
            assert_eq!(back.f_e[i], s.f_e[i]);
            assert_eq!(back.pressure[i].to_bits(), s.pressure[i].to_bits());
        }
    }

    #[test]
    fn checksum_of_known_input() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn bad_snapshot_rows() {
        let text = format!("{SNAPSHOT_HEADER}\n1,2,3\n");
        assert!(matches!(parse_snapshot(&text), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_snapshot("x\n"), Err(Error::Parse { line: 1, .. })));
    }
}
