//! Configuration input and run artifacts.

mod config;
mod output;

pub use config::{parse_config, parse_config_str};
pub use output::{
    config_json, parse_snapshot, read_snapshot, sha256_hex, snapshot_csv, write_fields, FileEntry, RunManifest,
    RunParameters, Snapshot, MANIFEST_FILE, METRICS_FILE, PATHLINES_FILE, PATHLINE_HEADER, SNAPSHOT_HEADER,
};
