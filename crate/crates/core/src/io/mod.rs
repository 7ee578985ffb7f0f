//! Experiment configuration and file output.

mod config;
mod manifest;
mod output;
mod schema;
mod snapshot;

pub use config::{
    Backend, ExperimentConfig, GradcheckConfig, GridConfig, IntegratorConfig, MomentaConfig,
    ParticleConfig, PerturbationConfig, RhoConfig, SolitonConfig, SweepConfig,
};
pub use manifest::{config_hash, sha256_hex, unix_now, OutputFile, RunManifest};
pub use output::{write_csv, Check, Report};
pub use schema::{AtlasRow, GradientRow, JacobianRow, LowerBoundRow, StabilityRow, TrajectoryRow};
pub use snapshot::{
    decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, Snapshot, HEADER_LEN, MAGIC,
};
