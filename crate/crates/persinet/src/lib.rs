//! IO, file formats, configuration, and orchestration for the
//! `persinet-core` analysis pipeline.
//!
//! The interesting mathematics lives in `persinet-core`; this crate adds the
//! parts that need an operating system: CSV/JSON readers and writers, the
//! TOML run configuration, a deterministic synthetic-corpus generator, and
//! parallel grid population. The `persinet` binary wires these into the
//! `select`, `sweep`, `synth`, and `spectrum` subcommands.

pub mod config;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod synth;

pub use config::{InputFormat, RunConfig};
pub use error::{Error, Result};
pub use pipeline::{
    populate_grid_parallel, prepare, run_select, run_spectrum, run_sweep, run_synth, PreparedRun,
    SelectOutput, SweepOutput,
};
pub use synth::SynthProfile;
