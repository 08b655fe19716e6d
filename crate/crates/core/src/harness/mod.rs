//! Files, rendering, configuration and sweeps around the core pipeline.

pub mod config;
pub mod gridfile;
pub mod metrics;
pub mod render;
pub mod sweep;

pub use config::{KeyValues, Length, RunParams, SweepConfig};
pub use gridfile::{read_grid, write_grid, Grid};
pub use metrics::nmse;
pub use render::render;
pub use sweep::{run_sweep, write_csv, SweepRecord, CSV_HEADER};
