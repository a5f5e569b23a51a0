//! Benchmarking harness for the noise-guessing decoder toolkit: seeded
//! Monte Carlo sweeps, analytical curve emission, CSV and SVG output.

pub mod config;
pub mod csvout;
pub mod curves;
pub mod svg;
pub mod sweep;

pub use config::{ChannelPoint, CodeSpec, DecoderSpec, ExperimentConfig, HarnessError, RuleSpec};
pub use sweep::{run_sweep, PointResult, SweepResult};
