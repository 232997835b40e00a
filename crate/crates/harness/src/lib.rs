//! Experiment harness around `wagerlearn-core`: panel ingestion, synthetic
//! panel simulation, benchmark orchestration, trace aggregation, and the
//! CSV/JSON/SVG writers behind the `wagerlearn` binary.
//!
//! Everything here is deterministic in (seed, configuration): parallel cells
//! draw from derived random streams and aggregation reduces in a fixed
//! order, so reruns reproduce outputs byte for byte.

pub mod audit_cmd;
pub mod bench;
pub mod config;
pub mod emit;
pub mod error;
pub mod ingest;
pub mod sim;
pub mod trace;

pub use bench::{
    run_benchmark, run_one, sample_expert_groups, AlgorithmSpec, Family, ALGORITHM_NAMES,
};
pub use config::{FileConfig, Formats};
pub use emit::{read_json, render_svg, write_csv, write_json, write_svg, PlotOptions};
pub use error::{HarnessError, Result};
pub use ingest::{import_raw, ingest_panel, write_normalized, ColumnMap, IngestReport};
pub use sim::{run_monte_carlo, SimulationSpec};
pub use trace::{percentile, EnsembleMeta, RegretTrace, RoundStats, TraceEnsemble, TraceMeta};
