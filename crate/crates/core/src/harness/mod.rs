//! Experiment harness: configuration, the active-learning loop, multi-seed
//! aggregation with 90% bands, selection timing, and CSV emission.

mod config;
mod csv;
mod run;

pub use config::{BaseData, DatasetSpec, ExperimentConfig, FirstBatchMode, ModelSpec};
pub use csv::{
    read_raw_csv, render_aggregate_csv, render_raw_csv, write_aggregate_csv, write_raw_csv,
    AGGREGATE_HEADER, RAW_HEADER,
};
pub use run::{
    aggregate_runs, bench_selection, percentile_inclusive, run_al_loop, run_experiment,
    AggregateCurve, AggregatePoint, BenchRow, CurvePoint, ExperimentOutput, RunResult,
};
