//! Simulation driver: the per-round loop, pairwise policy comparison and
//! the experiment-grid sweep with its report files.

mod config;
mod grid;
mod output;
mod run;

pub use config::{Cell, ExperimentGrid, SimConfig};
pub use grid::{run_grid, CellReport, GridReport, PairRecord};
pub use output::{
    read_runs_json, results_csv, results_json, summarize_runs, write_grid_outputs, write_runs_json,
    CellSummary, CommonTimelineSummary, OutputFormat, StoredRun, SummaryFile, RESULTS_SCHEMA_VERSION,
};
pub use run::{run_detailed, run_pairwise, run_simulation, EnergyCsv, NoObserver, RoundObserver, RunOutput};
