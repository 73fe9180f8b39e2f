//! Experiment harness: synthetic maps, batch runs, summaries and SVG output.

mod generate;
mod run;
mod summary;
mod svg;

pub use generate::{generate_map, GenParams, GenerateError, MapKind};
pub use run::{
    run_benchmark, BenchConfig, ConfigError, ExperimentRecord, MapSpec, OutputPaths, TerminalRule,
};
pub use summary::{summarize, GapStats, Optimality, RuntimeRow, Summary, SummaryError};
pub use svg::{edge_labels, render_svg, EdgeLabel, RenderError};
