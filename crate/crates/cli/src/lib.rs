//! Scenario files, preset slice catalog, experiment drivers and reports.

pub mod experiment;
pub mod metrics;
pub mod presets;
pub mod scenario;
pub mod testbed;

pub use experiment::{
    check_solution, compare_embedding, max_rate_multiplier, run_experiment, write_comparison, write_experiment, ExperimentOutput,
    ReportError,
};
pub use metrics::{emit_rb_breakdown, solution_metrics, MetricsReport, Outcome, RbRow, SolutionMetrics, VariantMetrics};
pub use scenario::{ingest_rrh_csv, load_scenario, parse_scenario, Scenario, ScenarioError, ScenarioFile};
