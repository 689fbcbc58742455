//! Benchmark problems, convergence sweeps and report formatting.

mod convergence;
mod eps;
mod examples;
mod report;

pub use convergence::{
    run_convergence, shoot_example, ConvergenceReport, ConvergenceRow, Pipeline, ReportMeta,
    ALPHA_SWEEP, TABLE_SWEEP,
};
pub use eps::check_eps_reduction;
pub use examples::{build_example, build_example_with_sign, ExampleId, ExampleProblem, LeftBcSign};
pub use report::{emit_report, format_sci, parse_csv, CsvRow, ReportFormat, CSV_HEADER};
