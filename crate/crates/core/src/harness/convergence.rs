use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::examples::{ExampleId, ExampleProblem};
use crate::error::{Error, Result};
use crate::hpcm::Scheme;
use crate::linear_explicit::shoot_linear;
use crate::shooting::{shoot, Method, ShootingConfig, ShootingTrace, Termination};
use crate::types::UniformGrid;

/// Sweep used for the fixed-order error tables.
pub const TABLE_SWEEP: [usize; 6] = [10, 20, 40, 80, 160, 320];
/// Sweep used for the order-variation tables.
pub const ALPHA_SWEEP: [usize; 6] = [64, 128, 256, 512, 1024, 2048];

/// Which discretization integrates the base problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pipeline {
    /// Predictor-corrector scheme on the reduced system.
    Hpcm,
    /// Explicit linear scheme shooting on `y(0)` (linear examples only).
    LinearExplicit,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Hpcm => "hpcm",
            Pipeline::LinearExplicit => "linear-explicit",
        })
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hpcm" => Ok(Pipeline::Hpcm),
            "linear-explicit" | "explicit" => Ok(Pipeline::LinearExplicit),
            other => Err(Error::InvalidArgument(format!(
                "unknown pipeline {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportMeta {
    pub example: ExampleId,
    pub pipeline: Pipeline,
    pub method: Method,
    pub scheme: Scheme,
    pub alpha1: f64,
    pub alpha2: f64,
    pub s0: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `None` when the row failed.
    pub max_error: Option<f64>,
    /// Observed order against the previous successful row.
    pub rate: Option<f64>,
    /// Shooting updates performed.
    pub k: usize,
    pub residual: f64,
    pub wall_time_s: f64,
    pub termination: Option<Termination>,
    pub failure: Option<String>,
}

impl ConvergenceRow {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub meta: ReportMeta,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn last(&self) -> Option<&ConvergenceRow> {
        self.rows.last()
    }

    pub fn row(&self, n: usize) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Shoot `example` on a uniform grid with `n` intervals through `pipeline`.
pub fn shoot_example(
    example: &ExampleProblem,
    pipeline: Pipeline,
    n: usize,
    config: &ShootingConfig,
) -> Result<ShootingTrace> {
    let grid = UniformGrid::new(0.0, example.bvp.end(), n)?;
    match pipeline {
        Pipeline::Hpcm => shoot(&example.bvp, &grid, config),
        Pipeline::LinearExplicit => {
            let linear = example.linear.as_ref().ok_or_else(|| {
                Error::InvalidArgument(format!("{} has no linear-explicit form", example.id))
            })?;
            // the config carries the regularization for both pipelines
            shoot_linear(&linear.clone().with_eps(config.eps)?, &grid, config)
        }
    }
}

/// Shoot at every `N` in `n_list` (rows run in parallel) and tabulate the
/// max nodal error and observed rate. A failing row is recorded and the
/// sweep continues.
pub fn run_convergence(
    example: &ExampleProblem,
    pipeline: Pipeline,
    n_list: &[usize],
    config: &ShootingConfig,
) -> Result<ConvergenceReport> {
    config.validate()?;
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "N list must be non-empty and strictly increasing".into(),
        ));
    }
    let mut rows: Vec<ConvergenceRow> = n_list
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let outcome = shoot_example(example, pipeline, n, config);
            let wall_time_s = start.elapsed().as_secs_f64();
            match outcome {
                Ok(trace) => {
                    let it = trace.final_iterate();
                    let failure = match &trace.termination {
                        Termination::Diverged(why) => Some(format!("diverged: {why}")),
                        _ => None,
                    };
                    ConvergenceRow {
                        n,
                        max_error: failure
                            .is_none()
                            .then(|| example.max_error(&trace.final_solution)),
                        rate: None,
                        k: trace.updates(),
                        residual: it.residual,
                        wall_time_s,
                        termination: Some(trace.termination.clone()),
                        failure,
                    }
                }
                Err(e) => ConvergenceRow {
                    n,
                    max_error: None,
                    rate: None,
                    k: 0,
                    residual: f64::NAN,
                    wall_time_s,
                    termination: None,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();
    for i in 1..rows.len() {
        let (prev, cur) = (&rows[i - 1], &rows[i]);
        if let (Some(ep), Some(e)) = (prev.max_error, cur.max_error) {
            rows[i].rate = Some((ep / e).ln() / (cur.n as f64 / prev.n as f64).ln());
        }
    }
    Ok(ConvergenceReport {
        meta: ReportMeta {
            example: example.id,
            pipeline,
            method: config.method,
            scheme: config.scheme,
            alpha1: example.alpha1,
            alpha2: example.alpha2,
            s0: config.s0,
            tol: config.tol,
        },
        rows,
    })
}
