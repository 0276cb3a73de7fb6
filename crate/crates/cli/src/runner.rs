use std::path::PathBuf;

use rayon::prelude::*;

use gpme_core::diagnostics::{
    convergence_order, final_error, locking_metric, oscillation_metrics, shock_position_error,
    ErrorReport, Norm, OrderFit, OscillationReport,
};
use gpme_core::solver::{run, run_with_amr, ProbeSpec, RunRecord, SchemeKind};
use gpme_core::{ExactSolution, Grid, ProblemSpec};

use crate::config::{validate_config, ExperimentConfig};
use crate::error::CliError;
use crate::output::{ensure_dir, num, opt, write_csv, write_run};

/// One (scheme, time step, refinement, grid) combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunKey {
    pub scheme: SchemeKind,
    pub dt_factor: f64,
    pub n_inner: usize,
    pub n: usize,
}

impl RunKey {
    pub fn stem(&self) -> String {
        let mut s = format!("{}_N{}_dtf{}", self.scheme, self.n, self.dt_factor);
        if self.n_inner > 0 {
            s.push_str(&format!("_amr{}", self.n_inner));
        }
        s
    }

    fn group(&self) -> (SchemeKind, u64, usize) {
        (self.scheme, self.dt_factor.to_bits(), self.n_inner)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub key: RunKey,
    pub record: RunRecord,
    pub errors: Option<ErrorReport>,
    /// Metrics of the first probe.
    pub oscillation: Option<OscillationReport>,
    pub front_displacement: f64,
    pub max_shock_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub output_dir: PathBuf,
    pub outcomes: Vec<RunOutcome>,
    pub files: Vec<PathBuf>,
}

pub fn plan(cfg: &ExperimentConfig) -> Vec<RunKey> {
    let mut keys = Vec::new();
    for &scheme in &cfg.schemes {
        for &dt_factor in &cfg.dt_factors {
            for &n_inner in &cfg.n_inner {
                for &n in &cfg.grids {
                    keys.push(RunKey {
                        scheme,
                        dt_factor,
                        n_inner,
                        n,
                    });
                }
            }
        }
    }
    keys
}

pub fn execute(
    cfg: &ExperimentConfig,
    problem: &ProblemSpec,
    oracle: Option<&ExactSolution>,
    key: RunKey,
) -> Result<RunOutcome, CliError> {
    let wrap = |source| CliError::Run {
        run: key.stem(),
        source,
    };
    let grid = Grid::uniform(problem.x_lo, problem.x_hi, key.n).map_err(wrap)?;
    let nodes = grid.nodes().to_vec();
    let scheme = cfg.scheme(key.scheme, key.dt_factor);
    let probes = ProbeSpec {
        x: cfg.probes.clone(),
        snapshot_times: cfg.snapshot_times.clone(),
    };
    let record = if key.n_inner > 0 {
        run_with_amr(problem, grid, key.n_inner, scheme, &probes)
    } else {
        run(problem, grid, scheme, &probes)
    }
    .map_err(wrap)?;
    let errors = oracle
        .map(|o| final_error(&record, o, &nodes))
        .transpose()
        .map_err(wrap)?;
    let oscillation = record
        .probes
        .first()
        .map(|p| oscillation_metrics(&p.values(), problem.model.p_star(), 1e-12));
    let max_shock_error = oracle.map(|o| {
        shock_position_error(&record, o, record.dx)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.1))
    });
    Ok(RunOutcome {
        key,
        front_displacement: locking_metric(&record),
        record,
        errors,
        oscillation,
        max_shock_error,
    })
}

/// Validates, runs every combination in parallel, then writes per-run files
/// and `summary.csv` into the output directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let diagnostics = validate_config(cfg);
    if !diagnostics.is_empty() {
        let lines: Vec<String> = diagnostics.iter().map(|d| format!("  {d}")).collect();
        return Err(CliError::Invalid(lines.join("\n")));
    }
    let problem = cfg.problem().map_err(|source| CliError::Run {
        run: "problem".into(),
        source,
    })?;
    let oracle = problem
        .reference_solution()
        .map_err(|source| CliError::Run {
            run: "reference solution".into(),
            source,
        })?;

    let keys = plan(cfg);
    let outcomes: Vec<RunOutcome> = keys
        .par_iter()
        .map(|&key| execute(cfg, &problem, oracle.as_ref(), key))
        .collect::<Result<_, _>>()?;

    let dir = cfg.output_dir.clone();
    ensure_dir(&dir)?;
    let mut files = Vec::new();
    for o in &outcomes {
        files.extend(write_run(&dir, &o.key.stem(), &o.record, oracle.as_ref())?);
    }
    let summary = dir.join("summary.csv");
    write_summary(&summary, &outcomes)?;
    files.push(summary);
    Ok(ExperimentReport {
        output_dir: dir,
        outcomes,
        files,
    })
}

fn group_orders(outcomes: &[RunOutcome], key: &RunKey) -> (Option<OrderFit>, Option<OrderFit>) {
    let reports: Vec<ErrorReport> = outcomes
        .iter()
        .filter(|o| o.key.group() == key.group())
        .filter_map(|o| o.errors)
        .collect();
    let fit = |norm| convergence_order(&reports, norm).ok();
    (fit(Norm::L2), fit(Norm::Linf))
}

pub const SUMMARY_HEADER: &[&str] = &[
    "scheme",
    "N",
    "dx",
    "l2",
    "linf",
    "order",
    "order_linf",
    "errors_decrease",
    "dt_factor",
    "n_inner",
    "l2_unweighted",
    "n_drops",
    "max_drop",
    "n_threshold_crossings",
    "front_displacement",
    "max_shock_error",
    "max_conservation_residual",
];

fn write_summary(path: &std::path::Path, outcomes: &[RunOutcome]) -> Result<(), CliError> {
    let rows = outcomes.iter().map(|o| {
        let (l2, linf) = group_orders(outcomes, &o.key);
        let decrease = match (l2, linf) {
            (Some(a), Some(b)) => (a.monotone && b.monotone).to_string(),
            _ => String::new(),
        };
        vec![
            o.key.scheme.to_string(),
            o.key.n.to_string(),
            num(o.record.dx),
            opt(o.errors.map(|e| e.l2)),
            opt(o.errors.map(|e| e.linf)),
            opt(l2.map(|f| f.order)),
            opt(linf.map(|f| f.order)),
            decrease,
            num(o.key.dt_factor),
            o.key.n_inner.to_string(),
            opt(o.errors.map(|e| e.l2_unweighted)),
            o.oscillation.map(|r| r.n_drops.to_string()).unwrap_or_default(),
            opt(o.oscillation.map(|r| r.max_drop)),
            o.oscillation.map(|r| r.n_threshold_crossings.to_string()).unwrap_or_default(),
            num(o.front_displacement),
            opt(o.max_shock_error),
            num(o.record.max_relative_residual),
        ]
    });
    write_csv(path, SUMMARY_HEADER, rows)
}
