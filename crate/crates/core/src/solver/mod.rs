//! Explicit finite-volume stepping.
//!
//! Nodes `x_0..x_N` carry the unknowns, the end nodes hold Dirichlet data and
//! face `j + 1/2` sits midway between nodes `j` and `j + 1`. Every scheme
//! uses Forward Euler with `Δt = dt_factor·Δx²`.

mod amr;
mod ftcs;
mod grid;
mod record;
mod sam;

use std::fmt;
use std::str::FromStr;

pub use amr::{run_with_amr, AmrSimulation};
pub use ftcs::ftcs_step;
pub use grid::{locate_shock_cell, profile_crossing, support_edge, Grid, State};
pub use record::{FrontSample, ProbeSeries, ProbeSpec, RunRecord, Snapshot};
pub use sam::{sam_step, AuxiliaryGeometry, FrontTreatment};

use crate::error::{Error, Result};
use crate::model::{build_initial_condition, ProblemSpec};
use crate::tracker::{ShockTracker, VelocityStencil};
use record::Recorder;

pub const DEFAULT_DT_FACTOR: f64 = 1.0 / 32.0;
pub const DEFAULT_EPS_FACTOR: f64 = 1.0 / 16.0;
/// Values below this count as outside the support.
pub const SUPPORT_FLOOR: f64 = 1e-10;
const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Arithmetic,
    Harmonic,
    Integral,
    SamExact,
    SamJump,
    SamLevelSet,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::Arithmetic,
        SchemeKind::Harmonic,
        SchemeKind::Integral,
        SchemeKind::SamExact,
        SchemeKind::SamJump,
        SchemeKind::SamLevelSet,
    ];

    pub fn is_sam(self) -> bool {
        matches!(
            self,
            SchemeKind::SamExact | SchemeKind::SamJump | SchemeKind::SamLevelSet
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Arithmetic => "arithmetic",
            SchemeKind::Harmonic => "harmonic",
            SchemeKind::Integral => "integral",
            SchemeKind::SamExact => "sam-exact",
            SchemeKind::SamJump => "sam-jump",
            SchemeKind::SamLevelSet => "sam-levelset",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown scheme '{s}' (expected arithmetic | harmonic | integral | sam-exact | sam-jump | sam-levelset)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    /// Front-node pinning window as a fraction of `Δx`.
    pub eps_factor: f64,
    /// `Δt = dt_factor·Δx²`.
    pub dt_factor: f64,
    pub stencil: VelocityStencil,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind) -> Self {
        Self {
            kind,
            eps_factor: DEFAULT_EPS_FACTOR,
            dt_factor: DEFAULT_DT_FACTOR,
            stencil: VelocityStencil::Zero,
        }
    }

    pub fn with_dt_factor(mut self, dt_factor: f64) -> Self {
        self.dt_factor = dt_factor;
        self
    }

    pub fn with_eps_factor(mut self, eps_factor: f64) -> Self {
        self.eps_factor = eps_factor;
        self
    }

    pub fn with_stencil(mut self, stencil: VelocityStencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_factor > 0.0 && self.dt_factor.is_finite()) {
            return Err(Error::invalid(format!(
                "dt_factor = {} must be > 0",
                self.dt_factor
            )));
        }
        if !(self.eps_factor > 0.0 && self.eps_factor < 0.5) {
            return Err(Error::invalid(format!(
                "eps_factor = {} must lie in (0, 0.5)",
                self.eps_factor
            )));
        }
        Ok(())
    }
}

/// Mass bookkeeping for one step.
///
/// With `M = Σ vol_j·p_j` over the free interior nodes, an exact discrete
/// balance reads `ΔM = Δt·(F_in − F_out − absorbed)`, where `absorbed` is
/// the net flux into the front (a pinned node or the sub-cell around the
/// front). `remapped` is the mass added by resetting a pinned node to `p*`
/// before the step, and is not part of the balance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepReport {
    pub t: f64,
    pub dt: f64,
    pub mass_change: f64,
    pub flux_in: f64,
    pub flux_out: f64,
    pub absorbed: f64,
    pub remapped: f64,
    /// Magnitude of the summed terms, for a relative residual.
    pub scale: f64,
}

impl StepReport {
    pub fn residual(&self) -> f64 {
        self.mass_change - self.dt * (self.flux_in - self.flux_out - self.absorbed)
    }

    pub fn relative_residual(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual().abs()
        } else {
            self.residual().abs() / self.scale
        }
    }
}

pub(crate) fn check_finite(p: &[f64]) -> Result<()> {
    match p.iter().position(|v| !v.is_finite()) {
        Some(node) => Err(Error::NonFinite { node }),
        None => Ok(()),
    }
}

pub(crate) fn check_monotone(p: &[f64]) -> Result<()> {
    match p.windows(2).position(|w| w[1] > w[0] + MONOTONE_SLACK) {
        Some(index) => Err(Error::NonMonotone {
            index,
            amount: p[index + 1] - p[index],
        }),
        None => Ok(()),
    }
}

/// A single run on a uniform grid.
#[derive(Debug, Clone)]
pub struct Simulation {
    problem: ProblemSpec,
    grid: Grid,
    scheme: SchemeSpec,
    state: State,
    tracker: Option<ShockTracker>,
    dt: f64,
    steps: usize,
}

impl Simulation {
    pub fn new(problem: &ProblemSpec, grid: Grid, scheme: SchemeSpec) -> Result<Self> {
        scheme.validate()?;
        let mut state = build_initial_condition(problem, &grid)?;
        let tracker = match scheme.kind {
            SchemeKind::SamExact => {
                let sol = problem.reference_solution()?.ok_or_else(|| {
                    Error::invalid("sam-exact needs exact initial data to follow the exact front")
                })?;
                Some(ShockTracker::exact(sol, &grid, 0.0))
            }
            SchemeKind::SamJump => Some(ShockTracker::jump_ode(state.xi, &grid, scheme.stencil)),
            SchemeKind::SamLevelSet => {
                Some(ShockTracker::level_set(state.xi, &grid, scheme.stencil))
            }
            _ => None,
        };
        if let Some(tr) = &tracker {
            state.xi = tr.xi();
            state.shock_index = tr.shock_index();
        } else {
            state.xi = profile_crossing(grid.nodes(), &state.p, problem.model.p_star())?;
        }
        let dt = scheme.dt_factor * grid.dx() * grid.dx();
        Ok(Self {
            problem: problem.clone(),
            grid,
            scheme,
            state,
            tracker,
            dt,
            steps: 0,
        })
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scheme(&self) -> &SchemeSpec {
        &self.scheme
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn tracker(&self) -> Option<&ShockTracker> {
        self.tracker.as_ref()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    /// Steps needed to reach `t_end`; the last one may be shortened.
    pub fn total_steps(&self) -> usize {
        steps_to(self.problem.t_end, self.dt)
    }

    pub fn is_finished(&self) -> bool {
        self.steps >= self.total_steps()
    }

    /// Advances one step of the nominal size, shortened to land on `t_end`.
    pub fn step(&mut self) -> Result<StepReport> {
        let t_next = ((self.steps + 1) as f64 * self.dt).min(self.problem.t_end);
        let dt = t_next - self.state.t;
        self.step_to(t_next, dt)
    }

    /// Advances by an explicit step size.
    pub fn step_with(&mut self, dt: f64) -> Result<StepReport> {
        let t_next = self.state.t + dt;
        self.step_to(t_next, dt)
    }

    fn step_to(&mut self, t_next: f64, dt: f64) -> Result<StepReport> {
        let model = self.problem.model;
        let res = match &mut self.tracker {
            Some(tracker) => sam_step(
                &mut self.state,
                &self.grid,
                &self.scheme,
                &model,
                tracker,
                dt,
                t_next,
            ),
            None => ftcs_step(
                &mut self.state,
                &self.grid,
                &self.scheme,
                &model,
                dt,
                t_next,
            ),
        };
        let step = self.steps;
        let report = res.map_err(|e| Error::Step {
            step,
            t: self.state.t,
            source: Box::new(e),
        })?;
        self.steps += 1;
        Ok(report)
    }

    /// Runs to `t_end`, recording probes, snapshots and the front.
    pub fn run_to_end(mut self, probes: &ProbeSpec) -> Result<RunRecord> {
        let p_star = self.problem.model.p_star();
        let probe_nodes: Vec<usize> = probes
            .x
            .iter()
            .map(|&x| self.grid.nearest_node(x))
            .collect();
        let mut rec = Recorder::new(
            probes,
            probe_nodes.iter().map(|&j| self.grid.node(j)).collect(),
            self.problem.t_end,
        );
        let sample = |s: &State, grid: &Grid| -> Result<(Vec<f64>, FrontSample)> {
            let values = probe_nodes.iter().map(|&j| s.p[j]).collect();
            let front = FrontSample {
                t: s.t,
                xi: s.xi,
                crossing: profile_crossing(grid.nodes(), &s.p, p_star)?,
                support: support_edge(grid.nodes(), &s.p, SUPPORT_FLOOR),
            };
            Ok((values, front))
        };
        let initial = self.state.clone();
        let (v, f) = sample(&self.state, &self.grid)?;
        rec.record(self.state.t, &v, f, self.grid.nodes(), &self.state.p);
        while !self.is_finished() {
            let report = self.step()?;
            rec.note_step(&report);
            let (v, f) = sample(&self.state, &self.grid).map_err(|e| Error::Step {
                step: self.steps,
                t: self.state.t,
                source: Box::new(e),
            })?;
            rec.record(self.state.t, &v, f, self.grid.nodes(), &self.state.p);
        }
        Ok(rec.finish(
            self.scheme,
            self.grid.n_intervals(),
            self.grid.dx(),
            self.dt,
            initial,
            self.state,
        ))
    }
}

pub(crate) fn steps_to(t_end: f64, dt: f64) -> usize {
    let r = t_end / dt;
    let n = r.round();
    if (r - n).abs() <= 1e-9 * r.max(1.0) {
        n as usize
    } else {
        r.ceil() as usize
    }
}

/// Builds and runs a simulation.
pub fn run(
    problem: &ProblemSpec,
    grid: Grid,
    scheme: SchemeSpec,
    probes: &ProbeSpec,
) -> Result<RunRecord> {
    Simulation::new(problem, grid, scheme)?.run_to_end(probes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CoefficientModel;

    fn exact_problem(t_end: f64) -> ProblemSpec {
        ProblemSpec::exact_front(CoefficientModel::stefan(), 0.2, 0.01, t_end).unwrap()
    }

    #[test]
    fn scheme_names_round_trip() {
        for k in SchemeKind::ALL {
            assert_eq!(k.name().parse::<SchemeKind>().unwrap(), k);
        }
        assert!("upwind".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn step_count_handles_round_off() {
        assert_eq!(steps_to(0.05, 0.05 / 1000.0), 1000);
        assert_eq!(steps_to(0.0, 1e-4), 0);
        assert_eq!(steps_to(1.05e-4, 1e-4), 2);
    }

    #[test]
    fn zero_length_run_holds_only_initial_data() {
        let problem = exact_problem(0.0);
        let grid = Grid::uniform(0.0, 1.0, 50).unwrap();
        let rec = run(
            &problem,
            grid,
            SchemeSpec::new(SchemeKind::SamJump),
            &ProbeSpec::at(&[0.32]),
        )
        .unwrap();
        assert_eq!(rec.steps, 0);
        assert_eq!(rec.probes[0].samples.len(), 1);
        assert_eq!(rec.fronts.len(), 1);
        assert_eq!(rec.final_state, rec.initial_state);
    }

    #[test]
    fn run_lands_on_end_time() {
        let problem = exact_problem(0.01);
        let grid = Grid::uniform(0.0, 1.0, 25).unwrap();
        for kind in SchemeKind::ALL {
            let rec = run(
                &problem,
                grid.clone(),
                SchemeSpec::new(kind),
                &ProbeSpec::at(&[0.32]),
            )
            .unwrap();
            assert_eq!(rec.final_state.t, 0.01, "{kind}");
            assert!(rec.probes[0].samples.windows(2).all(|w| w[1].0 > w[0].0));
        }
    }

    #[test]
    fn sam_exact_requires_exact_data() {
        let problem = ProblemSpec::piecewise_linear(CoefficientModel::stefan(), 0.5, 0.01).unwrap();
        let grid = Grid::uniform(0.0, 1.0, 25).unwrap();
        assert!(Simulation::new(&problem, grid, SchemeSpec::new(SchemeKind::SamExact)).is_err());
    }

    #[test]
    fn bad_scheme_parameters_are_rejected() {
        let problem = exact_problem(0.01);
        let grid = Grid::uniform(0.0, 1.0, 25).unwrap();
        let s = SchemeSpec::new(SchemeKind::SamJump).with_eps_factor(0.0);
        assert!(Simulation::new(&problem, grid.clone(), s).is_err());
        let s = SchemeSpec::new(SchemeKind::Integral).with_dt_factor(-1.0);
        assert!(Simulation::new(&problem, grid, s).is_err());
    }

    #[test]
    fn unstable_time_step_is_reported_as_numerical_failure() {
        let problem = exact_problem(0.05);
        let grid = Grid::uniform(0.0, 1.0, 50).unwrap();
        let s = SchemeSpec::new(SchemeKind::Integral).with_dt_factor(2.0);
        let err = run(&problem, grid, s, &ProbeSpec::at(&[0.32])).unwrap_err();
        assert!(err.is_numerical(), "{err}");
        assert!(matches!(err, Error::Step { .. }));
    }
}
