//! Single-level refinement that follows the front.
//!
//! The coarse control volumes of the two nodes bracketing the front are
//! replaced by `2·n_inner` fine cells of width `Δx/n_inner`. Each cell
//! exchanges one two-point flux with each neighbour, measured between cell
//! centres, so the coarse and fine fluxes at the window edges coincide.
//! When the front enters another coarse interval the window is rebuilt and
//! values are carried over by linear interpolation of the composite profile.

use super::ftcs::face_coefficient;
use super::record::Recorder;
use super::{
    check_finite, check_monotone, profile_crossing, steps_to, support_edge, FrontSample, Grid,
    ProbeSpec, RunRecord, SchemeSpec, State, StepReport, SUPPORT_FLOOR,
};
use crate::averaging::two_point_flux;
use crate::error::{Error, Result};
use crate::model::ProblemSpec;

#[derive(Debug, Clone)]
pub struct AmrSimulation {
    problem: ProblemSpec,
    coarse: Grid,
    n_inner: usize,
    scheme: SchemeSpec,
    host: usize,
    centers: Vec<f64>,
    widths: Vec<f64>,
    p: Vec<f64>,
    t: f64,
    dt: f64,
    steps: usize,
    moves: usize,
}

fn layout(coarse: &Grid, host: usize, n_inner: usize) -> (Vec<f64>, Vec<f64>) {
    let dx = coarse.dx();
    let h = dx / n_inner as f64;
    let n = coarse.n_intervals();
    let mut centers = Vec::with_capacity(n + 2 * n_inner);
    let mut widths = Vec::with_capacity(n + 2 * n_inner);
    for j in 0..host {
        centers.push(coarse.node(j));
        widths.push(dx);
    }
    let start = coarse.node(host) - 0.5 * dx;
    for k in 0..2 * n_inner {
        centers.push(start + (k as f64 + 0.5) * h);
        widths.push(h);
    }
    for j in host + 2..=n {
        centers.push(coarse.node(j));
        widths.push(dx);
    }
    (centers, widths)
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x);
    if k == 0 {
        return ys[0];
    }
    if k == xs.len() {
        return ys[xs.len() - 1];
    }
    let w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    ys[k - 1] + w * (ys[k] - ys[k - 1])
}

impl AmrSimulation {
    pub fn new(
        problem: &ProblemSpec,
        coarse: Grid,
        n_inner: usize,
        scheme: SchemeSpec,
    ) -> Result<Self> {
        scheme.validate()?;
        if scheme.kind.is_sam() {
            return Err(Error::invalid("refinement runs use an averaging scheme"));
        }
        if n_inner == 0 {
            return Err(Error::invalid("n_inner must be at least 1"));
        }
        let sample = |host: usize| -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
            let (centers, widths) = layout(&coarse, host, n_inner);
            let mut p = problem.initial_profile(&centers)?;
            let last = p.len() - 1;
            p[0] = problem.bc_left;
            p[last] = problem.bc_right;
            check_monotone(&p)?;
            Ok((centers, widths, p))
        };
        let mut host = Self::host_of(&coarse, problem.initial_front()?)?;
        let (mut centers, mut widths, mut p) = sample(host)?;
        // The sampled crossing decides the host, as it does after every step.
        let sampled = Self::host_of(
            &coarse,
            profile_crossing(&centers, &p, problem.model.p_star())?,
        )?;
        if sampled != host {
            host = sampled;
            (centers, widths, p) = sample(host)?;
        }
        let h = coarse.dx() / n_inner as f64;
        Ok(Self {
            problem: problem.clone(),
            dt: scheme.dt_factor * h * h,
            coarse,
            n_inner,
            scheme,
            host,
            centers,
            widths,
            p,
            t: 0.0,
            steps: 0,
            moves: 0,
        })
    }

    fn host_of(coarse: &Grid, xi: f64) -> Result<usize> {
        let s = ((xi - coarse.x_lo()) / coarse.dx()).floor();
        if !(s >= 1.0 && (s as usize) + 2 <= coarse.n_intervals()) {
            return Err(Error::FrontOutOfDomain(xi));
        }
        Ok(s as usize)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Left coarse node of the refined pair.
    pub fn host(&self) -> usize {
        self.host
    }

    pub fn window_moves(&self) -> usize {
        self.moves
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn value_at(&self, x: f64) -> f64 {
        interpolate(&self.centers, &self.p, x)
    }

    pub fn crossing(&self) -> Result<f64> {
        profile_crossing(&self.centers, &self.p, self.problem.model.p_star())
    }

    pub fn total_steps(&self) -> usize {
        steps_to(self.problem.t_end, self.dt)
    }

    /// Composite profile sampled back on the coarse nodes.
    pub fn coarse_state(&self) -> Result<State> {
        let p: Vec<f64> = self
            .coarse
            .nodes()
            .iter()
            .map(|&x| self.value_at(x))
            .collect();
        let p_star = self.problem.model.p_star();
        Ok(State {
            shock_index: super::locate_shock_cell(&p, p_star)?,
            xi: self.crossing()?,
            p,
            t: self.t,
        })
    }

    pub fn step(&mut self) -> Result<StepReport> {
        let t_next = ((self.steps + 1) as f64 * self.dt).min(self.problem.t_end);
        let step = self.steps;
        let t = self.t;
        let report = self.advance(t_next).map_err(|e| Error::Step {
            step,
            t,
            source: Box::new(e),
        })?;
        self.steps += 1;
        Ok(report)
    }

    fn advance(&mut self, t_next: f64) -> Result<StepReport> {
        let dt = t_next - self.t;
        let model = self.problem.model;
        let m = self.p.len();
        let p = &self.p;
        let c = &self.centers;
        let flux: Vec<f64> = (0..m - 1)
            .map(|a| {
                let k = face_coefficient(self.scheme.kind, p[a], p[a + 1], &model);
                two_point_flux(k, p[a], p[a + 1], c[a + 1] - c[a])
            })
            .collect();
        let mut next = p.clone();
        let mut mass_change = 0.0;
        let mut scale = dt * flux[0].abs();
        for a in 1..m - 1 {
            next[a] = p[a] + dt / self.widths[a] * (flux[a - 1] - flux[a]);
            mass_change += self.widths[a] * (next[a] - p[a]);
            scale += self.widths[a] * next[a].abs() + dt * flux[a].abs();
        }
        check_finite(&next)?;
        check_monotone(&next)?;
        self.p = next;
        self.t = t_next;

        let mut remapped = 0.0;
        let host = Self::host_of(&self.coarse, self.crossing()?)?;
        if host != self.host {
            let before = self.interior_mass();
            let (centers, widths) = layout(&self.coarse, host, self.n_inner);
            let mut p: Vec<f64> = centers.iter().map(|&x| self.value_at(x)).collect();
            let last = p.len() - 1;
            p[0] = self.problem.bc_left;
            p[last] = self.problem.bc_right;
            self.centers = centers;
            self.widths = widths;
            self.p = p;
            self.host = host;
            self.moves += 1;
            remapped = self.interior_mass() - before;
        }
        Ok(StepReport {
            t: t_next,
            dt,
            mass_change,
            flux_in: flux[0],
            flux_out: flux[m - 2],
            absorbed: 0.0,
            remapped,
            scale,
        })
    }

    fn interior_mass(&self) -> f64 {
        let m = self.p.len();
        (1..m - 1).map(|a| self.widths[a] * self.p[a]).sum()
    }

    pub fn run_to_end(mut self, probes: &ProbeSpec) -> Result<RunRecord> {
        let mut rec = Recorder::new(probes, probes.x.clone(), self.problem.t_end);
        let sample = |s: &Self| -> Result<(Vec<f64>, FrontSample)> {
            let crossing = s.crossing()?;
            let values = probes.x.iter().map(|&x| s.value_at(x)).collect();
            let front = FrontSample {
                t: s.t,
                xi: crossing,
                crossing,
                support: support_edge(&s.centers, &s.p, SUPPORT_FLOOR),
            };
            Ok((values, front))
        };
        let initial = self.coarse_state()?;
        let (v, f) = sample(&self)?;
        rec.record(self.t, &v, f, &self.centers, &self.p);
        let total = self.total_steps();
        while self.steps < total {
            let report = self.step()?;
            rec.note_step(&report);
            let (v, f) = sample(&self)?;
            rec.record(self.t, &v, f, &self.centers, &self.p);
        }
        let final_state = self.coarse_state()?;
        Ok(rec.finish(
            self.scheme,
            self.coarse.n_intervals(),
            self.coarse.dx(),
            self.dt,
            initial,
            final_state,
        ))
    }
}

/// Runs a refined simulation to `t_end`.
pub fn run_with_amr(
    problem: &ProblemSpec,
    coarse: Grid,
    n_inner: usize,
    scheme: SchemeSpec,
    probes: &ProbeSpec,
) -> Result<RunRecord> {
    AmrSimulation::new(problem, coarse, n_inner, scheme)?.run_to_end(probes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CoefficientModel;
    use crate::solver::{run, SchemeKind};

    fn problem(t_end: f64) -> ProblemSpec {
        ProblemSpec::exact_front(CoefficientModel::stefan(), 0.2, 0.01, t_end).unwrap()
    }

    #[test]
    fn layout_tiles_the_domain() {
        let g = Grid::uniform(0.0, 1.0, 20).unwrap();
        let (c, w) = layout(&g, 5, 4);
        assert_eq!(c.len(), 21 - 2 + 8);
        let total: f64 = w[1..w.len() - 1].iter().sum();
        // interior coarse cells plus the window, without the two end nodes
        assert!((total - 19.0 * g.dx()).abs() < 1e-14);
        assert!(c.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn single_inner_cell_reproduces_plain_ftcs() {
        let pr = problem(0.01);
        let grid = Grid::uniform(0.0, 1.0, 25).unwrap();
        let scheme = SchemeSpec::new(SchemeKind::Integral);
        let probes = ProbeSpec::at(&[0.32]);
        let plain = run(&pr, grid.clone(), scheme, &probes).unwrap();
        let amr = run_with_amr(&pr, grid, 1, scheme, &probes).unwrap();
        assert_eq!(plain.steps, amr.steps);
        for (a, b) in plain.final_state.p.iter().zip(&amr.final_state.p) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        let pa = plain.probes[0].values();
        let pb = amr.probes[0].values();
        for (a, b) in pa.iter().zip(&pb) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn window_follows_the_front() {
        let pr = problem(0.01);
        let grid = Grid::uniform(0.0, 1.0, 25).unwrap();
        let mut sim =
            AmrSimulation::new(&pr, grid, 4, SchemeSpec::new(SchemeKind::Integral)).unwrap();
        let start = sim.host();
        for _ in 0..sim.total_steps() {
            let r = sim.step().unwrap();
            assert!(r.relative_residual() < 1e-12);
            let xi = sim.crossing().unwrap();
            let dx = 0.04;
            assert!(xi >= sim.host() as f64 * dx && xi <= (sim.host() + 1) as f64 * dx);
        }
        assert!(sim.host() > start);
        assert!(sim.window_moves() >= 1);
    }

    #[test]
    fn rejects_shock_schemes() {
        let grid = Grid::uniform(0.0, 1.0, 25).unwrap();
        assert!(AmrSimulation::new(
            &problem(0.01),
            grid,
            4,
            SchemeSpec::new(SchemeKind::SamJump)
        )
        .is_err());
    }
}
