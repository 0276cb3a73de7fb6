use super::{SchemeSpec, State, StepReport};

/// Where and when to sample a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeSpec {
    /// Probe locations; each samples its nearest node (or interpolates on
    /// a refined mesh).
    pub x: Vec<f64>,
    pub snapshot_times: Vec<f64>,
}

impl ProbeSpec {
    pub fn at(x: &[f64]) -> Self {
        Self {
            x: x.to_vec(),
            snapshot_times: Vec::new(),
        }
    }

    pub fn with_snapshots(mut self, times: &[f64]) -> Self {
        self.snapshot_times = times.to_vec();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSeries {
    pub x_requested: f64,
    /// Location actually sampled.
    pub x: f64,
    /// `(t, p)` after every step, starting with the initial data.
    pub samples: Vec<(f64, f64)>,
}

impl ProbeSeries {
    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t_requested: f64,
    pub t: f64,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

/// Front positions after a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSample {
    pub t: f64,
    /// Tracked front (shock-based schemes) or `crossing` otherwise.
    pub xi: f64,
    /// Interpolated `p*` level of the profile.
    pub crossing: f64,
    /// Edge of the support.
    pub support: f64,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub scheme: SchemeSpec,
    /// Coarse intervals.
    pub n: usize,
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub probes: Vec<ProbeSeries>,
    pub snapshots: Vec<Snapshot>,
    pub fronts: Vec<FrontSample>,
    pub initial_state: State,
    pub final_state: State,
    /// Largest relative conservation residual over all steps.
    pub max_relative_residual: f64,
    /// Total mass added by resetting pinned nodes.
    pub remapped_mass: f64,
}

pub(crate) struct Recorder {
    probes: Vec<ProbeSeries>,
    pending: Vec<f64>,
    snapshots: Vec<Snapshot>,
    fronts: Vec<FrontSample>,
    max_residual: f64,
    remapped: f64,
    steps: usize,
}

impl Recorder {
    pub fn new(spec: &ProbeSpec, sampled_x: Vec<f64>, t_end: f64) -> Self {
        let probes = spec
            .x
            .iter()
            .zip(sampled_x)
            .map(|(&x_requested, x)| ProbeSeries {
                x_requested,
                x,
                samples: Vec::new(),
            })
            .collect();
        let mut pending: Vec<f64> = spec
            .snapshot_times
            .iter()
            .copied()
            .filter(|&t| t <= t_end)
            .collect();
        pending.sort_by(|a, b| b.total_cmp(a));
        Self {
            probes,
            pending,
            snapshots: Vec::new(),
            fronts: Vec::new(),
            max_residual: 0.0,
            remapped: 0.0,
            steps: 0,
        }
    }

    pub fn note_step(&mut self, report: &StepReport) {
        self.max_residual = self.max_residual.max(report.relative_residual());
        self.remapped += report.remapped;
        self.steps += 1;
    }

    pub fn record(&mut self, t: f64, values: &[f64], front: FrontSample, x: &[f64], p: &[f64]) {
        for (probe, &v) in self.probes.iter_mut().zip(values) {
            probe.samples.push((t, v));
        }
        self.fronts.push(front);
        while let Some(&ts) = self.pending.last() {
            if t < ts * (1.0 - 1e-12) - 1e-15 {
                break;
            }
            self.pending.pop();
            self.snapshots.push(Snapshot {
                t_requested: ts,
                t,
                x: x.to_vec(),
                p: p.to_vec(),
            });
        }
    }

    pub fn finish(
        self,
        scheme: SchemeSpec,
        n: usize,
        dx: f64,
        dt: f64,
        initial_state: State,
        final_state: State,
    ) -> RunRecord {
        RunRecord {
            scheme,
            n,
            dx,
            dt,
            steps: self.steps,
            probes: self.probes,
            snapshots: self.snapshots,
            fronts: self.fronts,
            initial_state,
            final_state,
            max_relative_residual: self.max_residual,
            remapped_mass: self.remapped,
        }
    }
}
