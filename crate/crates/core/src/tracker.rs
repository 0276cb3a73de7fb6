//! Front trackers: the closed-form trajectory, an explicit ODE for the jump
//! condition, and a 1D level set advected by the same speed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::model::CoefficientModel;
use crate::solver::Grid;

/// Below this the state ahead of the front counts as empty.
pub const RIGHT_STATE_FLOOR: f64 = 1e-10;
const DEGENERATE_JUMP: f64 = 1e-14;

/// How the state to the right of the front enters the speed estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VelocityStencil {
    /// `p_R = 0`: speed is the left flux divided by `p_i`.
    #[default]
    Zero,
    /// `p_R ≈ p_{i+2}`, for fronts advancing into nonzero data. Falls back
    /// to `Zero` once `p_{i+2}` drops below [`RIGHT_STATE_FLOOR`].
    TwoCellsRight,
}

impl fmt::Display for VelocityStencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VelocityStencil::Zero => "zero",
            VelocityStencil::TwoCellsRight => "two-cells-right",
        })
    }
}

impl FromStr for VelocityStencil {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(VelocityStencil::Zero),
            "two-cells-right" => Ok(VelocityStencil::TwoCellsRight),
            other => Err(Error::invalid(format!(
                "unknown stencil '{other}' (expected zero | two-cells-right)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityEstimate {
    pub v_hat: f64,
}

/// Discrete jump condition at shock index `i` (0-based, `p_i ≥ p* > p_{i+1}`),
/// with a one-sided gradient on the upwind side.
pub fn jump_velocity(
    p: &[f64],
    i: usize,
    dx: f64,
    model: &CoefficientModel,
    stencil: VelocityStencil,
) -> Result<VelocityEstimate> {
    if i == 0 || i + 1 >= p.len() {
        return Err(Error::invalid(format!(
            "shock index {i} leaves no upwind neighbour on {} nodes",
            p.len()
        )));
    }
    let f_left = -model.k_max() * (p[i] - p[i - 1]) / dx;
    match stencil {
        VelocityStencil::Zero => {
            if !(p[i] > 0.0) {
                return Err(Error::DegenerateJump(p[i]));
            }
            Ok(VelocityEstimate {
                v_hat: f_left / p[i],
            })
        }
        VelocityStencil::TwoCellsRight => {
            if i + 3 >= p.len() {
                return Err(Error::invalid(format!(
                    "shock index {i} too close to the right boundary for the two-cell stencil"
                )));
            }
            let jump = p[i] - p[i + 2];
            if jump.abs() < DEGENERATE_JUMP {
                return Err(Error::DegenerateJump(jump.abs()));
            }
            let f_right = -model.k_min() * (p[i + 3] - p[i + 2]) / dx;
            Ok(VelocityEstimate {
                v_hat: (f_left - f_right) / jump,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrackerKind {
    Exact(ExactSolution),
    JumpOde,
    LevelSet,
}

#[derive(Debug, Clone)]
pub struct ShockTracker {
    kind: TrackerKind,
    xi: f64,
    /// Signed distance on the grid nodes, negative behind the front.
    phi: Vec<f64>,
    x_lo: f64,
    dx: f64,
    stencil: VelocityStencil,
    right_state_vanished: bool,
    last_velocity: Option<f64>,
}

impl ShockTracker {
    /// Follows the closed-form trajectory, starting at time `t`.
    pub fn exact(solution: ExactSolution, grid: &Grid, t: f64) -> Self {
        Self {
            kind: TrackerKind::Exact(solution),
            xi: solution.shock_position(t),
            phi: Vec::new(),
            x_lo: grid.x_lo(),
            dx: grid.dx(),
            stencil: VelocityStencil::Zero,
            right_state_vanished: false,
            last_velocity: None,
        }
    }

    pub fn jump_ode(xi0: f64, grid: &Grid, stencil: VelocityStencil) -> Self {
        Self {
            kind: TrackerKind::JumpOde,
            xi: xi0,
            phi: Vec::new(),
            x_lo: grid.x_lo(),
            dx: grid.dx(),
            stencil,
            right_state_vanished: false,
            last_velocity: None,
        }
    }

    pub fn level_set(xi0: f64, grid: &Grid, stencil: VelocityStencil) -> Self {
        Self {
            kind: TrackerKind::LevelSet,
            xi: xi0,
            phi: grid.nodes().iter().map(|&x| x - xi0).collect(),
            x_lo: grid.x_lo(),
            dx: grid.dx(),
            stencil,
            right_state_vanished: false,
            last_velocity: None,
        }
    }

    pub fn kind(&self) -> &TrackerKind {
        &self.kind
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Speed used in the most recent update; `None` for the exact tracker.
    pub fn last_velocity(&self) -> Option<f64> {
        self.last_velocity
    }

    /// Index of the grid interval holding the front.
    pub fn shock_index(&self) -> usize {
        match self.kind {
            TrackerKind::LevelSet => {
                // last node with φ ≤ 0
                self.phi.partition_point(|&v| v <= 0.0).saturating_sub(1)
            }
            _ => {
                let s = ((self.xi - self.x_lo) / self.dx).floor();
                if s < 0.0 {
                    0
                } else {
                    s as usize
                }
            }
        }
    }

    /// Distance from node `i` to the front, clamped to `[0, dx]`.
    pub fn dx_star(&self, i: usize) -> f64 {
        let d = match self.kind {
            TrackerKind::LevelSet => self.phi[i].abs(),
            _ => self.xi - (self.x_lo + i as f64 * self.dx),
        };
        d.clamp(0.0, self.dx)
    }

    /// Speed estimate from the current profile, latching the switch from the
    /// two-cell stencil to the zero stencil once the right state is empty.
    pub fn estimate_velocity(
        &mut self,
        p: &[f64],
        i: usize,
        model: &CoefficientModel,
    ) -> Result<VelocityEstimate> {
        let mut stencil = self.stencil;
        if stencil == VelocityStencil::TwoCellsRight {
            if !self.right_state_vanished && (i + 3 >= p.len() || p[i + 2] < RIGHT_STATE_FLOOR) {
                self.right_state_vanished = true;
            }
            if self.right_state_vanished {
                stencil = VelocityStencil::Zero;
            }
        }
        jump_velocity(p, i, self.dx, model, stencil)
    }

    /// Forward Euler on `dξ/dt = V̂`.
    pub fn advance_jump_ode(&mut self, v: VelocityEstimate, dt: f64) {
        self.xi += dt * v.v_hat;
        self.last_velocity = Some(v.v_hat);
    }

    /// Upwind transport of φ with the constant speed `v`, then recovery of
    /// the front as the zero crossing.
    pub fn advance_level_set(&mut self, v: VelocityEstimate, dt: f64) -> Result<()> {
        let c = dt * v.v_hat / self.dx;
        let n = self.phi.len();
        let old = self.phi.clone();
        for j in 0..n {
            let slope = if v.v_hat >= 0.0 {
                if j == 0 {
                    old[1] - old[0]
                } else {
                    old[j] - old[j - 1]
                }
            } else if j + 1 == n {
                old[j] - old[j - 1]
            } else {
                old[j + 1] - old[j]
            };
            self.phi[j] = old[j] - c * slope;
        }
        self.last_velocity = Some(v.v_hat);
        let k = self.phi.partition_point(|&v| v <= 0.0);
        if k == 0 || k == n {
            return Err(Error::FrontOutOfDomain(if k == 0 {
                self.x_lo
            } else {
                self.x_lo + (n - 1) as f64 * self.dx
            }));
        }
        let j = k - 1;
        let (a, b) = (self.phi[j], self.phi[j + 1]);
        self.xi = self.x_lo + j as f64 * self.dx - a * self.dx / (b - a);
        Ok(())
    }

    /// Moves the front over one step. `p` is the profile the step started
    /// from, `t_next` the time after it.
    pub fn advance(
        &mut self,
        p: &[f64],
        i: usize,
        model: &CoefficientModel,
        dt: f64,
        t_next: f64,
    ) -> Result<()> {
        match self.kind {
            TrackerKind::Exact(sol) => {
                self.xi = sol.shock_position(t_next);
                Ok(())
            }
            TrackerKind::JumpOde => {
                let v = self.estimate_velocity(p, i, model)?;
                self.advance_jump_ode(v, dt);
                Ok(())
            }
            TrackerKind::LevelSet => {
                let v = self.estimate_velocity(p, i, model)?;
                self.advance_level_set(v, dt)
            }
        }
    }
}
