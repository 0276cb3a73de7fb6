//! Problem definition: step coefficient, its Kirchhoff transform Φ, boundary
//! data and initial conditions.

use crate::error::{Error, Result};
use crate::exact::{solve_front_constant, ExactSolution};
use crate::solver::{locate_shock_cell, Grid, State};

/// Step coefficient `k(p) = k_max` for `p ≥ p*`, `k_min` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientModel {
    k_max: f64,
    k_min: f64,
    p_star: f64,
}

impl CoefficientModel {
    pub fn new(k_max: f64, k_min: f64, p_star: f64) -> Result<Self> {
        if !(k_max.is_finite() && k_min.is_finite() && p_star.is_finite()) {
            return Err(Error::invalid("coefficient parameters must be finite"));
        }
        if k_min < 0.0 {
            return Err(Error::invalid(format!("k_min = {k_min} must be >= 0")));
        }
        if k_max <= k_min {
            return Err(Error::invalid(format!(
                "k_max = {k_max} must exceed k_min = {k_min}"
            )));
        }
        if p_star <= 0.0 {
            return Err(Error::invalid(format!("p_star = {p_star} must be > 0")));
        }
        Ok(Self {
            k_max,
            k_min,
            p_star,
        })
    }

    /// The standard test model `k_max = 1`, `k_min = 0`, `p* = 0.5`.
    pub fn stefan() -> Self {
        Self {
            k_max: 1.0,
            k_min: 0.0,
            p_star: 0.5,
        }
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn k_min(&self) -> f64 {
        self.k_min
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    /// Same model with a different `k_min`.
    pub fn with_k_min(&self, k_min: f64) -> Result<Self> {
        Self::new(self.k_max, k_min, self.p_star)
    }

    pub fn coefficient(&self, p: f64) -> f64 {
        if p >= self.p_star {
            self.k_max
        } else {
            self.k_min
        }
    }

    /// `Φ(p) = ∫₀ᵖ k`, continuous and piecewise linear with a kink at `p*`.
    /// For `k_min = 0` this is `k_max·(p − p*)₊`.
    pub fn phi(&self, p: f64) -> f64 {
        if p >= self.p_star {
            self.k_min * self.p_star + self.k_max * (p - self.p_star)
        } else {
            self.k_min * p
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Similarity solution for `(k_max, k_min_gen, p*)` evaluated at `t0`.
    /// A small positive `k_min_gen` rounds the lower corner of the profile.
    ExactAtTime { t0: f64, k_min_gen: f64 },
    /// `max(0, bc_left·(1 − (x − x_lo)/(x_knee − x_lo)))`.
    PiecewiseLinear { x_knee: f64 },
    /// Tabulated profile, linearly interpolated onto the grid.
    Custom { x: Vec<f64>, p: Vec<f64> },
}

impl InitialCondition {
    /// Exact-profile initial data whose front sits at `front`.
    pub fn exact_with_front(model: &CoefficientModel, front: f64, k_min_gen: f64) -> Result<Self> {
        if front <= 0.0 {
            return Err(Error::invalid(format!("initial front {front} must be > 0")));
        }
        let gen = solve_front_constant(&model.with_k_min(k_min_gen)?)?;
        let t0 = (front / gen.alpha()).powi(2);
        Ok(InitialCondition::ExactAtTime { t0, k_min_gen })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub model: CoefficientModel,
    pub x_lo: f64,
    pub x_hi: f64,
    pub bc_left: f64,
    pub bc_right: f64,
    pub initial_condition: InitialCondition,
    pub t_end: f64,
}

impl ProblemSpec {
    /// Unit interval with data `(1, 0)` and the exact profile placed so the
    /// front starts at `front`.
    pub fn exact_front(
        model: CoefficientModel,
        front: f64,
        k_min_gen: f64,
        t_end: f64,
    ) -> Result<Self> {
        let spec = Self {
            model,
            x_lo: 0.0,
            x_hi: 1.0,
            bc_left: 1.0,
            bc_right: 0.0,
            initial_condition: InitialCondition::exact_with_front(&model, front, k_min_gen)?,
            t_end,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Unit interval with data `(1, 0)` and a linear ramp vanishing at `x_knee`.
    pub fn piecewise_linear(model: CoefficientModel, x_knee: f64, t_end: f64) -> Result<Self> {
        let spec = Self {
            model,
            x_lo: 0.0,
            x_hi: 1.0,
            bc_left: 1.0,
            bc_right: 0.0,
            initial_condition: InitialCondition::PiecewiseLinear { x_knee },
            t_end,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let p_star = self.model.p_star();
        if !(self.x_lo < self.x_hi) {
            return Err(Error::invalid(format!(
                "domain [{}, {}] is empty",
                self.x_lo, self.x_hi
            )));
        }
        if !(self.bc_left > p_star && p_star > self.bc_right) {
            return Err(Error::invalid(format!(
                "need bc_left > p_star > bc_right, got {} > {} > {}",
                self.bc_left, p_star, self.bc_right
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid(format!(
                "t_end = {} must be >= 0",
                self.t_end
            )));
        }
        match &self.initial_condition {
            InitialCondition::ExactAtTime { t0, k_min_gen } => {
                if !(*t0 > 0.0) {
                    return Err(Error::invalid(format!("t0 = {t0} must be > 0")));
                }
                if self.x_lo != 0.0 || self.bc_left != 1.0 || self.bc_right != 0.0 {
                    return Err(Error::invalid(
                        "exact initial data needs domain starting at 0 and boundary values (1, 0)",
                    ));
                }
                if !(*k_min_gen >= 0.0 && *k_min_gen < self.model.k_max()) {
                    return Err(Error::invalid(format!(
                        "k_min_gen = {k_min_gen} must lie in [0, k_max)"
                    )));
                }
            }
            InitialCondition::PiecewiseLinear { x_knee } => {
                if !(self.x_lo < *x_knee && *x_knee < self.x_hi) {
                    return Err(Error::invalid(format!(
                        "x_knee = {x_knee} must lie inside ({}, {})",
                        self.x_lo, self.x_hi
                    )));
                }
            }
            InitialCondition::Custom { x, p } => {
                if x.len() != p.len() {
                    return Err(Error::LengthMismatch(x.len(), p.len()));
                }
                if x.len() < 2 {
                    return Err(Error::TooFewPoints(x.len()));
                }
                if x.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::invalid(
                        "custom x values must be strictly increasing",
                    ));
                }
                if x[0] > self.x_lo || x[x.len() - 1] < self.x_hi {
                    return Err(Error::invalid("custom table must cover the domain"));
                }
            }
        }
        Ok(())
    }

    /// Initial data at arbitrary points, without boundary values imposed.
    pub fn initial_profile(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        let gen = self.generator()?;
        Ok(xs
            .iter()
            .map(|&x| self.initial_value(x, gen.as_ref()))
            .collect())
    }

    /// Profile value at `x` before boundary values are imposed.
    fn initial_value(&self, x: f64, gen: Option<&ExactSolution>) -> f64 {
        match &self.initial_condition {
            InitialCondition::ExactAtTime { t0, .. } => {
                gen.expect("generator solved").value(x, *t0)
            }
            InitialCondition::PiecewiseLinear { x_knee } => {
                let s = (x - self.x_lo) / (x_knee - self.x_lo);
                (self.bc_left * (1.0 - s)).max(0.0)
            }
            InitialCondition::Custom { x: xs, p } => interpolate(xs, p, x),
        }
    }

    fn generator(&self) -> Result<Option<ExactSolution>> {
        match &self.initial_condition {
            InitialCondition::ExactAtTime { k_min_gen, .. } => Ok(Some(solve_front_constant(
                &self.model.with_k_min(*k_min_gen)?,
            )?)),
            _ => Ok(None),
        }
    }

    /// Location of the `p*` level in the initial data.
    pub fn initial_front(&self) -> Result<f64> {
        let p_star = self.model.p_star();
        match &self.initial_condition {
            InitialCondition::ExactAtTime { t0, .. } => {
                let gen = self.generator()?.expect("exact initial data");
                Ok(gen.shock_position(*t0))
            }
            InitialCondition::PiecewiseLinear { x_knee } => {
                Ok(self.x_lo + (x_knee - self.x_lo) * (1.0 - p_star / self.bc_left))
            }
            InitialCondition::Custom { x, p } => {
                let i = locate_shock_cell(p, p_star)?;
                let w = (p[i] - p_star) / (p[i] - p[i + 1]);
                Ok(x[i] + w * (x[i + 1] - x[i]))
            }
        }
    }

    /// Similarity solution for the simulated model, shifted in time so that
    /// its front coincides with the initial front at `t = 0`. Only exists
    /// for exact initial data.
    pub fn reference_solution(&self) -> Result<Option<ExactSolution>> {
        match self.initial_condition {
            InitialCondition::ExactAtTime { .. } => {
                let front = self.initial_front()?;
                Ok(Some(
                    solve_front_constant(&self.model)?.with_front_at(front),
                ))
            }
            _ => Ok(None),
        }
    }
}

fn interpolate(xs: &[f64], ps: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x);
    if k == 0 {
        return ps[0];
    }
    if k == xs.len() {
        return ps[xs.len() - 1];
    }
    let w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    ps[k - 1] + w * (ps[k] - ps[k - 1])
}

/// Samples the initial data on the grid nodes.
///
/// Boundary nodes take the Dirichlet values. The front position is the `p*`
/// level of the initial data and the shock index is the last node at or
/// above `p*`.
pub fn build_initial_condition(spec: &ProblemSpec, grid: &Grid) -> Result<State> {
    spec.validate()?;
    if (grid.x_lo() - spec.x_lo).abs() > 1e-14 || (grid.x_hi() - spec.x_hi).abs() > 1e-14 {
        return Err(Error::invalid("grid does not cover the problem domain"));
    }
    let gen = spec.generator()?;
    let mut p: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&x| spec.initial_value(x, gen.as_ref()))
        .collect();
    let last = p.len() - 1;
    p[0] = spec.bc_left;
    p[last] = spec.bc_right;
    if let Some(index) = p.windows(2).position(|w| w[1] > w[0] + 1e-12) {
        return Err(Error::NonMonotone {
            index,
            amount: p[index + 1] - p[index],
        });
    }
    let shock_index = locate_shock_cell(&p, spec.model.p_star())?;
    let xi = spec.initial_front()?;
    Ok(State {
        p,
        t: 0.0,
        xi,
        shock_index,
    })
}
