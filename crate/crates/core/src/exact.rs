//! Similarity solution of the one-phase / two-phase Stefan problem on the
//! half line with data `p(0) = 1`, `p(∞) = 0`.
//!
//! Left of the front `x*(t) = α√t` the solution is
//! `p1 = 1 − c1·erf(x / (2√(k_max t)))`; right of it
//! `p2 = p*·erfc(x / (2√(k_min t))) / erfc(z2)`, which vanishes when
//! `k_min = 0`. The constant `z1 = α / (2√k_max)` solves flux continuity at
//! the front.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::CoefficientModel;
use crate::special::{erf, erfcx};

const Z_LO: f64 = 1e-6;
const Z_HI: f64 = 5.0;
const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    z1: f64,
    alpha: f64,
    c1: f64,
    c2: f64,
    model: CoefficientModel,
    t_offset: f64,
}

/// Flux-continuity residual, increasing in `z`.
fn front_equation(z: f64, model: &CoefficientModel) -> f64 {
    let ps = model.p_star();
    let lhs = ps * erf(z) * z * (z * z).exp();
    let rhs = if model.k_min() == 0.0 {
        (1.0 - ps) / PI.sqrt()
    } else {
        let z2 = z * (model.k_max() / model.k_min()).sqrt();
        (1.0 - ps) * z2 * erfcx(z2)
    };
    lhs - rhs
}

/// Solves for the front constant by bisection on `[1e-6, 5]`.
///
/// Requires `0 < p* < 1`, the normalized boundary data.
pub fn solve_front_constant(model: &CoefficientModel) -> Result<ExactSolution> {
    let ps = model.p_star();
    if !(ps > 0.0 && ps < 1.0) {
        return Err(Error::invalid(format!(
            "p_star = {ps} must lie strictly between the boundary values 1 and 0"
        )));
    }
    let (mut lo, mut hi) = (Z_LO, Z_HI);
    let f_lo = front_equation(lo, model);
    let f_hi = front_equation(hi, model);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Bracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if front_equation(mid, model) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z1 = if front_equation(lo, model).abs() <= front_equation(hi, model).abs() {
        lo
    } else {
        hi
    };
    let residual = front_equation(z1, model).abs();
    if residual > RESIDUAL_TOL {
        return Err(Error::NoConvergence { residual });
    }
    let c1 = (1.0 - ps) / erf(z1);
    let c2 = if model.k_min() == 0.0 {
        0.0
    } else {
        let z2 = z1 * (model.k_max() / model.k_min()).sqrt();
        // p* / erfc(z2), kept finite through the scaled form; only used as a
        // reported constant.
        ps * (z2 * z2).exp() / erfcx(z2)
    };
    Ok(ExactSolution {
        z1,
        alpha: 2.0 * model.k_max().sqrt() * z1,
        c1,
        c2,
        model: *model,
        t_offset: 0.0,
    })
}

impl ExactSolution {
    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// `p* / erfc(z2)`; zero when `k_min = 0`. Overflows to infinity for
    /// tiny `k_min`, which is harmless since values are computed in scaled form.
    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn model(&self) -> &CoefficientModel {
        &self.model
    }

    pub fn t_offset(&self) -> f64 {
        self.t_offset
    }

    /// Residual of the front equation at `z1`.
    pub fn residual(&self) -> f64 {
        front_equation(self.z1, &self.model).abs()
    }

    pub fn with_offset(mut self, t_offset: f64) -> Self {
        self.t_offset = t_offset;
        self
    }

    /// Shifts time so the front is at `x0` when `t = 0`.
    pub fn with_front_at(self, x0: f64) -> Self {
        let t_offset = (x0 / self.alpha).powi(2);
        self.with_offset(t_offset)
    }

    pub fn shock_position(&self, t: f64) -> f64 {
        self.alpha * (t + self.t_offset).max(0.0).sqrt()
    }

    pub fn front_speed(&self, t: f64) -> f64 {
        self.alpha / (2.0 * (t + self.t_offset).sqrt())
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        let tau = t + self.t_offset;
        let ps = self.model.p_star();
        if tau <= 0.0 {
            return if x <= 0.0 { 1.0 } else { 0.0 };
        }
        let front = self.alpha * tau.sqrt();
        if (x - front).abs() <= 1e-15 * front.max(1.0) {
            return ps;
        }
        if x < front {
            1.0 - self.c1 * erf(x / (2.0 * (self.model.k_max() * tau).sqrt()))
        } else if self.model.k_min() == 0.0 {
            0.0
        } else {
            let z2 = self.z1 * (self.model.k_max() / self.model.k_min()).sqrt();
            let w = x / (2.0 * (self.model.k_min() * tau).sqrt());
            // erfc(w)/erfc(z2) = exp(z2² − w²)·erfcx(w)/erfcx(z2)
            ps * ((z2 - w) * (z2 + w)).exp() * erfcx(w) / erfcx(z2)
        }
    }

    pub fn sample(&self, xs: &[f64], t: f64) -> Vec<f64> {
        xs.iter().map(|&x| self.value(x, t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // scipy.optimize.brentq on the k_min = 0 equation.
    const Z1_STEFAN: f64 = 0.6200626333135956;

    #[test]
    fn stefan_front_constant() {
        let sol = solve_front_constant(&CoefficientModel::stefan()).unwrap();
        assert_relative_eq!(sol.z1(), Z1_STEFAN, epsilon = 1e-12);
        assert_relative_eq!(sol.alpha(), 2.0 * Z1_STEFAN, epsilon = 1e-12);
        assert!(sol.residual() < 1e-12);
        assert_relative_eq!(sol.c1(), 0.5 / erf(Z1_STEFAN), epsilon = 1e-12);
        assert_eq!(sol.c2(), 0.0);
    }

    #[test]
    fn z1_independent_of_k_max_when_k_min_vanishes() {
        let a = solve_front_constant(&CoefficientModel::stefan()).unwrap();
        let b = solve_front_constant(&CoefficientModel::new(4.0, 0.0, 0.5).unwrap()).unwrap();
        assert_relative_eq!(a.z1(), b.z1(), epsilon = 1e-14);
        assert_relative_eq!(b.alpha(), 2.0 * a.alpha(), epsilon = 1e-14);
    }

    #[test]
    fn z1_tends_to_zero_as_p_star_tends_to_one() {
        let mut prev = f64::INFINITY;
        for ps in [0.9, 0.99, 0.999, 0.9999] {
            let z = solve_front_constant(&CoefficientModel::new(1.0, 0.0, ps).unwrap())
                .unwrap()
                .z1();
            assert!(z < prev);
            prev = z;
        }
        assert!(prev < 0.02);
    }

    #[test]
    fn p_star_outside_unit_interval_is_rejected() {
        let m = CoefficientModel::new(1.0, 0.0, 1.5).unwrap();
        assert!(solve_front_constant(&m).is_err());
    }

    #[test]
    fn values_at_boundary_front_and_far_field() {
        let sol = solve_front_constant(&CoefficientModel::stefan()).unwrap();
        for t in [0.01, 0.05, 0.3] {
            assert_eq!(sol.value(0.0, t), 1.0);
            assert_relative_eq!(sol.value(sol.shock_position(t), t), 0.5, epsilon = 1e-15);
            assert_eq!(sol.value(sol.shock_position(t) + 0.1, t), 0.0);
        }
    }

    #[test]
    fn shock_position_and_speed() {
        let sol = solve_front_constant(&CoefficientModel::stefan()).unwrap();
        assert_eq!(sol.shock_position(0.0), 0.0);
        assert_relative_eq!(sol.shock_position(0.05), 0.27730, epsilon = 1e-5);
        assert_relative_eq!(
            sol.shock_position(0.04) / sol.shock_position(0.01),
            2.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(sol.front_speed(0.04), 3.1003, epsilon = 1e-4);
        assert_relative_eq!(
            sol.front_speed(0.16),
            0.5 * sol.front_speed(0.04),
            epsilon = 1e-14
        );
    }

    #[test]
    fn offset_shifts_time() {
        let sol = solve_front_constant(&CoefficientModel::stefan())
            .unwrap()
            .with_front_at(0.2);
        assert_relative_eq!(sol.shock_position(0.0), 0.2, epsilon = 1e-15);
        assert_eq!(sol.shock_position(-sol.t_offset()), 0.0);
    }

    #[test]
    fn speed_integrates_to_displacement() {
        let sol = solve_front_constant(&CoefficientModel::stefan())
            .unwrap()
            .with_front_at(0.2);
        let (t_end, n) = (0.05, 20_000);
        let h = t_end / n as f64;
        // Simpson's rule
        let mut s = sol.front_speed(0.0) + sol.front_speed(t_end);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * sol.front_speed(k as f64 * h);
        }
        let integral = s * h / 3.0;
        assert_relative_eq!(
            integral,
            sol.shock_position(t_end) - sol.shock_position(0.0),
            epsilon = 1e-10
        );
    }

    #[test]
    fn self_similarity() {
        let m = CoefficientModel::new(1.0, 0.01, 0.5).unwrap();
        let sol = solve_front_constant(&m).unwrap();
        for x in [0.05, 0.1, 0.2, 0.3] {
            let a = sol.value(x, 0.01);
            let b = sol.value(2.0 * x, 0.04);
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn two_phase_solution_is_continuous_at_front() {
        let m = CoefficientModel::new(1.0, 0.01, 0.5).unwrap();
        let sol = solve_front_constant(&m).unwrap();
        assert!(sol.residual() < 1e-12);
        let t = 0.03;
        let xf = sol.shock_position(t);
        for d in [1e-4, 1e-6, 1e-8] {
            assert!((sol.value(xf - d, t) - 0.5).abs() < 10.0 * d);
            // the right branch is much steeper: k_min is small
            assert!((sol.value(xf + d, t) - 0.5).abs() < 1000.0 * d);
        }
    }

    #[test]
    fn tiny_k_min_does_not_overflow() {
        let m = CoefficientModel::new(1.0, 1e-8, 0.5).unwrap();
        let sol = solve_front_constant(&m).unwrap();
        assert_relative_eq!(sol.z1(), Z1_STEFAN, epsilon = 1e-3);
        let t = 0.05;
        let v = sol.value(sol.shock_position(t) + 1e-6, t);
        assert!(v.is_finite() && (0.0..=0.5).contains(&v));
    }
}
