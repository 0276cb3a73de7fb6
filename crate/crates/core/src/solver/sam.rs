//! Shock-based averaging: the cell pair around the front is split by an
//! auxiliary control volume centred on the front, whose value is `p*`.

use super::{check_finite, check_monotone, Grid, SchemeSpec, State, StepReport};
use crate::averaging::{sam_flux_left, sam_flux_right, two_point_flux};
use crate::error::{Error, Result};
use crate::model::CoefficientModel;
use crate::tracker::ShockTracker;

/// Sub-cell geometry for a front at distance `dx_star` right of node `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryGeometry {
    pub dx_star: f64,
    pub vol_i: f64,
    pub vol_ip1: f64,
    pub face_left: f64,
    pub face_right: f64,
}

impl AuxiliaryGeometry {
    pub fn new(x_i: f64, dx: f64, dx_star: f64) -> Result<Self> {
        if !(dx_star > 0.0 && dx_star < dx) {
            return Err(Error::invalid(format!(
                "dx_star = {dx_star} outside (0, {dx})"
            )));
        }
        let xi = x_i + dx_star;
        Ok(Self {
            dx_star,
            vol_i: 0.5 * (dx + dx_star),
            vol_ip1: dx - 0.5 * dx_star,
            face_left: x_i + 0.5 * dx_star,
            face_right: xi + 0.5 * (dx - dx_star),
        })
    }
}

/// How the front enters a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrontTreatment {
    /// Front strictly inside the interval: sub-cell fluxes and volumes.
    Split(AuxiliaryGeometry),
    /// Front within the guard window of a node, which is held at `p*`.
    Pinned(usize),
}

impl FrontTreatment {
    pub fn choose(grid: &Grid, i: usize, dx_star: f64, eps: f64) -> Result<Self> {
        let dx = grid.dx();
        if dx_star <= eps {
            Ok(FrontTreatment::Pinned(i))
        } else if dx - dx_star <= eps {
            Ok(FrontTreatment::Pinned(i + 1))
        } else {
            Ok(FrontTreatment::Split(AuxiliaryGeometry::new(
                grid.node(i),
                dx,
                dx_star,
            )?))
        }
    }
}

/// One shock-based step followed by a tracker update.
///
/// Faces left of the front use `k_max` and faces right of it `k_min`. When
/// the front is more than `ε = eps_factor·Δx` from both neighbours, the two
/// sub-cell fluxes `−k_max(p* − p_i)/Δx*` and `−k_min(p_{i+1} − p*)/(Δx − Δx*)`
/// replace the flux across the shock interval. Otherwise the node the front
/// sits on is held at `p*` and ordinary fluxes are used around it.
pub fn sam_step(
    state: &mut State,
    grid: &Grid,
    scheme: &SchemeSpec,
    model: &CoefficientModel,
    tracker: &mut ShockTracker,
    dt: f64,
    t_next: f64,
) -> Result<StepReport> {
    let n = grid.n_intervals();
    let dx = grid.dx();
    let ps = model.p_star();
    let i = tracker.shock_index();
    if i == 0 || i + 2 > n {
        return Err(Error::FrontOutOfDomain(tracker.xi()));
    }
    let eps = scheme.eps_factor * dx;
    let treatment = FrontTreatment::choose(grid, i, tracker.dx_star(i), eps)?;

    let mut remapped = 0.0;
    if let FrontTreatment::Pinned(j) = treatment {
        remapped = dx * (ps - state.p[j]);
        state.p[j] = ps;
    }
    let p = &state.p;

    let mut flux: Vec<f64> = (0..n)
        .map(|j| {
            let k = if j < i { model.k_max() } else { model.k_min() };
            two_point_flux(k, p[j], p[j + 1], dx)
        })
        .collect();
    let mut vol = vec![dx; n + 1];
    // Flux leaving node i and flux entering node i+1 differ only when split.
    let (out_i, in_ip1, absorbed, pinned) = match treatment {
        FrontTreatment::Pinned(j) => {
            if j == i + 1 {
                flux[i] = two_point_flux(model.k_max(), p[i], p[i + 1], dx);
            }
            (flux[i], flux[i], flux[j - 1] - flux[j], Some(j))
        }
        FrontTreatment::Split(geo) => {
            vol[i] = geo.vol_i;
            vol[i + 1] = geo.vol_ip1;
            let f_plus = sam_flux_left(p[i], geo.dx_star, model);
            let f_minus = sam_flux_right(p[i + 1], dx, geo.dx_star, model);
            (f_plus, f_minus, f_plus - f_minus, None)
        }
    };

    let mut next = p.clone();
    let mut mass_change = 0.0;
    let mut scale = 0.0;
    for j in 1..n {
        if Some(j) == pinned {
            continue;
        }
        let f_in = if j == i + 1 { in_ip1 } else { flux[j - 1] };
        let f_out = if j == i { out_i } else { flux[j] };
        next[j] = p[j] + dt / vol[j] * (f_in - f_out);
        mass_change += vol[j] * (next[j] - p[j]);
        scale += vol[j] * next[j].abs() + dt * f_out.abs();
    }
    check_finite(&next)?;
    check_monotone(&next)?;

    let report = StepReport {
        t: t_next,
        dt,
        mass_change,
        flux_in: flux[0],
        flux_out: flux[n - 1],
        absorbed,
        remapped,
        scale: scale + dt * (flux[0].abs() + absorbed.abs() + in_ip1.abs()),
    };

    let xi_old = tracker.xi();
    tracker.advance(p, i, model, dt, t_next)?;
    if tracker.xi() < xi_old - eps {
        return Err(Error::FrontReceded(xi_old - tracker.xi()));
    }
    if !(tracker.xi() > grid.x_lo() && tracker.xi() < grid.x_hi()) {
        return Err(Error::FrontOutOfDomain(tracker.xi()));
    }

    state.p = next;
    state.t = t_next;
    state.xi = tracker.xi();
    state.shock_index = tracker.shock_index();
    Ok(report)
}
