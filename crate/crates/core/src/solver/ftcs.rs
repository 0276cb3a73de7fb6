use super::{
    check_finite, check_monotone, locate_shock_cell, profile_crossing, Grid, SchemeKind,
    SchemeSpec, State, StepReport,
};
use crate::averaging::{arithmetic_average, harmonic_average, integral_average, two_point_flux};
use crate::error::{Error, Result};
use crate::model::CoefficientModel;

pub(crate) fn face_coefficient(
    kind: SchemeKind,
    p_l: f64,
    p_r: f64,
    model: &CoefficientModel,
) -> f64 {
    match kind {
        SchemeKind::Arithmetic => {
            arithmetic_average(model.coefficient(p_l), model.coefficient(p_r))
        }
        SchemeKind::Harmonic => harmonic_average(model.coefficient(p_l), model.coefficient(p_r)),
        SchemeKind::Integral => integral_average(p_l, p_r, model),
        _ => unreachable!("shock-based schemes use sam_step"),
    }
}

/// One FTCS step with the same face average at every face.
pub fn ftcs_step(
    state: &mut State,
    grid: &Grid,
    scheme: &SchemeSpec,
    model: &CoefficientModel,
    dt: f64,
    t_next: f64,
) -> Result<StepReport> {
    if scheme.kind.is_sam() {
        return Err(Error::invalid(format!(
            "{} is not an averaging scheme",
            scheme.kind
        )));
    }
    let dx = grid.dx();
    let p = &state.p;
    let n = p.len() - 1;
    let flux: Vec<f64> = (0..n)
        .map(|j| {
            let k = face_coefficient(scheme.kind, p[j], p[j + 1], model);
            two_point_flux(k, p[j], p[j + 1], dx)
        })
        .collect();

    let mut next = p.clone();
    let mut mass_change = 0.0;
    let mut scale = 0.0;
    for j in 1..n {
        next[j] = p[j] + dt / dx * (flux[j - 1] - flux[j]);
        mass_change += dx * (next[j] - p[j]);
        scale += dx * next[j].abs() + dt * flux[j].abs();
    }
    check_finite(&next)?;
    check_monotone(&next)?;

    let report = StepReport {
        t: t_next,
        dt,
        mass_change,
        flux_in: flux[0],
        flux_out: flux[n - 1],
        absorbed: 0.0,
        remapped: 0.0,
        scale: scale + dt * flux[0].abs(),
    };
    state.shock_index = locate_shock_cell(&next, model.p_star())?;
    state.xi = profile_crossing(grid.nodes(), &next, model.p_star())?;
    state.p = next;
    state.t = t_next;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn state(p: Vec<f64>) -> State {
        State {
            p,
            t: 0.0,
            xi: 0.0,
            shock_index: 0,
        }
    }

    #[test]
    fn five_node_arithmetic_golden() {
        let m = CoefficientModel::stefan();
        let grid = Grid::uniform(0.0, 1.0, 4).unwrap();
        let dx = grid.dx();
        let dt = dx * dx / 32.0;
        let mut s = state(vec![1.0, 0.9, 0.6, 0.1, 0.0]);
        ftcs_step(
            &mut s,
            &grid,
            &SchemeSpec::new(SchemeKind::Arithmetic),
            &m,
            dt,
            dt,
        )
        .unwrap();
        // faces: k = 1, 1, 0.5, 0
        let r = 1.0 / 32.0;
        assert_relative_eq!(s.p[1], 0.9 + r * (0.1 - 0.3), epsilon = 1e-15);
        assert_relative_eq!(s.p[2], 0.6 + r * (0.3 - 0.5 * 0.5), epsilon = 1e-15);
        assert_relative_eq!(s.p[3], 0.1 + r * (0.5 * 0.5), epsilon = 1e-15);
        assert_eq!(s.p[0], 1.0);
        assert_eq!(s.p[4], 0.0);
        assert_eq!(s.t, dt);
    }

    #[test]
    fn uniform_profile_is_stationary() {
        let m = CoefficientModel::stefan();
        let grid = Grid::uniform(0.0, 1.0, 8).unwrap();
        // Constant above p* except the last node so a crossing exists.
        let mut p = vec![0.8; 9];
        p[8] = 0.0;
        p[7] = 0.8;
        for kind in [
            SchemeKind::Arithmetic,
            SchemeKind::Harmonic,
            SchemeKind::Integral,
        ] {
            let mut s = state(p.clone());
            ftcs_step(&mut s, &grid, &SchemeSpec::new(kind), &m, 1e-4, 1e-4).unwrap();
            for j in 1..7 {
                assert_eq!(s.p[j], 0.8, "{kind}");
            }
        }
    }

    #[test]
    fn conservation_telescopes() {
        let m = CoefficientModel::stefan();
        let grid = Grid::uniform(0.0, 1.0, 10).unwrap();
        let p: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&x| (1.0 - 1.6 * x).max(0.0))
            .collect();
        for kind in [
            SchemeKind::Arithmetic,
            SchemeKind::Harmonic,
            SchemeKind::Integral,
        ] {
            let mut s = state(p.clone());
            let r = ftcs_step(&mut s, &grid, &SchemeSpec::new(kind), &m, 3e-4, 3e-4).unwrap();
            assert!(
                r.relative_residual() < 1e-14,
                "{kind}: {}",
                r.relative_residual()
            );
        }
    }

    #[test]
    fn rejects_shock_scheme() {
        let m = CoefficientModel::stefan();
        let grid = Grid::uniform(0.0, 1.0, 4).unwrap();
        let mut s = state(vec![1.0, 0.9, 0.6, 0.1, 0.0]);
        assert!(ftcs_step(
            &mut s,
            &grid,
            &SchemeSpec::new(SchemeKind::SamJump),
            &m,
            1e-4,
            1e-4
        )
        .is_err());
    }
}
