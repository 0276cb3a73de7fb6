//! Face coefficients for the two-point flux `F = −k_face·(p_R − p_L)/Δx`.

use crate::error::{Error, Result};
use crate::model::CoefficientModel;

pub fn arithmetic_average(k_l: f64, k_r: f64) -> f64 {
    0.5 * (k_l + k_r)
}

/// Harmonic mean, taken as 0 when both inputs vanish.
pub fn harmonic_average(k_l: f64, k_r: f64) -> f64 {
    let s = k_l + k_r;
    if s == 0.0 {
        0.0
    } else {
        2.0 * k_l * k_r / s
    }
}

/// `(Φ(p_R) − Φ(p_L))/(p_R − p_L)`, or `k(p_L)` when the values coincide.
pub fn integral_average(p_l: f64, p_r: f64, model: &CoefficientModel) -> f64 {
    if p_l == p_r {
        return model.coefficient(p_l);
    }
    let ps = model.p_star();
    // Same side of p*: exact constant, no cancellation.
    if (p_l >= ps) == (p_r >= ps) {
        return model.coefficient(p_l);
    }
    (model.phi(p_r) - model.phi(p_l)) / (p_r - p_l)
}

pub fn two_point_flux(k_face: f64, p_l: f64, p_r: f64, dx: f64) -> f64 {
    -k_face * (p_r - p_l) / dx
}

/// Shock-cell face coefficients `(k⁺, k⁻)` that turn the two-point flux with
/// spacing `dx` into the sub-cell fluxes on either side of the front at
/// distance `dx_star` from the left node.
pub fn sam_face_coefficients(
    p_l: f64,
    p_r: f64,
    dx: f64,
    dx_star: f64,
    model: &CoefficientModel,
) -> Result<(f64, f64)> {
    if !(dx_star > 0.0 && dx_star < dx) {
        return Err(Error::invalid(format!(
            "dx_star = {dx_star} outside (0, {dx})"
        )));
    }
    if p_l == p_r {
        return Err(Error::DegenerateJump(0.0));
    }
    let ps = model.p_star();
    let k_plus = model.k_max() * (dx / dx_star) * (ps - p_l) / (p_r - p_l);
    let k_minus = model.k_min() * (dx / (dx - dx_star)) * (p_r - ps) / (p_r - p_l);
    Ok((k_plus, k_minus))
}

/// Flux from the left node into the front, `−k_max(p* − p_i)/Δx*`.
pub fn sam_flux_left(p_i: f64, dx_star: f64, model: &CoefficientModel) -> f64 {
    -model.k_max() * (model.p_star() - p_i) / dx_star
}

/// Flux from the front into the right node, `−k_min(p_{i+1} − p*)/(Δx − Δx*)`.
pub fn sam_flux_right(p_ip1: f64, dx: f64, dx_star: f64, model: &CoefficientModel) -> f64 {
    -model.k_min() * (p_ip1 - model.p_star()) / (dx - dx_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_examples() {
        assert_eq!(arithmetic_average(1.0, 0.0), 0.5);
        assert_eq!(arithmetic_average(0.3, 0.3), 0.3);
        assert_relative_eq!(arithmetic_average(0.01, 1.0), 0.505);
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_average(1.0, 0.0), 0.0);
        assert_eq!(harmonic_average(0.0, 0.0), 0.0);
        assert_relative_eq!(harmonic_average(0.3, 0.3), 0.3);
        assert_relative_eq!(
            harmonic_average(0.01, 1.0),
            0.0198019801980198,
            epsilon = 1e-15
        );
    }

    #[test]
    fn integral_examples() {
        let m = CoefficientModel::stefan();
        assert_relative_eq!(integral_average(1.0, 0.0, &m), 0.5);
        assert_relative_eq!(integral_average(0.6, 0.0, &m), 1.0 / 6.0, epsilon = 1e-15);
        assert_eq!(integral_average(0.9, 0.8, &m), 1.0);
        assert_eq!(integral_average(0.3, 0.1, &m), 0.0);
        assert_eq!(integral_average(0.5, 0.5, &m), 1.0);
    }

    #[test]
    fn sam_coefficient_examples() {
        let m = CoefficientModel::stefan();
        let dx = 0.04;
        let (kp, km) = sam_face_coefficients(1.0, 0.0, dx, dx / 2.0, &m).unwrap();
        assert_relative_eq!(kp, 1.0, epsilon = 1e-15);
        assert_eq!(km, 0.0);
        assert!(sam_face_coefficients(1.0, 0.0, dx, 0.0, &m).is_err());
        assert!(sam_face_coefficients(1.0, 0.0, dx, dx, &m).is_err());
    }

    #[test]
    fn sam_flux_example() {
        let m = CoefficientModel::stefan();
        assert_relative_eq!(sam_flux_left(0.6, 0.02, &m), 5.0, epsilon = 1e-14);
        assert_eq!(sam_flux_right(0.3, 0.04, 0.01, &m), 0.0);
    }

    #[test]
    fn integral_average_grows_as_front_advances() {
        // While the front crosses [x_i, x_{i+1}] the node behind it rises
        // away from p* and the node ahead stays empty.
        let m = CoefficientModel::stefan();
        let mut prev = integral_average(0.5, 0.0, &m);
        assert_eq!(prev, 0.0);
        for k in 1..=50 {
            let p_l = 0.5 + 0.5 * k as f64 / 50.0;
            let v = integral_average(p_l, 0.0, &m);
            assert_relative_eq!(v, (p_l - 0.5) / p_l, epsilon = 1e-15);
            assert!(v > prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn harmonic_below_arithmetic(a in 0.0f64..10.0, b in 0.0f64..10.0) {
            prop_assert!(harmonic_average(a, b) <= arithmetic_average(a, b) + 1e-15);
            prop_assert_eq!(harmonic_average(a, b), harmonic_average(b, a));
            prop_assert_eq!(arithmetic_average(a, b), arithmetic_average(b, a));
        }

        #[test]
        fn integral_average_within_bounds(pl in 0.0f64..1.0, pr in 0.0f64..1.0, k_min in 0.0f64..0.5) {
            let m = CoefficientModel::new(1.0, k_min, 0.5).unwrap();
            let k = integral_average(pl, pr, &m);
            prop_assert!(k >= k_min - 1e-14 && k <= 1.0 + 1e-14);
        }

        #[test]
        fn sam_coefficients_reproduce_sub_cell_fluxes(
            pl in 0.5f64..1.0, pr in 0.0f64..0.5, y in 0.01f64..0.99, k_min in 0.0f64..0.5
        ) {
            prop_assume!(pl > pr);
            let m = CoefficientModel::new(1.0, k_min, 0.5).unwrap();
            let dx = 0.02;
            let (kp, km) = sam_face_coefficients(pl, pr, dx, y * dx, &m).unwrap();
            let f_plus = sam_flux_left(pl, y * dx, &m);
            let f_minus = sam_flux_right(pr, dx, y * dx, &m);
            prop_assert!((two_point_flux(kp, pl, pr, dx) - f_plus).abs() <= 1e-12 * f_plus.abs().max(1.0));
            prop_assert!((two_point_flux(km, pl, pr, dx) - f_minus).abs() <= 1e-12 * f_minus.abs().max(1.0));
        }
    }
}
