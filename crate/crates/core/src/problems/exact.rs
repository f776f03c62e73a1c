//! Closed-form and implicit exact solutions of the smooth tests.

use std::f64::consts::PI;

use crate::eos::PrimitiveState;
use crate::error::{Error, Result};

/// Translating density wave on `[0, 2]`.
pub fn exact_accuracy1(x: f64, t: f64) -> PrimitiveState {
    PrimitiveState::new_1d(1.0 + 0.2 * (PI * (x - t)).sin(), 1.0, 1.0)
}

/// Diagonal density wave on `[0, 2]^2`.
pub fn exact_accuracy_2d(x: f64, y: f64, t: f64) -> PrimitiveState {
    PrimitiveState::new(1.0 + 0.2 * (PI * (x + y - 2.0 * t)).sin(), 1.0, 1.0, 1.0)
}

/// Root of `J = sin(pi (x - J t))`, the Burgers solution with data `sin(pi x)`.
///
/// Newton steps are kept inside a shrinking bracket of `[-1, 1]`; the root is
/// unique while `pi t < 1`.
pub fn solve_burgers_characteristic(x: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok((PI * x).sin());
    }
    if !(t > 0.0) || PI * t >= 1.0 {
        return Err(Error::NoConvergence(format!("burgers characteristic at t = {t} is past shock formation")));
    }
    // g is strictly increasing in J for pi t < 1
    let g = |j: f64| j - (PI * (x - j * t)).sin();
    let dg = |j: f64| 1.0 + PI * t * (PI * (x - j * t)).cos();
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    let mut j = (PI * x).sin();
    for _ in 0..200 {
        let gj = g(j);
        if gj == 0.0 {
            return Ok(j);
        }
        if gj < 0.0 {
            lo = j;
        } else {
            hi = j;
        }
        let mut next = j - gj / dg(j);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - j).abs() <= 1e-15 * (1.0 + j.abs()) || hi - lo <= 1e-15 {
            return Ok(next);
        }
        j = next;
    }
    Err(Error::NoConvergence(format!("burgers characteristic at x = {x}, t = {t}")))
}

/// Isentropic gamma = 3 flow with `J+ = 2`, `S = 1` and `J-` from Burgers.
pub fn exact_accuracy2(x: f64, t: f64) -> Result<PrimitiveState> {
    let jm = solve_burgers_characteristic(x, t)?;
    let u = 0.5 * (2.0 + jm);
    let c = 0.5 * (2.0 - jm);
    let rho = c / 3f64.sqrt();
    Ok(PrimitiveState::new_1d(rho, u, rho * rho * rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy1_values() {
        assert_eq!(exact_accuracy1(0.0, 0.0).rho, 1.0);
        assert!((exact_accuracy1(0.5, 0.0).rho - 1.2).abs() < 1e-15);
        let a = exact_accuracy1(0.3, 0.7).rho;
        assert!((exact_accuracy1(2.3, 0.7).rho - a).abs() < 1e-14);
        assert!((exact_accuracy1(0.3, 2.7).rho - a).abs() < 1e-14);
    }

    #[test]
    fn accuracy2_initial_data() {
        for &x in &[-0.9, -0.3, 0.0, 0.25, 0.6] {
            let w = exact_accuracy2(x, 0.0).unwrap();
            let s = (PI * x).sin();
            assert!((w.rho - (1.0 - 0.5 * s) / 3f64.sqrt()).abs() < 1e-15);
            assert!((w.u - (1.0 + 0.5 * s)).abs() < 1e-15);
            assert!((w.p - w.rho.powi(3)).abs() < 1e-15);
        }
    }

    #[test]
    fn accuracy2_fixed_points() {
        for &x in &[-1.0, 0.0, 1.0] {
            let w = exact_accuracy2(x, 0.2).unwrap();
            assert!((w.u - 1.0).abs() < 1e-14);
            assert!((w.rho - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn accuracy2_residual_small() {
        for &(x, t) in &[(0.3, 0.2), (-0.7, 0.1), (0.95, 0.25)] {
            let j = solve_burgers_characteristic(x, t).unwrap();
            assert!((j - (PI * (x - j * t)).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn past_breaking_time_fails() {
        assert!(matches!(exact_accuracy2(0.2, 0.4), Err(Error::NoConvergence(_))));
    }
}
