use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weno::WenoOrder;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeControl {
    pub cfl: f64,
    pub t_end: f64,
    /// Coarsest mesh size `h0` for the accuracy-mode step scaling
    /// `(h/h0)^(k/3 - 1)`.
    pub accuracy_h0: Option<f64>,
}

impl TimeControl {
    pub fn new(cfl: f64, t_end: f64) -> Self {
        Self {
            cfl,
            t_end,
            accuracy_h0: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("CFL must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::Config(format!("end time must be non-negative, got {}", self.t_end)));
        }
        if let Some(h0) = self.accuracy_h0 {
            if !(h0 > 0.0) {
                return Err(Error::Config(format!("h0 must be positive, got {h0}")));
            }
        }
        Ok(())
    }
}

/// Time step from the largest cell rate `max(alpha/dx [+ beta/dy])`, with
/// the accuracy-mode factor when `tc.accuracy_h0` is set.
pub fn select_dt(max_rate: f64, h: f64, order: WenoOrder, tc: &TimeControl) -> f64 {
    let mut dt = tc.cfl / max_rate;
    if let Some(h0) = tc.accuracy_h0 {
        dt *= (h / h0).powf(order.k() as f64 / 3.0 - 1.0);
    }
    dt
}

/// Clips `dt` so the step lands exactly on `t_end`.
pub fn clip_to_end(t: f64, dt: f64, t_end: f64) -> f64 {
    let remaining = t_end - t;
    if dt >= remaining * (1.0 - 1e-12) {
        remaining
    } else {
        dt
    }
}

/// One Shu-Osher SSP-RK3 step of `u' = L(u, t)` on a flat state vector.
/// `rhs(u, t, out)` writes `L(u, t)`.
pub fn ssprk3_step<F>(u: &mut [f64], t: f64, dt: f64, mut rhs: F) -> Result<()>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    let n = u.len();
    let u0 = u.to_vec();
    let mut l = vec![0.0; n];
    let mut stage = u.to_vec();
    rhs(&stage, t, &mut l)?;
    for i in 0..n {
        stage[i] = u0[i] + dt * l[i];
    }
    rhs(&stage, t + dt, &mut l)?;
    for i in 0..n {
        stage[i] = 0.75 * u0[i] + 0.25 * (stage[i] + dt * l[i]);
    }
    rhs(&stage, t + 0.5 * dt, &mut l)?;
    for i in 0..n {
        u[i] = u0[i] / 3.0 + 2.0 / 3.0 * (stage[i] + dt * l[i]);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dt_examples() {
        let tc = TimeControl::new(0.5, 1.0);
        assert_relative_eq!(select_dt(1.0 / 0.1, 0.1, WenoOrder::Five, &tc), 0.05, epsilon = 1e-16);
        assert_relative_eq!(select_dt(10.0 + 10.0, 0.1, WenoOrder::Five, &tc), 0.025, epsilon = 1e-16);
        let acc = TimeControl {
            accuracy_h0: Some(0.2),
            ..tc
        };
        let base = select_dt(10.0, 0.1, WenoOrder::Three, &acc);
        assert_relative_eq!(base, 0.05, epsilon = 1e-16);
        assert_relative_eq!(select_dt(10.0, 0.1, WenoOrder::Nine, &acc), 0.05 * 0.25, epsilon = 1e-16);
    }

    #[test]
    fn clipping() {
        assert_eq!(clip_to_end(0.9, 0.3, 1.0), 1.0 - 0.9);
        assert_eq!(clip_to_end(0.0, 0.3, 1.0), 0.3);
    }

    #[test]
    fn linear_rhs_matches_cubic_taylor() {
        let lam = -0.7;
        let dt = 0.3;
        let mut u = [1.0];
        ssprk3_step(&mut u, 0.0, dt, |x, _, out| {
            out[0] = lam * x[0];
            Ok(())
        })
        .unwrap();
        let z = lam * dt;
        assert_relative_eq!(u[0], 1.0 + z + z * z / 2.0 + z * z * z / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_rhs_is_identity() {
        let mut u = [1.5, -2.0];
        ssprk3_step(&mut u, 0.0, 0.1, |_, _, out| {
            out.fill(0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(u, [1.5, -2.0]);
    }

    #[test]
    fn stage_times() {
        let mut seen = Vec::new();
        let mut u = [0.0];
        ssprk3_step(&mut u, 1.0, 0.2, |_, t, out| {
            seen.push(t);
            out[0] = 0.0;
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![1.0, 1.2, 1.1]);
    }
}
