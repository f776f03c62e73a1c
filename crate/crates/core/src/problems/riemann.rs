//! Exact solution of the 1D Riemann problem for a gamma-law gas.

use crate::eos::{GasModel, PrimitiveState};
use crate::error::{Error, Result};

/// Star-region data of a Riemann problem; sample with [`ExactRiemann::sample`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRiemann {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
    gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
    /// The data generate vacuum between the two rarefactions.
    pub vacuum: bool,
}

struct Side {
    rho: f64,
    p: f64,
    c: f64,
}

impl Side {
    /// Toro's `f_K(p)` and its derivative.
    fn f(&self, p: f64, g: f64) -> (f64, f64) {
        if p > self.p {
            let a = 2.0 / ((g + 1.0) * self.rho);
            let b = (g - 1.0) / (g + 1.0) * self.p;
            let s = (a / (p + b)).sqrt();
            ((p - self.p) * s, s * (1.0 - 0.5 * (p - self.p) / (p + b)))
        } else {
            let z = (g - 1.0) / (2.0 * g);
            let ratio = p / self.p;
            (
                2.0 * self.c / (g - 1.0) * (ratio.powf(z) - 1.0),
                ratio.powf(-(g + 1.0) / (2.0 * g)) / (self.rho * self.c),
            )
        }
    }
}

impl ExactRiemann {
    pub fn new(left: PrimitiveState, right: PrimitiveState, gas: &GasModel) -> Result<Self> {
        let g = gas.gamma();
        if !left.is_admissible() || !right.is_admissible() {
            return Err(Error::Config("Riemann data must have positive density and pressure".into()));
        }
        let l = Side {
            rho: left.rho,
            p: left.p,
            c: gas.sound_speed(&left),
        };
        let r = Side {
            rho: right.rho,
            p: right.p,
            c: gas.sound_speed(&right),
        };
        let du = right.u - left.u;
        let mut out = Self {
            left,
            right,
            gamma: g,
            p_star: 0.0,
            u_star: 0.5 * (left.u + right.u),
            vacuum: false,
        };
        // Critical data (vacuum at a single point) count as vacuum.
        let gap = 2.0 * (l.c + r.c) / (g - 1.0);
        if gap <= du + 1e-12 * gap {
            out.vacuum = true;
            return Ok(out);
        }
        let pf = |p: f64| {
            let (fl, dl) = l.f(p, g);
            let (fr, dr) = r.f(p, g);
            (fl + fr + du, dl + dr)
        };
        // Two-rarefaction guess, then Newton safeguarded by a bracket.
        let z = (g - 1.0) / (2.0 * g);
        let guess = ((l.c + r.c - 0.5 * (g - 1.0) * du) / (l.c / l.p.powf(z) + r.c / r.p.powf(z))).powf(1.0 / z);
        let mut lo = 0.0;
        let mut hi = left.p.max(right.p).max(guess);
        while pf(hi).0 < 0.0 {
            hi *= 2.0;
        }
        let mut p = guess.clamp(1e-300, hi);
        let mut converged = false;
        for _ in 0..200 {
            let (f, df) = pf(p);
            if f < 0.0 {
                lo = p;
            } else {
                hi = p;
            }
            let mut next = p - f / df;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < 1e-12 || hi - lo <= 1e-15 * hi {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence("exact Riemann star pressure".into()));
        }
        out.p_star = p;
        out.u_star = 0.5 * (left.u + right.u) + 0.5 * (r.f(p, g).0 - l.f(p, g).0);
        Ok(out)
    }

    /// Solution at `xi = x/t`. Vacuum points carry zero density and pressure.
    pub fn sample(&self, xi: f64) -> PrimitiveState {
        let g = self.gamma;
        let (l, r) = (self.left, self.right);
        let cl = (g * l.p / l.rho).sqrt();
        let cr = (g * r.p / r.rho).sqrt();
        let g1 = (g - 1.0) / (2.0 * g);
        let g6 = (g - 1.0) / (g + 1.0);
        let fan_left = |xi: f64| {
            let c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (l.u - xi));
            let u = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * l.u + xi);
            let rho = l.rho * (c / cl).powf(2.0 / (g - 1.0));
            PrimitiveState::new(rho, u, l.v, l.p * (c / cl).powf(2.0 * g / (g - 1.0)))
        };
        let fan_right = |xi: f64| {
            let c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (r.u - xi));
            let u = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * r.u + xi);
            let rho = r.rho * (c / cr).powf(2.0 / (g - 1.0));
            PrimitiveState::new(rho, u, r.v, r.p * (c / cr).powf(2.0 * g / (g - 1.0)))
        };
        if self.vacuum {
            let tail_l = l.u + 2.0 * cl / (g - 1.0);
            let tail_r = r.u - 2.0 * cr / (g - 1.0);
            return if xi <= l.u - cl {
                l
            } else if xi < tail_l {
                fan_left(xi)
            } else if xi <= tail_r {
                PrimitiveState::new(0.0, 0.5 * (tail_l + tail_r), 0.0, 0.0)
            } else if xi < r.u + cr {
                fan_right(xi)
            } else {
                r
            };
        }
        let (ps, us) = (self.p_star, self.u_star);
        if xi <= us {
            let ratio = ps / l.p;
            if ps > l.p {
                let s = l.u - cl * ((g + 1.0) / (2.0 * g) * ratio + g1).sqrt();
                if xi <= s {
                    l
                } else {
                    PrimitiveState::new(l.rho * (ratio + g6) / (g6 * ratio + 1.0), us, l.v, ps)
                }
            } else {
                let head = l.u - cl;
                let tail = us - cl * ratio.powf(g1);
                if xi <= head {
                    l
                } else if xi > tail {
                    PrimitiveState::new(l.rho * ratio.powf(1.0 / g), us, l.v, ps)
                } else {
                    fan_left(xi)
                }
            }
        } else {
            let ratio = ps / r.p;
            if ps > r.p {
                let s = r.u + cr * ((g + 1.0) / (2.0 * g) * ratio + g1).sqrt();
                if xi >= s {
                    r
                } else {
                    PrimitiveState::new(r.rho * (ratio + g6) / (g6 * ratio + 1.0), us, r.v, ps)
                }
            } else {
                let head = r.u + cr;
                let tail = us + cr * ratio.powf(g1);
                if xi >= head {
                    r
                } else if xi < tail {
                    PrimitiveState::new(r.rho * ratio.powf(1.0 / g), us, r.v, ps)
                } else {
                    fan_right(xi)
                }
            }
        }
    }
}

/// Samples the exact solution at `x/t` (the discontinuity sits at `x = 0`).
/// The flag reports whether vacuum forms.
pub fn exact_riemann(
    left: &PrimitiveState,
    right: &PrimitiveState,
    gas: &GasModel,
    xi: f64,
) -> Result<(PrimitiveState, bool)> {
    let rp = ExactRiemann::new(*left, *right, gas)?;
    Ok((rp.sample(xi), rp.vacuum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn equal_states_are_constant() {
        let w = PrimitiveState::new_1d(1.3, 0.4, 2.0);
        let rp = ExactRiemann::new(w, w, &GasModel::air()).unwrap();
        assert_relative_eq!(rp.p_star, 2.0, max_relative = 1e-12);
        assert_relative_eq!(rp.u_star, 0.4, epsilon = 1e-12);
        for xi in [-3.0, -0.5, 0.0, 0.39, 0.41, 5.0] {
            let s = rp.sample(xi);
            assert_relative_eq!(s.rho, 1.3, max_relative = 1e-12);
            assert_relative_eq!(s.p, 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn sod_star_state() {
        let rp = ExactRiemann::new(
            PrimitiveState::new_1d(1.0, 0.0, 1.0),
            PrimitiveState::new_1d(0.125, 0.0, 0.1),
            &GasModel::air(),
        )
        .unwrap();
        assert!((rp.p_star - 0.30313).abs() < 1e-5);
        assert!((rp.u_star - 0.92745).abs() < 1e-5);
        assert!(!rp.vacuum);
    }

    #[test]
    fn critical_double_rarefaction_touches_vacuum() {
        let rp = ExactRiemann::new(
            PrimitiveState::new_1d(7.0, -1.0, 0.2),
            PrimitiveState::new_1d(7.0, 1.0, 0.2),
            &GasModel::air(),
        )
        .unwrap();
        // 2 cL/(g-1) + 2 cR/(g-1) = 2 = uR - uL
        assert!(rp.vacuum);
        assert!(rp.sample(0.0).rho < 1e-12);
        assert!(rp.sample(-0.1).rho > 0.0);
        assert_eq!(rp.sample(-2.0).rho, 7.0);
    }
}
