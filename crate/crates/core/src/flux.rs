//! Interface fluxes: physical Euler fluxes, HLL with two wave-speed estimates,
//! and the central high-order correction added to the low-order flux.

use serde::{Deserialize, Serialize};

use crate::eos::{ConservedState, GasModel, PrimitiveState};
use crate::error::{Error, Result};
use crate::lcd::{Direction, RoeState};

/// Signal speed bounds of an interface Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSpeedPair {
    pub left: f64,
    pub right: f64,
}

impl WaveSpeedPair {
    /// Maximum absolute signal speed.
    #[inline]
    pub fn max_abs(&self) -> f64 {
        self.left.abs().max(self.right.abs())
    }

    /// Smallest pair containing both.
    #[inline]
    pub fn union(&self, other: &WaveSpeedPair) -> WaveSpeedPair {
        WaveSpeedPair {
            left: self.left.min(other.left),
            right: self.right.max(other.right),
        }
    }
}

/// `f(q)` in the x-direction or `g(q)` in the y-direction.
pub fn physical_flux(q: &ConservedState, gas: &GasModel, dir: Direction) -> [f64; 4] {
    match dir {
        Direction::X => physical_flux_arr(&q.to_array::<4>(), gas),
        Direction::Y => {
            let a = q.to_array::<4>();
            let f = physical_flux_arr(&[a[0], a[2], a[1], a[3]], gas);
            [f[0], f[2], f[1], f[3]]
        }
    }
}

/// Normal flux of a conserved array whose second component is the normal momentum.
#[inline]
pub fn physical_flux_arr<const M: usize>(q: &[f64; M], gas: &GasModel) -> [f64; M] {
    let p = gas.pressure_of(q);
    let u = q[1] / q[0];
    let mut f = [0.0; M];
    f[0] = q[1];
    f[1] = q[1] * u + p;
    if M == 4 {
        f[2] = q[2] * u;
    }
    f[M - 1] = u * (q[M - 1] + p);
    f
}

/// Einfeldt's estimate: `sL = min(uL - cL, u_roe - c_roe)`, `sR = max(uR + cR, u_roe + c_roe)`.
#[inline]
pub fn einfeldt_speeds(
    left: &PrimitiveState,
    right: &PrimitiveState,
    roe: &RoeState,
    gas: &GasModel,
) -> WaveSpeedPair {
    let cl = gas.sound_speed(left);
    let cr = gas.sound_speed(right);
    WaveSpeedPair {
        left: (left.u - cl).min(roe.u - roe.c),
        right: (right.u + cr).max(roe.u + roe.c),
    }
}

/// Star-region pressure of the two-rarefaction approximation. Zero when the
/// data would generate vacuum.
pub fn two_rarefaction_pressure(left: &PrimitiveState, right: &PrimitiveState, gas: &GasModel) -> f64 {
    let g = gas.gamma();
    let z = (g - 1.0) / (2.0 * g);
    let cl = gas.sound_speed(left);
    let cr = gas.sound_speed(right);
    let num = cl + cr - 0.5 * (g - 1.0) * (right.u - left.u);
    if num <= 0.0 {
        return 0.0;
    }
    let den = cl * left.p.powf(-z) + cr * right.p.powf(-z);
    (num / den).powf(1.0 / z)
}

/// Wave speeds bounded with the two-rarefaction star pressure.
pub fn two_rarefaction_speeds(left: &PrimitiveState, right: &PrimitiveState, gas: &GasModel) -> WaveSpeedPair {
    let g = gas.gamma();
    let p_star = two_rarefaction_pressure(left, right, gas);
    let factor = |p: f64| {
        if p_star <= p {
            1.0
        } else {
            (1.0 + (g + 1.0) / (2.0 * g) * (p_star / p - 1.0)).sqrt()
        }
    };
    WaveSpeedPair {
        left: left.u - gas.sound_speed(left) * factor(left.p),
        right: right.u + gas.sound_speed(right) * factor(right.p),
    }
}

/// HLL flux from precomputed physical fluxes.
#[inline]
pub fn hll_flux_arr<const M: usize>(
    ql: &[f64; M],
    qr: &[f64; M],
    fl: &[f64; M],
    fr: &[f64; M],
    s: &WaveSpeedPair,
) -> Result<[f64; M]> {
    if s.left >= 0.0 {
        return Ok(*fl);
    }
    if s.right <= 0.0 {
        return Ok(*fr);
    }
    let width = s.right - s.left;
    if width < 1e-300 {
        return Err(Error::DegenerateSpeeds {
            s_left: s.left,
            s_right: s.right,
        });
    }
    let inv = 1.0 / width;
    let prod = s.left * s.right;
    let mut f = [0.0; M];
    for i in 0..M {
        f[i] = (s.right * fl[i] - s.left * fr[i] + prod * (qr[i] - ql[i])) * inv;
    }
    Ok(f)
}

pub fn hll_flux(
    ql: &ConservedState,
    qr: &ConservedState,
    s: &WaveSpeedPair,
    gas: &GasModel,
) -> Result<[f64; 4]> {
    let (a, b) = (ql.to_array::<4>(), qr.to_array::<4>());
    hll_flux_arr(&a, &b, &physical_flux_arr(&a, gas), &physical_flux_arr(&b, gas), s)
}

/// Coefficients of the central correction, outermost pair first:
/// `f_cor = sum_i c[i] * (f[j-r+1+i] + f[j+r-i])`.
pub fn correction_coefficients(r: usize) -> &'static [f64] {
    const R1: [f64; 0] = [];
    const R2: [f64; 2] = [-1.0 / 48.0, 1.0 / 48.0];
    const R3: [f64; 3] = [19.0 / 3840.0, -137.0 / 3840.0, 59.0 / 1920.0];
    const R4: [f64; 4] = [
        -81.0 / 71680.0,
        2279.0 / 215_040.0,
        -9859.0 / 215_040.0,
        7823.0 / 215_040.0,
    ];
    const R5: [f64; 5] = [
        5359.0 / 20_643_840.0,
        -60841.0 / 20_643_840.0,
        81491.0 / 5_160_960.0,
        -274_129.0 / 5_160_960.0,
        413_017.0 / 10_321_920.0,
    ];
    match r {
        1 => &R1,
        2 => &R2,
        3 => &R3,
        4 => &R4,
        5 => &R5,
        _ => panic!("flux correction defined for r = 1..=5, got {r}"),
    }
}

/// High-order correction at `j+1/2` from the `2r` point fluxes `f[j-r+1 ..= j+r]`.
pub fn flux_correction(window: &[f64], r: usize) -> f64 {
    assert_eq!(window.len(), 2 * r, "correction window must hold 2r values");
    let c = correction_coefficients(r);
    let n = window.len();
    c.iter()
        .enumerate()
        .map(|(i, ci)| ci * (window[i] + window[n - 1 - i]))
        .sum()
}

/// Vector form of [`flux_correction`] over a window of flux arrays.
#[inline]
pub fn flux_correction_arr<const M: usize>(window: &[[f64; M]], r: usize) -> [f64; M] {
    debug_assert_eq!(window.len(), 2 * r);
    let c = correction_coefficients(r);
    let n = window.len();
    let mut out = [0.0; M];
    for (i, ci) in c.iter().enumerate() {
        let (a, b) = (&window[i], &window[n - 1 - i]);
        for m in 0..M {
            out[m] += ci * (a[m] + b[m]);
        }
    }
    out
}
