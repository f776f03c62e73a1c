//! WENO-JS interpolation of point values to cell interfaces, orders 3 to 9.
//!
//! A window for order `k = 2r - 1` holds the `2r - 1` values
//! `u[j-r+1], ..., u[j+r-1]` and produces the left-biased interface value
//! `u-[j+1/2]`. Substencil `s` covers offsets `-s ..= r-1-s` relative to `j`.
//!
//! The smoothness indicators are the classical Jiang-Shu quadratic forms,
//! which coincide with the sum-of-squares form of the derivative integral
//! (see [`sos_oracle_beta`]). For `k = 5` the second square in `beta_1` is
//! `(u[j-1] - u[j+1])^2`; a printed variant with `u[j+2]` is not consistent
//! with the derivative integral and is not used.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default regularisation in the nonlinear weights.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum WenoOrder {
    Three,
    Five,
    Seven,
    Nine,
}

impl WenoOrder {
    pub const ALL: [WenoOrder; 4] = [
        WenoOrder::Three,
        WenoOrder::Five,
        WenoOrder::Seven,
        WenoOrder::Nine,
    ];

    pub fn from_k(k: u32) -> Result<Self> {
        match k {
            3 => Ok(Self::Three),
            5 => Ok(Self::Five),
            7 => Ok(Self::Seven),
            9 => Ok(Self::Nine),
            _ => Err(Error::Config(format!("order must be 3, 5, 7 or 9, got {k}"))),
        }
    }

    /// Formal order `k`.
    #[inline]
    pub const fn k(self) -> usize {
        match self {
            Self::Three => 3,
            Self::Five => 5,
            Self::Seven => 7,
            Self::Nine => 9,
        }
    }

    /// Substencil width `r = (k + 1) / 2`.
    #[inline]
    pub const fn r(self) -> usize {
        (self.k() + 1) / 2
    }

    #[inline]
    pub const fn window_len(self) -> usize {
        2 * self.r() - 1
    }
}

impl TryFrom<u32> for WenoOrder {
    type Error = Error;
    fn try_from(k: u32) -> Result<Self> {
        Self::from_k(k)
    }
}

impl From<WenoOrder> for u32 {
    fn from(o: WenoOrder) -> u32 {
        o.k() as u32
    }
}

impl std::fmt::Display for WenoOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.k())
    }
}

/// Linear weights and substencil interpolation coefficients for one order.
///
/// `substencil[s][i]` multiplies `u[j - s + i]`.
#[derive(Debug, Clone, Copy)]
pub struct WenoTables {
    pub linear_weights: &'static [f64],
    pub substencil: &'static [&'static [f64]],
}

const D3: [f64; 2] = [3.0 / 4.0, 1.0 / 4.0];
const C3: [&[f64]; 2] = [&[1.0 / 2.0, 1.0 / 2.0], &[-1.0 / 2.0, 3.0 / 2.0]];

const D5: [f64; 3] = [5.0 / 16.0, 5.0 / 8.0, 1.0 / 16.0];
const C5: [&[f64]; 3] = [
    &[3.0 / 8.0, 3.0 / 4.0, -1.0 / 8.0],
    &[-1.0 / 8.0, 3.0 / 4.0, 3.0 / 8.0],
    &[3.0 / 8.0, -5.0 / 4.0, 15.0 / 8.0],
];

const D7: [f64; 4] = [7.0 / 64.0, 35.0 / 64.0, 21.0 / 64.0, 1.0 / 64.0];
const C7: [&[f64]; 4] = [
    &[5.0 / 16.0, 15.0 / 16.0, -5.0 / 16.0, 1.0 / 16.0],
    &[-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0],
    &[1.0 / 16.0, -5.0 / 16.0, 15.0 / 16.0, 5.0 / 16.0],
    &[-5.0 / 16.0, 21.0 / 16.0, -35.0 / 16.0, 35.0 / 16.0],
];

const D9: [f64; 5] = [9.0 / 256.0, 21.0 / 64.0, 63.0 / 128.0, 9.0 / 64.0, 1.0 / 256.0];
const C9: [&[f64]; 5] = [
    &[35.0 / 128.0, 35.0 / 32.0, -35.0 / 64.0, 7.0 / 32.0, -5.0 / 128.0],
    &[-5.0 / 128.0, 15.0 / 32.0, 45.0 / 64.0, -5.0 / 32.0, 3.0 / 128.0],
    &[3.0 / 128.0, -5.0 / 32.0, 45.0 / 64.0, 15.0 / 32.0, -5.0 / 128.0],
    &[-5.0 / 128.0, 7.0 / 32.0, -35.0 / 64.0, 35.0 / 32.0, 35.0 / 128.0],
    &[35.0 / 128.0, -45.0 / 32.0, 189.0 / 64.0, -105.0 / 32.0, 315.0 / 128.0],
];

impl WenoTables {
    pub fn for_order(order: WenoOrder) -> Self {
        match order {
            WenoOrder::Three => Self {
                linear_weights: &D3,
                substencil: &C3,
            },
            WenoOrder::Five => Self {
                linear_weights: &D5,
                substencil: &C5,
            },
            WenoOrder::Seven => Self {
                linear_weights: &D7,
                substencil: &C7,
            },
            WenoOrder::Nine => Self {
                linear_weights: &D9,
                substencil: &C9,
            },
        }
    }
}

#[inline(always)]
fn sq(x: f64) -> f64 {
    x * x
}

/// Smoothness indicators of all substencils, in substencil order.
pub fn smoothness_indicators(window: &[f64], order: WenoOrder) -> Vec<f64> {
    check_len(window, order);
    let mut beta = [0.0; 5];
    fill_beta(window, order, &mut beta);
    beta[..order.r()].to_vec()
}

#[inline]
fn fill_beta(w: &[f64], order: WenoOrder, beta: &mut [f64; 5]) {
    match order {
        WenoOrder::Three => {
            let (um1, u0, up1) = (w[0], w[1], w[2]);
            beta[0] = sq(u0 - up1);
            beta[1] = sq(um1 - u0);
        }
        WenoOrder::Five => {
            let (um2, um1, u0, up1, up2) = (w[0], w[1], w[2], w[3], w[4]);
            const A: f64 = 13.0 / 12.0;
            beta[0] = A * sq(u0 - 2.0 * up1 + up2) + 0.25 * sq(3.0 * u0 - 4.0 * up1 + up2);
            beta[1] = A * sq(um1 - 2.0 * u0 + up1) + 0.25 * sq(um1 - up1);
            beta[2] = A * sq(um2 - 2.0 * um1 + u0) + 0.25 * sq(um2 - 4.0 * um1 + 3.0 * u0);
        }
        WenoOrder::Seven => {
            let (um3, um2, um1, u0, up1, up2, up3) = (w[0], w[1], w[2], w[3], w[4], w[5], w[6]);
            const A: f64 = 1.0 / 64.0;
            const B: f64 = 13.0 / 12.0;
            const C: f64 = 781.0 / 720.0;
            beta[0] = A * sq(-15.0 * u0 + 25.0 * up1 - 13.0 * up2 + 3.0 * up3)
                + B * sq(2.0 * u0 - 5.0 * up1 + 4.0 * up2 - up3)
                + C * sq(-u0 + 3.0 * up1 - 3.0 * up2 + up3);
            beta[1] = A * sq(-3.0 * um1 - 3.0 * u0 + 7.0 * up1 - up2)
                + B * sq(um1 - 2.0 * u0 + up1)
                + C * sq(-um1 + 3.0 * u0 - 3.0 * up1 + up2);
            beta[2] = A * sq(um2 - 7.0 * um1 + 3.0 * u0 + 3.0 * up1)
                + B * sq(um1 - 2.0 * u0 + up1)
                + C * sq(-um2 + 3.0 * um1 - 3.0 * u0 + up1);
            beta[3] = A * sq(-3.0 * um3 + 13.0 * um2 - 25.0 * um1 + 15.0 * u0)
                + B * sq(-um3 + 4.0 * um2 - 5.0 * um1 + 2.0 * u0)
                + C * sq(-um3 + 3.0 * um2 - 3.0 * um1 + u0);
        }
        WenoOrder::Nine => {
            let (um4, um3, um2, um1, u0, up1, up2, up3, up4) =
                (w[0], w[1], w[2], w[3], w[4], w[5], w[6], w[7], w[8]);
            const A: f64 = 1.0 / 256.0;
            const B: f64 = 1.0 / 2_246_400.0;
            const C: f64 = 781.0 / 2880.0;
            const D: f64 = 1_421_461.0 / 1_310_400.0;
            beta[0] = A * sq(-35.0 * u0 + 70.0 * up1 - 56.0 * up2 + 26.0 * up3 - 5.0 * up4)
                + B * sq(4613.0 * u0 - 13772.0 * up1 + 15198.0 * up2 - 7532.0 * up3 + 1493.0 * up4)
                + C * sq(-5.0 * u0 + 18.0 * up1 - 24.0 * up2 + 14.0 * up3 - 3.0 * up4)
                + D * sq(u0 - 4.0 * up1 + 6.0 * up2 - 4.0 * up3 + up4);
            beta[1] = A * sq(-5.0 * um1 - 10.0 * u0 + 20.0 * up1 - 6.0 * up2 + up3)
                + B * sq(1493.0 * um1 - 2852.0 * u0 + 1158.0 * up1 + 268.0 * up2 - 67.0 * up3)
                + C * sq(-3.0 * um1 + 10.0 * u0 - 12.0 * up1 + 6.0 * up2 - up3)
                + D * sq(um1 - 4.0 * u0 + 6.0 * up1 - 4.0 * up2 + up3);
            beta[2] = A * sq(um2 - 10.0 * um1 + 10.0 * up1 - up2)
                + B * sq(-67.0 * um2 + 1828.0 * um1 - 3522.0 * u0 + 1828.0 * up1 - 67.0 * up2)
                + C * sq(-um2 + 2.0 * um1 - 2.0 * up1 + up2)
                + D * sq(um2 - 4.0 * um1 + 6.0 * u0 - 4.0 * up1 + up2);
            beta[3] = A * sq(-um3 + 6.0 * um2 - 20.0 * um1 + 10.0 * u0 + 5.0 * up1)
                + B * sq(-67.0 * um3 + 268.0 * um2 + 1158.0 * um1 - 2852.0 * u0 + 1493.0 * up1)
                + C * sq(um3 - 6.0 * um2 + 12.0 * um1 - 10.0 * u0 + 3.0 * up1)
                + D * sq(um3 - 4.0 * um2 + 6.0 * um1 - 4.0 * u0 + up1);
            beta[4] = A * sq(5.0 * um4 - 26.0 * um3 + 56.0 * um2 - 70.0 * um1 + 35.0 * u0)
                + B * sq(1493.0 * um4 - 7532.0 * um3 + 15198.0 * um2 - 13772.0 * um1 + 4613.0 * u0)
                + C * sq(3.0 * um4 - 14.0 * um3 + 24.0 * um2 - 18.0 * um1 + 5.0 * u0)
                + D * sq(um4 - 4.0 * um3 + 6.0 * um2 - 4.0 * um1 + u0);
        }
    }
}

#[inline]
fn check_len(window: &[f64], order: WenoOrder) {
    assert_eq!(
        window.len(),
        order.window_len(),
        "WENO{} window must hold {} values",
        order.k(),
        order.window_len()
    );
}

/// Nonlinear weights `omega_s`.
pub fn nonlinear_weights(window: &[f64], order: WenoOrder, eps: f64) -> Vec<f64> {
    check_len(window, order);
    let mut omega = [0.0; 5];
    weights_into(window, order, eps, &mut omega);
    omega[..order.r()].to_vec()
}

#[inline]
fn weights_into(window: &[f64], order: WenoOrder, eps: f64, omega: &mut [f64; 5]) {
    let r = order.r();
    let d = WenoTables::for_order(order).linear_weights;
    let mut beta = [0.0; 5];
    fill_beta(window, order, &mut beta);
    let mut total = 0.0;
    for s in 0..r {
        let a = d[s] / sq(eps + beta[s]);
        omega[s] = a;
        total += a;
    }
    for w in omega.iter_mut().take(r) {
        *w /= total;
    }
}

/// Left-biased interface value `u-[j+1/2]` from `u[j-r+1 ..= j+r-1]`.
#[inline]
pub fn weno_interpolate(window: &[f64], order: WenoOrder, eps: f64) -> f64 {
    check_len(window, order);
    let r = order.r();
    let tables = WenoTables::for_order(order);
    let mut omega = [0.0; 5];
    weights_into(window, order, eps, &mut omega);
    let mut out = 0.0;
    for s in 0..r {
        let start = r - 1 - s;
        let c = tables.substencil[s];
        let mut sub = 0.0;
        for i in 0..r {
            sub += c[i] * window[start + i];
        }
        out += omega[s] * sub;
    }
    out
}

/// Right-biased interface value `u+[j+1/2]` from `u[j-r+2 ..= j+r]`, given in
/// ascending order. Evaluated as the left-biased procedure on the mirrored window.
#[inline]
pub fn weno_interpolate_right(window: &[f64], order: WenoOrder, eps: f64) -> f64 {
    check_len(window, order);
    let n = window.len();
    let mut rev = [0.0; 9];
    for (i, x) in window.iter().enumerate() {
        rev[n - 1 - i] = *x;
    }
    weno_interpolate(&rev[..n], order, eps)
}

/// Smoothness indicators recomputed from first principles: fit the
/// interpolating polynomial on each substencil, take its scaled derivatives at
/// the cell centre and combine them with the sum-of-squares identity
///
/// ```text
/// (p' + p'''/24)^2 + (520 p'' + 21 p'''')^2 / 249600
///     + 781/720 p'''^2 + 1421461/1310400 p''''^2      (h = 1)
/// ```
///
/// which equals the integral of `sum_l h^(2l-1) (p^(l))^2` over the cell for
/// polynomials of degree at most four. Lower orders use the truncation.
pub fn sos_oracle_beta(window: &[f64], order: WenoOrder) -> Vec<f64> {
    check_len(window, order);
    let r = order.r();
    (0..r)
        .map(|s| {
            let start = r - 1 - s;
            let nodes: Vec<f64> = (0..r).map(|i| i as f64 - s as f64).collect();
            let coeffs = monomial_coefficients(&nodes, &window[start..start + r]);
            let deriv = |l: usize| -> f64 {
                let fact: f64 = (1..=l).map(|x| x as f64).product();
                coeffs.get(l).copied().unwrap_or(0.0) * fact
            };
            let (d1, d2, d3, d4) = (deriv(1), deriv(2), deriv(3), deriv(4));
            sq(d1 + d3 / 24.0)
                + sq(520.0 * d2 + 21.0 * d4) / 249_600.0
                + 781.0 / 720.0 * sq(d3)
                + 1_421_461.0 / 1_310_400.0 * sq(d4)
        })
        .collect()
}

/// Monomial coefficients of the interpolating polynomial through `(nodes, values)`.
fn monomial_coefficients(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        // Expand prod_{m != i} (x - x_m) / (x_i - x_m).
        let mut poly = vec![1.0];
        let mut denom = 1.0;
        for m in 0..n {
            if m == i {
                continue;
            }
            let mut next = vec![0.0; poly.len() + 1];
            for (deg, c) in poly.iter().enumerate() {
                next[deg + 1] += c;
                next[deg] -= c * nodes[m];
            }
            poly = next;
            denom *= nodes[i] - nodes[m];
        }
        for (deg, c) in poly.iter().enumerate() {
            out[deg] += values[i] * c / denom;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn order_bookkeeping() {
        for o in WenoOrder::ALL {
            assert_eq!(o.k(), 2 * o.r() - 1);
            assert_eq!(WenoOrder::from_k(o.k() as u32).unwrap(), o);
        }
        assert!(WenoOrder::from_k(4).is_err());
        assert!(WenoOrder::from_k(11).is_err());
    }

    #[test]
    fn constant_window_is_reproduced() {
        for o in WenoOrder::ALL {
            let w = vec![3.25; o.window_len()];
            assert_relative_eq!(weno_interpolate(&w, o, DEFAULT_EPSILON), 3.25, epsilon = 1e-14);
            assert_relative_eq!(weno_interpolate_right(&w, o, DEFAULT_EPSILON), 3.25, epsilon = 1e-14);
            assert!(smoothness_indicators(&w, o).iter().all(|b| *b == 0.0));
        }
    }

    #[test]
    fn linear_window_gives_midpoint() {
        for o in WenoOrder::ALL {
            let r = o.r() as f64;
            // x_i = i - (r - 1) with j at the origin; interface at 1/2.
            let w: Vec<f64> = (0..o.window_len()).map(|i| 0.3 * (i as f64 - (r - 1.0)) + 2.0).collect();
            assert_relative_eq!(weno_interpolate(&w, o, DEFAULT_EPSILON), 2.15, epsilon = 1e-13);
        }
    }

    #[test]
    fn step_window_is_essentially_non_oscillatory() {
        let o = WenoOrder::Five;
        let w = [0.0, 0.0, 0.0, 1.0, 1.0];
        let v = weno_interpolate(&w, o, DEFAULT_EPSILON);
        assert!((0.0..=0.05).contains(&v), "got {v}");
        let omega = nonlinear_weights(&w, o, DEFAULT_EPSILON);
        // Substencils 0 and 1 straddle the jump.
        let bound = 10.0 * DEFAULT_EPSILON.powi(2) / (1.0 / 16.0);
        assert!(omega[0] <= bound && omega[1] <= bound, "{omega:?}");
    }

    #[test]
    fn mirrored_step_matches() {
        let o = WenoOrder::Five;
        let left = weno_interpolate(&[0.0, 0.0, 0.0, 1.0, 1.0], o, DEFAULT_EPSILON);
        let right = weno_interpolate_right(&[1.0, 1.0, 0.0, 0.0, 0.0], o, DEFAULT_EPSILON);
        assert_eq!(left, right);
    }

    #[test]
    fn k5_linear_data_has_vanishing_curvature_terms() {
        let b = smoothness_indicators(&[1.0, 2.0, 3.0, 4.0, 5.0], WenoOrder::Five);
        // Only the first-derivative square survives: 1/4 (2 du)^2 = 1.
        for x in b {
            assert_relative_eq!(x, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn k5_beta0_hand_value() {
        // u_j, u_j+1, u_j+2 = 1, 4, 9 placed at window positions 2..4.
        let b = smoothness_indicators(&[0.0, 0.0, 1.0, 4.0, 9.0], WenoOrder::Five);
        let expected = 13.0 / 12.0 * 4.0 + 0.25 * 16.0;
        assert_relative_eq!(b[0], expected, epsilon = 1e-13);
        let oracle = sos_oracle_beta(&[0.0, 0.0, 1.0, 4.0, 9.0], WenoOrder::Five);
        assert_relative_eq!(oracle[0], expected, epsilon = 1e-12);
    }

    #[test]
    fn weights_are_a_partition_of_unity() {
        for o in WenoOrder::ALL {
            let w: Vec<f64> = (0..o.window_len()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
            let omega = nonlinear_weights(&w, o, DEFAULT_EPSILON);
            assert!(omega.iter().all(|x| *x > 0.0));
            assert_relative_eq!(omega.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    #[should_panic]
    fn wrong_window_length_panics() {
        weno_interpolate(&[1.0, 2.0, 3.0], WenoOrder::Five, DEFAULT_EPSILON);
    }
}
