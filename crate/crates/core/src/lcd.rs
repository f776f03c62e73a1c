//! Local characteristic decomposition: Roe averages, eigenframes and the
//! left/right eigenmatrix actions for the three backends.
//!
//! * `CpCon` works component-wise on conserved variables (identity frame).
//! * `ChCon` projects conserved variables with the classical Euler
//!   eigenvectors, either as a dense product or with the split form
//!   `l1 = xi1 - xi2, l2 = xi2 - xi3, l3 = xi4, l4 = xi1 + xi2`.
//! * `ChRi` projects the Riemann-invariant transform variables. Its left and
//!   right eigenmatrices differ from the identity only in the second column,
//!   which holds `+mu` / `-mu`, so each action costs one multiplication.
//!
//! Every action adds the number of floating-point multiplications it performs
//! to a [`MulCounter`]; coefficient setup done once per frame is not counted.

use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::eos::{ConservedState, GasModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LcdBackend {
    /// Characteristic-wise on Riemann-invariant transform variables.
    ChRi,
    /// Characteristic-wise on conserved variables.
    ChCon,
    /// Component-wise on conserved variables.
    CpCon,
}

impl LcdBackend {
    pub const ALL: [LcdBackend; 3] = [LcdBackend::ChRi, LcdBackend::ChCon, LcdBackend::CpCon];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ChRi => "ch_ri",
            Self::ChCon => "ch_con",
            Self::CpCon => "cp_con",
        }
    }

    /// Whether the backend interpolates transform variables instead of conserved ones.
    pub fn uses_transform(self) -> bool {
        matches!(self, Self::ChRi)
    }
}

impl std::str::FromStr for LcdBackend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ch_ri" => Ok(Self::ChRi),
            "ch_con" => Ok(Self::ChCon),
            "cp_con" => Ok(Self::CpCon),
            other => Err(Error::Config(format!(
                "unknown backend `{other}` (expected ch_ri, ch_con or cp_con)"
            ))),
        }
    }
}

impl std::fmt::Display for LcdBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evaluation strategy for the conserved-variable left action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConMatvec {
    /// Dense `m x m` product.
    #[default]
    Naive,
    /// Shared sparse inner products `xi_i . u`.
    SplitXi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    X,
    Y,
}

/// Tally of multiplications spent in eigenmatrix actions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulCounter {
    /// Left eigenmatrix-vector products.
    pub left: u64,
    /// Right eigenmatrix-vector products.
    pub right: u64,
    /// Forward/backward transform evaluations (each involves `exp`/`ln`).
    pub transforms: u64,
}

impl MulCounter {
    pub fn total(&self) -> u64 {
        self.left + self.right
    }
}

impl AddAssign for MulCounter {
    fn add_assign(&mut self, rhs: Self) {
        self.left += rhs.left;
        self.right += rhs.right;
        self.transforms += rhs.transforms;
    }
}

/// Square-root-density weighted interface state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoeState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub h: f64,
    pub c: f64,
}

impl RoeState {
    pub fn pressure(&self, gas: &GasModel) -> f64 {
        self.rho * self.c * self.c / gas.gamma()
    }

    pub fn swap_uv(&self) -> Self {
        Self {
            u: self.v,
            v: self.u,
            ..*self
        }
    }
}

pub fn roe_average(left: &ConservedState, right: &ConservedState, gas: &GasModel) -> Result<RoeState> {
    roe_average_arr::<4>(&left.to_array(), &right.to_array(), gas)
}

/// Roe average of two conserved arrays (`M = 3` or `4`).
#[inline]
pub fn roe_average_arr<const M: usize>(ql: &[f64; M], qr: &[f64; M], gas: &GasModel) -> Result<RoeState> {
    let g = gas.gamma();
    let (rl, rr) = (ql[0], qr[0]);
    if !(rl > 0.0) || !(rr > 0.0) {
        return Err(Error::NonPositiveDensity { density: rl.min(rr) });
    }
    let (sl, sr) = (rl.sqrt(), rr.sqrt());
    let inv = 1.0 / (sl + sr);
    let (ul, ur) = (ql[1] / rl, qr[1] / rr);
    let (vl, vr) = if M == 4 { (ql[2] / rl, qr[2] / rr) } else { (0.0, 0.0) };
    let pl = gas.pressure_of(ql);
    let pr = gas.pressure_of(qr);
    let hl = (ql[M - 1] + pl) / rl;
    let hr = (qr[M - 1] + pr) / rr;
    let u = (sl * ul + sr * ur) * inv;
    let v = (sl * vl + sr * vr) * inv;
    let h = (sl * hl + sr * hr) * inv;
    let c2 = (g - 1.0) * (h - 0.5 * (u * u + v * v));
    if !(c2 > 0.0) {
        return Err(Error::ImaginarySoundSpeed { c2 });
    }
    Ok(RoeState {
        rho: sl * sr,
        u,
        v,
        h,
        c: c2.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum FrameKind<const M: usize> {
    Identity,
    RiemannInvariant {
        mu: f64,
    },
    Conserved {
        left: [[f64; M]; M],
        right: [[f64; M]; M],
        xi: XiCoefficients,
        matvec: ConMatvec,
    },
}

/// Coefficients of the split left eigenvectors (x-direction ordering).
#[derive(Debug, Clone, Copy, PartialEq)]
struct XiCoefficients {
    u: f64,
    v: f64,
    c: f64,
    /// `b |u|^2 / 2`, `b u`, `b v`, `b` with `b = (gamma - 1) / c`.
    bq: f64,
    bu: f64,
    bv: f64,
    b: f64,
}

/// Eigenstructure frozen at one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame<const M: usize> {
    pub direction: Direction,
    /// `u - c, u, (u,) u + c` for the normal velocity `u`.
    pub eigenvalues: [f64; M],
    kind: FrameKind<M>,
}

/// Builds the frame at `roe` for `backend`. `Direction::Y` frames act on
/// unpermuted `(rho, rho u, rho v, E)` vectors, with `v` the normal velocity.
pub fn build_frame<const M: usize>(
    roe: &RoeState,
    gas: &GasModel,
    backend: LcdBackend,
    matvec: ConMatvec,
    dir: Direction,
) -> EigenFrame<M> {
    assert!(M == 3 || M == 4, "frames exist for 1D (3) and 2D (4) systems");
    assert!(
        M == 4 || dir == Direction::X,
        "1D frames have no y-direction"
    );
    let normal = match dir {
        Direction::X => *roe,
        Direction::Y => roe.swap_uv(),
    };
    let mut eigenvalues = [normal.u; M];
    eigenvalues[0] = normal.u - normal.c;
    eigenvalues[M - 1] = normal.u + normal.c;
    let kind = match backend {
        LcdBackend::CpCon => FrameKind::Identity,
        LcdBackend::ChRi => {
            let g = gas.gamma();
            let p = normal.pressure(gas);
            let mu = 2.0 * g.sqrt() * (p.ln() * (g - 1.0) / (2.0 * g)).exp() / (g - 1.0);
            FrameKind::RiemannInvariant { mu }
        }
        LcdBackend::ChCon => {
            let (mut left, mut right, xi) = conserved_eigenvectors::<M>(&normal, gas);
            if dir == Direction::Y {
                permute_matrix(&mut left);
                permute_matrix(&mut right);
            }
            FrameKind::Conserved {
                left,
                right,
                xi,
                matvec,
            }
        }
    };
    EigenFrame {
        direction: dir,
        eigenvalues,
        kind,
    }
}

/// Swaps rows and columns 1 and 2 (u <-> v).
fn permute_matrix<const M: usize>(a: &mut [[f64; M]; M]) {
    a.swap(1, 2);
    for row in a.iter_mut() {
        row.swap(1, 2);
    }
}

fn conserved_eigenvectors<const M: usize>(
    roe: &RoeState,
    gas: &GasModel,
) -> ([[f64; M]; M], [[f64; M]; M], XiCoefficients) {
    let g = gas.gamma();
    let (u, v, c, h) = (roe.u, if M == 4 { roe.v } else { 0.0 }, roe.c, roe.h);
    let q2 = 0.5 * (u * u + v * v);
    let b = (g - 1.0) / c;
    // Full 2D forms; 1D drops row/column 2.
    let xi2 = [b * q2, -b * u, -b * v, b];
    let xi1 = [-u, 1.0, 0.0, 0.0];
    let l4 = [
        [xi1[0] - xi2[0], xi1[1] - xi2[1], -xi2[2], -xi2[3]],
        [xi2[0] - c, xi2[1], xi2[2], xi2[3]],
        [-v, 0.0, 1.0, 0.0],
        [xi1[0] + xi2[0], xi1[1] + xi2[1], xi2[2], xi2[3]],
    ];
    let hc = 0.5 / c;
    // Columns r1..r4.
    let r4 = [
        [-hc, 0.5 - hc * u, -hc * v, 0.5 * u - hc * h],
        [-1.0 / c, -u / c, -v / c, -q2 / c],
        [0.0, 0.0, 1.0, v],
        [hc, 0.5 + hc * u, hc * v, 0.5 * u + hc * h],
    ];
    let idx: &[usize] = if M == 4 { &[0, 1, 2, 3] } else { &[0, 1, 3] };
    let mut left = [[0.0; M]; M];
    let mut right = [[0.0; M]; M];
    for (i, &ii) in idx.iter().enumerate() {
        for (j, &jj) in idx.iter().enumerate() {
            left[i][j] = l4[ii][jj];
            // right[i][j] = component i of column j
            right[i][j] = r4[jj][ii];
        }
    }
    let xi = XiCoefficients {
        u,
        v,
        c,
        bq: xi2[0],
        bu: b * u,
        bv: b * v,
        b,
    };
    (left, right, xi)
}

impl<const M: usize> EigenFrame<M> {
    /// `w = L v`.
    #[inline]
    pub fn to_characteristic(&self, vals: &[f64; M], ctr: &mut MulCounter) -> [f64; M] {
        match &self.kind {
            FrameKind::Identity => *vals,
            FrameKind::RiemannInvariant { mu } => {
                let a = mu * vals[1];
                ctr.left += 1;
                let mut w = *vals;
                w[0] = vals[0] + a;
                w[M - 1] = vals[M - 1] - a;
                w
            }
            FrameKind::Conserved {
                left, xi, matvec, ..
            } => match matvec {
                ConMatvec::Naive => {
                    ctr.left += (M * M) as u64;
                    dense(left, vals)
                }
                ConMatvec::SplitXi => self.split_left(xi, vals, ctr),
            },
        }
    }

    /// `v = R w`.
    #[inline]
    pub fn from_characteristic(&self, w: &[f64; M], ctr: &mut MulCounter) -> [f64; M] {
        match &self.kind {
            FrameKind::Identity => *w,
            FrameKind::RiemannInvariant { mu } => {
                let a = mu * w[1];
                ctr.right += 1;
                let mut v = *w;
                v[0] = w[0] - a;
                v[M - 1] = w[M - 1] + a;
                v
            }
            FrameKind::Conserved { right, .. } => {
                ctr.right += (M * M) as u64;
                dense(right, w)
            }
        }
    }

    fn split_left(&self, xi: &XiCoefficients, x: &[f64; M], ctr: &mut MulCounter) -> [f64; M] {
        // Work in normal-first ordering; y-frames see (rho, rho u, rho v, E)
        // with rho v normal.
        let (n, t) = match self.direction {
            Direction::X => (1, 2),
            Direction::Y => (2, 1),
        };
        let e = M - 1;
        let mut w = [0.0; M];
        if M == 4 {
            let d1 = x[n] - xi.u * x[0];
            let d2 = xi.bq * x[0] - xi.bu * x[n] - xi.bv * x[t] + xi.b * x[e];
            let d3 = xi.c * x[0];
            let d4 = x[t] - xi.v * x[0];
            ctr.left += 7;
            w[0] = d1 - d2;
            w[1] = d2 - d3;
            w[2] = d4;
            w[3] = d1 + d2;
            if self.direction == Direction::Y {
                w.swap(1, 2);
            }
        } else {
            let d1 = x[1] - xi.u * x[0];
            let d2 = xi.bq * x[0] - xi.bu * x[1] + xi.b * x[e];
            let d3 = xi.c * x[0];
            ctr.left += 5;
            w[0] = d1 - d2;
            w[1] = d2 - d3;
            w[2] = d1 + d2;
        }
        w
    }

    /// The backend-specific coefficient `mu` for Riemann-invariant frames.
    pub fn mu(&self) -> Option<f64> {
        match self.kind {
            FrameKind::RiemannInvariant { mu } => Some(mu),
            _ => None,
        }
    }

    /// Dense left and right matrices of the frame.
    pub fn matrices(&self) -> ([[f64; M]; M], [[f64; M]; M]) {
        let eye = || {
            let mut a = [[0.0; M]; M];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            a
        };
        match &self.kind {
            FrameKind::Identity => (eye(), eye()),
            FrameKind::RiemannInvariant { mu } => {
                let (mut l, mut r) = (eye(), eye());
                l[0][1] = *mu;
                l[M - 1][1] = -mu;
                r[0][1] = -mu;
                r[M - 1][1] = *mu;
                (l, r)
            }
            FrameKind::Conserved { left, right, .. } => (*left, *right),
        }
    }
}

#[inline]
fn dense<const M: usize>(a: &[[f64; M]; M], x: &[f64; M]) -> [f64; M] {
    let mut y = [0.0; M];
    for i in 0..M {
        let mut s = 0.0;
        for j in 0..M {
            s += a[i][j] * x[j];
        }
        y[i] = s;
    }
    y
}
