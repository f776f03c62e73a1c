//! Positivity-preserving limiters: a convex-combination limiter on interpolated
//! interface values and a flux limiter blending the high-order flux toward a
//! positive low-order one.

use serde::{Deserialize, Serialize};

use crate::eos::internal_energy;
use crate::error::{Error, Result};
use crate::lcd::LcdBackend;

/// Convex set the interpolated values are kept in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibleSet {
    /// Transform variables: `v_1 < v_last` and `v_2 > 0`.
    RiemannInvariant,
    /// Conserved variables: `rho > 0` and internal energy `> 0`.
    Conserved,
}

impl AdmissibleSet {
    pub fn for_backend(backend: LcdBackend) -> Self {
        if backend.uses_transform() {
            AdmissibleSet::RiemannInvariant
        } else {
            AdmissibleSet::Conserved
        }
    }

    /// Strict membership test.
    pub fn contains<const M: usize>(&self, v: &[f64; M]) -> bool {
        match self {
            AdmissibleSet::RiemannInvariant => v[0] < v[M - 1] && v[1] > 0.0,
            AdmissibleSet::Conserved => v[0] > 0.0 && internal_energy(v) > 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimiterConfig {
    /// Limited quantities are kept above this fraction of their value at the
    /// safe end of the segment.
    pub floor_fraction: f64,
    pub interpolation: bool,
    pub flux: bool,
    /// dt multiplier applied to the step after a flux-limiter activation.
    pub strict_cfl_factor: f64,
    /// Absolute tolerance of the bisection in `theta`.
    pub bisection_tol: f64,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self {
            floor_fraction: 1e-13,
            interpolation: true,
            flux: true,
            strict_cfl_factor: 0.5,
            bisection_tol: 1e-12,
        }
    }
}

impl LimiterConfig {
    pub fn disabled() -> Self {
        Self {
            interpolation: false,
            flux: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.floor_fraction > 0.0 && self.floor_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "limiter floor fraction must lie in (0, 1], got {}",
                self.floor_fraction
            )));
        }
        if !(self.strict_cfl_factor > 0.0 && self.strict_cfl_factor <= 1.0) {
            return Err(Error::Config(format!(
                "strict CFL factor must lie in (0, 1], got {}",
                self.strict_cfl_factor
            )));
        }
        Ok(())
    }
}

/// Largest `theta` in `[0, 1]` keeping `a + theta (b - a) >= floor`, for `a >= floor`.
#[inline]
fn linear_theta(a: f64, b: f64, floor: f64) -> f64 {
    if b >= floor {
        1.0
    } else {
        ((a - floor) / (a - b)).clamp(0.0, 1.0)
    }
}

/// Largest `theta` with `g(theta) >= floor`, for concave `g` with `g(0) >= floor`.
fn bisect_theta(g: impl Fn(f64) -> f64, floor: f64, tol: f64) -> f64 {
    if g(1.0) >= floor {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[inline]
fn lerp<const M: usize>(a: &[f64; M], b: &[f64; M], theta: f64) -> [f64; M] {
    let mut out = [0.0; M];
    for i in 0..M {
        out[i] = a[i] + theta * (b[i] - a[i]);
    }
    out
}

/// Largest `theta` such that `node + theta (face - node)` stays in `set` with margins.
fn face_theta<const M: usize>(node: &[f64; M], face: &[f64; M], set: AdmissibleSet, cfg: &LimiterConfig) -> f64 {
    let frac = cfg.floor_fraction;
    match set {
        AdmissibleSet::RiemannInvariant => {
            let gap0 = node[M - 1] - node[0];
            let gap1 = face[M - 1] - face[0];
            let t1 = linear_theta(gap0, gap1, frac * gap0);
            let t2 = linear_theta(node[1], face[1], frac * node[1]);
            t1.min(t2)
        }
        AdmissibleSet::Conserved => {
            let t1 = linear_theta(node[0], face[0], frac * node[0]);
            t1 * energy_theta(node, &lerp(node, face, t1), frac * internal_energy(node), cfg.bisection_tol)
        }
    }
}

/// Largest `s` keeping the internal energy of `a + s (b - a)` above `floor`,
/// for a segment on which the density stays positive.
fn energy_theta<const M: usize>(a: &[f64; M], b: &[f64; M], floor: f64, tol: f64) -> f64 {
    bisect_theta(|t| internal_energy(&lerp(a, b, t)), floor, tol)
}

/// Pulls `faces` toward `node` by a common factor so that every face satisfies
/// the admissibility margins. Returns the factor; faces are left bitwise
/// untouched when it is 1.
pub fn limit_interface_values<const M: usize>(
    node: &[f64; M],
    faces: &mut [[f64; M]],
    set: AdmissibleSet,
    cfg: &LimiterConfig,
) -> Result<f64> {
    if !set.contains(node) {
        return Err(Error::InadmissibleNode);
    }
    let frac = cfg.floor_fraction;
    let inside = |v: &[f64; M]| match set {
        AdmissibleSet::RiemannInvariant => {
            v[M - 1] - v[0] >= frac * (node[M - 1] - node[0]) && v[1] >= frac * node[1]
        }
        AdmissibleSet::Conserved => v[0] >= frac * node[0] && internal_energy(v) >= frac * internal_energy(node),
    };
    if faces.iter().all(|f| inside(f)) {
        return Ok(1.0);
    }
    let mut theta = faces
        .iter()
        .map(|f| face_theta(node, f, set, cfg))
        .fold(1.0, f64::min);
    // Cancellation in the combination can eat a margin far below round-off.
    while theta > 0.0 && !faces.iter().all(|f| set.contains(&lerp(node, f, theta))) {
        theta = if theta < 1e-12 { 0.0 } else { 0.5 * theta };
    }
    for f in faces.iter_mut() {
        *f = lerp(node, f, theta);
    }
    Ok(theta)
}

/// One interface of the flux limiter. The conservative update of the two
/// adjacent cells is split so that the interface flux `F` enters
/// `u_l - lambda_l (F - f(u_l))` and `u_r + lambda_r (F - f(u_r))` only.
#[derive(Debug, Clone, Copy)]
pub struct FluxLimitSides<'a, const M: usize> {
    pub q_left: &'a [f64; M],
    pub f_left: &'a [f64; M],
    pub q_right: &'a [f64; M],
    pub f_right: &'a [f64; M],
    /// Effective `dt/dx` of each split update (twice the mesh ratio in 1D);
    /// zero for a side that needs no guarantee.
    pub lambda_left: f64,
    pub lambda_right: f64,
}

impl<const M: usize> FluxLimitSides<'_, M> {
    #[inline]
    fn updates(&self, flux: &[f64; M]) -> ([f64; M], [f64; M]) {
        let mut a = [0.0; M];
        let mut b = [0.0; M];
        for i in 0..M {
            a[i] = self.q_left[i] - self.lambda_left * (flux[i] - self.f_left[i]);
            b[i] = self.q_right[i] + self.lambda_right * (flux[i] - self.f_right[i]);
        }
        (a, b)
    }
}

/// Blends `f_high` toward `f_low` so both split updates keep density and
/// internal energy above their floors. Returns the flux and `theta`;
/// `f_high` is returned bitwise when `theta = 1`.
pub fn pp_flux_limit<const M: usize>(
    f_low: &[f64; M],
    f_high: &[f64; M],
    sides: &FluxLimitSides<'_, M>,
    cfg: &LimiterConfig,
) -> ([f64; M], f64) {
    let (lo_a, lo_b) = sides.updates(f_low);
    let (hi_a, hi_b) = sides.updates(f_high);
    let frac = cfg.floor_fraction;
    let ok = |lo: &[f64; M], hi: &[f64; M]| {
        hi[0] >= frac * lo[0] && internal_energy(hi) >= frac * internal_energy(lo)
    };
    if ok(&lo_a, &hi_a) && ok(&lo_b, &hi_b) {
        return (*f_high, 1.0);
    }
    let mut theta: f64 = 1.0;
    for (lo, hi) in [(&lo_a, &hi_a), (&lo_b, &hi_b)] {
        if !(lo[0] > 0.0) || !(internal_energy(lo) > 0.0) {
            // Low-order update already inadmissible (time step too large).
            theta = 0.0;
            continue;
        }
        let t_rho = linear_theta(lo[0], hi[0], frac * lo[0]);
        let t_e = t_rho * energy_theta(lo, &lerp(lo, hi, t_rho), frac * internal_energy(lo), cfg.bisection_tol);
        theta = theta.min(t_e);
    }
    let admissible = |t: f64| {
        let (a, b) = sides.updates(&lerp(f_low, f_high, t));
        AdmissibleSet::Conserved.contains(&a) && AdmissibleSet::Conserved.contains(&b)
    };
    while theta > 0.0 && !admissible(theta) {
        theta = if theta < 1e-12 { 0.0 } else { 0.5 * theta };
    }
    (lerp(f_low, f_high, theta), theta)
}
