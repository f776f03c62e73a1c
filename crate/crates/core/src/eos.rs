//! Gamma-law gas states and the conversions between conserved, primitive and
//! Riemann-invariant ("transform") variables.
//!
//! The solver works on fixed-size arrays `[f64; M]` with `M = 3` in 1D
//! (`rho, rho*u, E`) and `M = 4` in 2D (`rho, rho*u, rho*v, E`). The second
//! component is always the velocity normal to the current sweep direction;
//! y-sweeps permute the state before calling into this module.
//!
//! Transform variables are `(u - 2c/(g-1), S^(1/(2g)), v, u + 2c/(g-1))`, with
//! the tangential velocity dropped in 1D. The square root of the entropy power
//! is computed as `exp(ln(p)/(2g) - ln(rho)/2)`; the transcendental calls make
//! this transform noticeably more expensive than the conserved/primitive pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ideal polytropic gas with constant specific heat ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    gamma: f64,
}

impl GasModel {
    /// Largest ratio for which the two-rarefaction estimate bounds the wave speeds.
    pub const PP_GAMMA_LIMIT: f64 = 5.0 / 3.0;

    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::Config(format!("gamma must be > 1, got {gamma}")));
        }
        if gamma > Self::PP_GAMMA_LIMIT + 1e-12 {
            static ONCE: std::sync::Once = std::sync::Once::new();
            ONCE.call_once(|| {
                log::warn!("gamma = {gamma} exceeds 5/3; the two-rarefaction speed bound is not guaranteed")
            });
        }
        Ok(Self { gamma })
    }

    pub fn air() -> Self {
        Self { gamma: 1.4 }
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn prim_to_cons(&self, w: &PrimitiveState) -> ConservedState {
        let kinetic = 0.5 * w.rho * (w.u * w.u + w.v * w.v);
        ConservedState {
            rho: w.rho,
            rho_u: w.rho * w.u,
            rho_v: w.rho * w.v,
            energy: w.p / (self.gamma - 1.0) + kinetic,
        }
    }

    pub fn cons_to_prim(&self, q: &ConservedState) -> Result<PrimitiveState> {
        if !(q.rho > 0.0) {
            return Err(Error::NonPositiveDensity { density: q.rho });
        }
        let u = q.rho_u / q.rho;
        let v = q.rho_v / q.rho;
        // same rounding as `internal_energy` so both agree on admissibility
        let p = (self.gamma - 1.0) * (q.energy - 0.5 * (q.rho_u * q.rho_u + q.rho_v * q.rho_v) / q.rho);
        if !(p > 0.0) {
            return Err(Error::NonPositivePressure {
                density: q.rho,
                pressure: p,
            });
        }
        Ok(PrimitiveState { rho: q.rho, u, v, p })
    }

    #[inline]
    pub fn sound_speed(&self, w: &PrimitiveState) -> f64 {
        (self.gamma * w.p / w.rho).sqrt()
    }

    /// `S = p * rho^(-gamma)`.
    #[inline]
    pub fn entropy(&self, w: &PrimitiveState) -> f64 {
        w.p * w.rho.powf(-self.gamma)
    }

    /// `S^(1/(2 gamma)) = p^(1/(2 gamma)) rho^(-1/2)`.
    #[inline]
    pub fn srt_entropy(&self, rho: f64, p: f64) -> f64 {
        (p.ln() / (2.0 * self.gamma) - 0.5 * rho.ln()).exp()
    }

    pub fn prim_to_transform(&self, w: &PrimitiveState) -> TransformState {
        let c = self.sound_speed(w);
        let k = 2.0 * c / (self.gamma - 1.0);
        TransformState {
            j_minus: w.u - k,
            srt_entropy: self.srt_entropy(w.rho, w.p),
            v_tang: w.v,
            j_plus: w.u + k,
        }
    }

    pub fn transform_to_prim(&self, t: &TransformState) -> Result<PrimitiveState> {
        let g = self.gamma;
        if !(t.j_minus < t.j_plus) || !(t.srt_entropy > 0.0) {
            return Err(Error::DegenerateState {
                j_minus: t.j_minus,
                j_plus: t.j_plus,
                srt_entropy: t.srt_entropy,
            });
        }
        let u = 0.5 * (t.j_plus + t.j_minus);
        let c = 0.25 * (g - 1.0) * (t.j_plus - t.j_minus);
        // rho = (c^2/g)^(1/(g-1)) * sigma^(-2g/(g-1)), p = rho c^2 / g
        let c2g = c * c / g;
        let rho = ((c2g.ln() - 2.0 * g * t.srt_entropy.ln()) / (g - 1.0)).exp();
        let p = rho * c2g;
        if !(rho > 0.0) || !(p > 0.0) {
            return Err(Error::DegenerateState {
                j_minus: t.j_minus,
                j_plus: t.j_plus,
                srt_entropy: t.srt_entropy,
            });
        }
        Ok(PrimitiveState { rho, u, v: t.v_tang, p })
    }

    // ---- fixed-size array forms used by the solver ----

    #[inline]
    pub fn cons_array_to_prim<const M: usize>(&self, q: &[f64; M]) -> Result<PrimitiveState> {
        self.cons_to_prim(&ConservedState::from_array(q))
    }

    #[inline]
    pub fn prim_to_cons_array<const M: usize>(&self, w: &PrimitiveState) -> [f64; M] {
        self.prim_to_cons(w).to_array()
    }

    #[inline]
    pub fn prim_to_transform_array<const M: usize>(&self, w: &PrimitiveState) -> [f64; M] {
        self.prim_to_transform(w).to_array()
    }

    #[inline]
    pub fn transform_array_to_prim<const M: usize>(&self, t: &[f64; M]) -> Result<PrimitiveState> {
        self.transform_to_prim(&TransformState::from_array(t))
    }

    /// Pressure of a conserved array without validity checks.
    #[inline]
    pub fn pressure_of<const M: usize>(&self, q: &[f64; M]) -> f64 {
        (self.gamma - 1.0) * internal_energy(q)
    }
}

impl Default for GasModel {
    fn default() -> Self {
        Self::air()
    }
}

/// `E - |m|^2 / (2 rho)` for a conserved array (volume-specific internal energy).
#[inline]
pub fn internal_energy<const M: usize>(q: &[f64; M]) -> f64 {
    let mut m2 = q[1] * q[1];
    if M == 4 {
        m2 += q[2] * q[2];
    }
    q[M - 1] - 0.5 * m2 / q[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    /// Transverse velocity; zero in 1D.
    pub v: f64,
    pub p: f64,
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    pub const fn new_1d(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, v: 0.0, p }
    }

    pub fn is_admissible(&self) -> bool {
        self.rho > 0.0 && self.p > 0.0 && self.u.is_finite() && self.v.is_finite()
    }

    pub fn swap_uv(&self) -> Self {
        Self {
            u: self.v,
            v: self.u,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedState {
    pub rho: f64,
    pub rho_u: f64,
    /// Zero in 1D.
    pub rho_v: f64,
    pub energy: f64,
}

impl ConservedState {
    pub const fn new_1d(rho: f64, rho_u: f64, energy: f64) -> Self {
        Self {
            rho,
            rho_u,
            rho_v: 0.0,
            energy,
        }
    }

    #[inline]
    pub fn to_array<const M: usize>(&self) -> [f64; M] {
        let mut a = [0.0; M];
        a[0] = self.rho;
        a[1] = self.rho_u;
        if M == 4 {
            a[2] = self.rho_v;
        }
        a[M - 1] = self.energy;
        a
    }

    #[inline]
    pub fn from_array<const M: usize>(a: &[f64; M]) -> Self {
        Self {
            rho: a[0],
            rho_u: a[1],
            rho_v: if M == 4 { a[2] } else { 0.0 },
            energy: a[M - 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformState {
    pub j_minus: f64,
    pub srt_entropy: f64,
    /// Dropped in 1D.
    pub v_tang: f64,
    pub j_plus: f64,
}

impl TransformState {
    #[inline]
    pub fn to_array<const M: usize>(&self) -> [f64; M] {
        let mut a = [0.0; M];
        a[0] = self.j_minus;
        a[1] = self.srt_entropy;
        if M == 4 {
            a[2] = self.v_tang;
        }
        a[M - 1] = self.j_plus;
        a
    }

    #[inline]
    pub fn from_array<const M: usize>(a: &[f64; M]) -> Self {
        Self {
            j_minus: a[0],
            srt_entropy: a[1],
            v_tang: if M == 4 { a[2] } else { 0.0 },
            j_plus: a[M - 1],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn air() -> GasModel {
        GasModel::air()
    }

    #[test]
    fn prim_to_cons_examples() {
        let g = air();
        let q = g.prim_to_cons(&PrimitiveState::new_1d(1.0, 0.0, 1.0));
        assert_eq!((q.rho, q.rho_u), (1.0, 0.0));
        assert_relative_eq!(q.energy, 2.5, epsilon = 1e-15);

        // Lax left state.
        let q = g.prim_to_cons(&PrimitiveState::new_1d(0.445, 0.698, 3.528));
        assert_relative_eq!(q.rho_u, 0.31061, epsilon = 1e-12);
        assert_relative_eq!(q.energy, 8.928_402_89, epsilon = 1e-10);

        // DMR pre-shock state.
        let q = g.prim_to_cons(&PrimitiveState::new(1.4, 0.0, 0.0, 1.0));
        assert_eq!((q.rho, q.rho_u, q.rho_v), (1.4, 0.0, 0.0));
        assert_relative_eq!(q.energy, 2.5, epsilon = 1e-15);
    }

    #[test]
    fn cons_to_prim_examples() {
        let g = air();
        let w = g.cons_to_prim(&ConservedState::new_1d(1.0, 0.0, 2.5)).unwrap();
        assert_relative_eq!(w.p, 1.0, epsilon = 1e-15);

        let w = g.cons_to_prim(&ConservedState::new_1d(2.0, 0.0, 2.5e9)).unwrap();
        assert_relative_eq!(w.p, 1e9, max_relative = 1e-15);

        let w = g.cons_to_prim(&ConservedState::new_1d(1.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(w.p, 0.2, epsilon = 1e-15);

        let err = g.cons_to_prim(&ConservedState::new_1d(1.0, 2.0, 1.0));
        assert!(matches!(err, Err(Error::NonPositivePressure { .. })));
        let err = g.cons_to_prim(&ConservedState::new_1d(0.0, 0.0, 1.0));
        assert!(matches!(err, Err(Error::NonPositiveDensity { .. })));
    }

    #[test]
    fn sound_speed_and_entropy() {
        let g = air();
        assert_relative_eq!(
            g.sound_speed(&PrimitiveState::new_1d(1.0, 0.0, 1.0)),
            1.183_215_956_619_923,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            g.sound_speed(&PrimitiveState::new_1d(1.4, 3.0, 1.0)),
            1.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            g.sound_speed(&PrimitiveState::new_1d(0.125, 0.0, 0.1)),
            1.058_300_524_425_836,
            epsilon = 1e-14
        );
        assert_eq!(g.entropy(&PrimitiveState::new_1d(1.0, 0.0, 1.0)), 1.0);
        let two = PrimitiveState::new_1d(2.0, 0.0, 2f64.powf(1.4));
        assert_relative_eq!(g.entropy(&two), 1.0, epsilon = 1e-14);
        assert_relative_eq!(
            g.entropy(&PrimitiveState::new_1d(0.125, 0.0, 0.1)),
            1.837_917_4,
            epsilon = 1e-7
        );
    }

    #[test]
    fn transform_examples() {
        let g = air();
        let t = g.prim_to_transform(&PrimitiveState::new_1d(1.0, 0.0, 1.0));
        let k = 5.0 * 1.4f64.sqrt();
        assert_relative_eq!(t.j_minus, -k, epsilon = 1e-14);
        assert_relative_eq!(t.srt_entropy, 1.0, epsilon = 1e-15);
        assert_relative_eq!(t.j_plus, k, epsilon = 1e-14);

        let w = PrimitiveState::new_1d(0.125, 0.0, 0.1);
        let t = g.prim_to_transform(&w);
        let c = 1.058_300_524_425_836;
        assert_relative_eq!(t.j_minus, -5.0 * c, epsilon = 1e-13);
        assert_relative_eq!(t.j_plus, 5.0 * c, epsilon = 1e-13);
        // Independent route: S^(1/(2 gamma)).
        let s = g.entropy(&w);
        assert_relative_eq!(t.srt_entropy, s.powf(1.0 / 2.8), max_relative = 1e-14);
        assert_relative_eq!(t.srt_entropy, 0.1f64.powf(1.0 / 2.8) / 0.125f64.sqrt(), max_relative = 1e-14);

        let a = g.prim_to_transform(&PrimitiveState::new_1d(0.7, 0.3, 2.0));
        let b = g.prim_to_transform(&PrimitiveState::new_1d(0.7, -0.3, 2.0));
        assert_relative_eq!(a.j_minus, -b.j_plus, epsilon = 1e-14);
        assert_relative_eq!(a.j_plus, -b.j_minus, epsilon = 1e-14);
        assert_eq!(a.srt_entropy, b.srt_entropy);
    }

    #[test]
    fn transform_inverse() {
        let g = air();
        let k = 5.0 * 1.4f64.sqrt();
        let t = TransformState {
            j_minus: -k,
            srt_entropy: 1.0,
            v_tang: 0.0,
            j_plus: k,
        };
        let w = g.transform_to_prim(&t).unwrap();
        assert_relative_eq!(w.rho, 1.0, max_relative = 1e-13);
        assert_relative_eq!(w.u, 0.0, epsilon = 1e-14);
        assert_relative_eq!(w.p, 1.0, max_relative = 1e-13);

        for w in [
            PrimitiveState::new_1d(1.0, 0.0, 1.0),
            PrimitiveState::new_1d(0.445, 0.698, 3.528),
            PrimitiveState::new_1d(0.125, 0.0, 0.1),
            PrimitiveState::new(8.0, 7.36, -4.25, 116.5),
        ] {
            let back = g.transform_to_prim(&g.prim_to_transform(&w)).unwrap();
            assert_relative_eq!(back.rho, w.rho, max_relative = 1e-13);
            assert_relative_eq!(back.p, w.p, max_relative = 1e-13);
            assert_relative_eq!(back.u, w.u, epsilon = 1e-13 * (1.0 + w.u.abs()));
            assert_eq!(back.v, w.v);
        }

        let vac = TransformState {
            j_minus: 1.0,
            srt_entropy: 1.0,
            v_tang: 0.0,
            j_plus: 1.0,
        };
        assert!(matches!(g.transform_to_prim(&vac), Err(Error::DegenerateState { .. })));
    }

    #[test]
    fn rejects_bad_gamma() {
        assert!(GasModel::new(1.0).is_err());
        assert!(GasModel::new(f64::NAN).is_err());
        assert!(GasModel::new(3.0).is_ok());
    }

    #[test]
    fn array_forms_match_structs() {
        let g = air();
        let w = PrimitiveState::new(1.3, 0.2, -0.4, 0.9);
        let q4: [f64; 4] = g.prim_to_cons_array(&w);
        let back = g.cons_array_to_prim(&q4).unwrap();
        assert_relative_eq!(back.v, w.v, epsilon = 1e-15);
        let w1 = PrimitiveState::new_1d(1.3, 0.2, 0.9);
        let q3: [f64; 3] = g.prim_to_cons_array(&w1);
        assert_eq!(q3[2], g.prim_to_cons(&w1).energy);
        assert_relative_eq!(g.pressure_of(&q3), 0.9, max_relative = 1e-14);
    }
}
