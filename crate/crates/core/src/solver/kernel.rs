//! Interface fluxes along one grid line. Data arrive in normal-first order:
//! `(rho, rho u_n, [rho u_t,] E)`.

use crate::eos::{GasModel, PrimitiveState};
use crate::error::Error;
use crate::flux::{einfeldt_speeds, flux_correction_arr, hll_flux_arr, physical_flux_arr, two_rarefaction_speeds};
use crate::lcd::{build_frame, roe_average_arr, Direction, MulCounter};
use crate::limiter::{limit_interface_values, AdmissibleSet};
use crate::weno::{weno_interpolate, weno_interpolate_right};

use super::SchemeConfig;

/// Counters accumulated by the kernel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KernelTally {
    pub mults: MulCounter,
    pub left_calls: u64,
    pub right_calls: u64,
    pub interfaces: u64,
    pub interp_activations: u64,
}

/// Per-interface results of one sweep.
pub(crate) struct LineFluxes<'a, const M: usize> {
    pub high: &'a mut [[f64; M]],
    pub low: Option<&'a mut [[f64; M]]>,
    pub speed: &'a mut [f64],
}

pub(crate) struct LineKernel<const M: usize> {
    scheme: SchemeConfig,
    set: AdmissibleSet,
    flux: Vec<[f64; M]>,
    basis: Vec<[f64; M]>,
    prim: Vec<PrimitiveState>,
    pub tally: KernelTally,
}

/// Failure at a line cell index.
pub(crate) type LineError = (usize, Error);

impl<const M: usize> LineKernel<M> {
    pub fn new(scheme: SchemeConfig) -> Self {
        Self {
            scheme,
            set: AdmissibleSet::for_backend(scheme.backend),
            flux: Vec::new(),
            basis: Vec::new(),
            prim: Vec::new(),
            tally: KernelTally::default(),
        }
    }

    /// Fluxes at the `n + 1` interfaces of a line holding `n` interior cells
    /// between `ghost` ghost cells on each side.
    pub fn sweep(
        &mut self,
        gas: &GasModel,
        line: &[[f64; M]],
        ghost: usize,
        out: LineFluxes<'_, M>,
    ) -> std::result::Result<(), LineError> {
        let order = self.scheme.order;
        let r = order.r();
        debug_assert!(ghost >= r);
        let len = line.len();
        let n = len - 2 * ghost;
        let transform = self.scheme.backend.uses_transform();

        self.flux.clear();
        self.basis.clear();
        self.prim.clear();
        for (idx, q) in line.iter().enumerate() {
            let w = gas.cons_array_to_prim(q).map_err(|e| (idx, e))?;
            self.flux.push(physical_flux_arr(q, gas));
            self.basis.push(if transform {
                gas.prim_to_transform_array::<M>(&w)
            } else {
                *q
            });
            self.prim.push(w);
        }
        if transform {
            self.tally.mults.transforms += len as u64;
        }

        let LineFluxes { high, mut low, speed } = out;
        let limiter = self.scheme.limiter;
        let eps = self.scheme.epsilon;
        let mut w = [[0.0; M]; 10];
        let mut col = [0.0; 10];

        for k in 0..=n {
            let il = ghost + k - 1;
            let ir = il + 1;
            let fail = |e: Error| (il, e);

            // (a) frame at the Roe average of the adjacent cells
            let roe = roe_average_arr(&line[il], &line[ir], gas).map_err(fail)?;
            let frame = build_frame::<M>(&roe, gas, self.scheme.backend, self.scheme.matvec, Direction::X);

            // (b) project the 2r-point stencil shared by both interpolations
            let base = il + 1 - r;
            for s in 0..2 * r {
                w[s] = frame.to_characteristic(&self.basis[base + s], &mut self.tally.mults);
            }
            self.tally.left_calls += 2 * r as u64;

            // (c) left- and right-biased interpolation per field
            let mut wm = [0.0; M];
            let mut wp = [0.0; M];
            for m in 0..M {
                for s in 0..2 * r {
                    col[s] = w[s][m];
                }
                wm[m] = weno_interpolate(&col[..2 * r - 1], order, eps);
                wp[m] = weno_interpolate_right(&col[1..2 * r], order, eps);
            }

            // (d) back to the basis, limit, then to conserved variables
            let mut vm = frame.from_characteristic(&wm, &mut self.tally.mults);
            let mut vp = frame.from_characteristic(&wp, &mut self.tally.mults);
            self.tally.right_calls += 2;
            if limiter.interpolation {
                for (face, node) in [(&mut vm, &self.basis[il]), (&mut vp, &self.basis[ir])] {
                    let theta = limit_interface_values(node, std::slice::from_mut(face), self.set, &limiter)
                        .map_err(fail)?;
                    if theta < 1.0 {
                        self.tally.interp_activations += 1;
                    }
                }
            }
            let (qm, pm, qp, pp) = if transform {
                self.tally.mults.transforms += 2;
                let pm = gas.transform_array_to_prim(&vm).map_err(fail)?;
                let pp = gas.transform_array_to_prim(&vp).map_err(fail)?;
                (gas.prim_to_cons_array::<M>(&pm), pm, gas.prim_to_cons_array::<M>(&pp), pp)
            } else {
                let pm = gas.cons_array_to_prim(&vm).map_err(fail)?;
                let pp = gas.cons_array_to_prim(&vp).map_err(fail)?;
                (vm, pm, vp, pp)
            };

            // (e) low-order HLL flux from the interface states
            let face_roe = roe_average_arr(&qm, &qp, gas).map_err(fail)?;
            let speeds = einfeldt_speeds(&pm, &pp, &face_roe, gas);
            let f_low = hll_flux_arr(
                &qm,
                &qp,
                &physical_flux_arr(&qm, gas),
                &physical_flux_arr(&qp, gas),
                &speeds,
            )
            .map_err(fail)?;

            // (f) central correction
            let cor = flux_correction_arr(&self.flux[base..base + 2 * r], r);
            let mut f = f_low;
            for m in 0..M {
                f[m] += cor[m];
            }
            high[k] = f;

            // Positive first-order flux for the flux limiter; its speed bound
            // always enters the CFL estimate so that dt does not depend on
            // whether the limiter is switched on.
            let safe = two_rarefaction_speeds(&self.prim[il], &self.prim[ir], gas);
            if let Some(low) = low.as_deref_mut() {
                low[k] = hll_flux_arr(&line[il], &line[ir], &self.flux[il], &self.flux[ir], &safe).map_err(fail)?;
            }
            speed[k] = speeds.max_abs().max(safe.max_abs());
        }
        self.tally.interfaces += (n + 1) as u64;
        Ok(())
    }
}
