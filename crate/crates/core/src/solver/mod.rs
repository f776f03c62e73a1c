//! Grid, boundary conditions, the semi-discrete operator and time stepping.

mod boundary;
mod grid;
mod kernel;
mod time;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use boundary::{fill_ghosts, BoundaryCondition, BoundarySpec, ShockTrace};
pub use grid::{Field, Grid};
pub use kernel::KernelTally;
pub use time::{clip_to_end, select_dt, ssprk3_step, TimeControl};

use crate::eos::{internal_energy, GasModel, PrimitiveState};
use crate::error::{Error, Result};
use crate::flux::physical_flux_arr;
use crate::lcd::{ConMatvec, LcdBackend, MulCounter};
use crate::limiter::{pp_flux_limit, FluxLimitSides, LimiterConfig};
use crate::weno::{WenoOrder, DEFAULT_EPSILON};
use kernel::{LineFluxes, LineKernel};

/// Spatial discretisation choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub order: WenoOrder,
    pub backend: LcdBackend,
    pub matvec: ConMatvec,
    pub epsilon: f64,
    pub limiter: LimiterConfig,
}

impl SchemeConfig {
    pub fn new(order: WenoOrder, backend: LcdBackend) -> Self {
        Self {
            order,
            backend,
            matvec: ConMatvec::default(),
            epsilon: DEFAULT_EPSILON,
            limiter: LimiterConfig::default(),
        }
    }
}

/// Body force; adds `rho g` to the momentum and `rho u.g` to the energy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub gravity: (f64, f64),
}

impl SourceSpec {
    pub fn is_zero(&self) -> bool {
        self.gravity == (0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub scheme: SchemeConfig,
    pub boundary: BoundarySpec,
    pub source: SourceSpec,
    pub time: TimeControl,
    /// Step retries with halved dt after a numerical failure (limiters on only).
    pub max_retries: u32,
}

/// Diagnostics accumulated over a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub steps: u64,
    pub stages: u64,
    pub interfaces: u64,
    /// Minima over every interior node of every accepted stage.
    pub min_density: f64,
    pub min_pressure: f64,
    pub interp_limiter_activations: u64,
    pub flux_limiter_activations: u64,
    pub retries: u64,
    pub mults: MulCounter,
    pub left_calls: u64,
    pub right_calls: u64,
    pub wall_seconds: f64,
    pub initial_totals: Vec<f64>,
    /// `sum_j |u_j| |cell|` per component at the start, the drift scale.
    pub initial_magnitudes: Vec<f64>,
}

impl RunStats {
    /// Multiplications per left eigenmatrix action.
    pub fn left_mults_per_call(&self) -> f64 {
        if self.left_calls == 0 {
            0.0
        } else {
            self.mults.left as f64 / self.left_calls as f64
        }
    }
}

/// Interface data of one stage.
struct FluxField<const M: usize> {
    fx: Vec<[f64; M]>,
    fx_low: Vec<[f64; M]>,
    ax: Vec<f64>,
    gy: Vec<[f64; M]>,
    gy_low: Vec<[f64; M]>,
    ay: Vec<f64>,
}

/// A-WENO solver for `M = 3` (1D) or `M = 4` (2D) conserved components.
pub struct Solver<const M: usize> {
    gas: GasModel,
    grid: Grid,
    cfg: SolverConfig,
    q: Field<M>,
    t: f64,
    kernel: LineKernel<M>,
    fluxes: FluxField<M>,
    line: Vec<[f64; M]>,
    stats: RunStats,
    dt_scale: f64,
    last_dt: f64,
}

#[inline]
fn swap_normal<const M: usize>(mut q: [f64; M]) -> [f64; M] {
    if M == 4 {
        q.swap(1, 2);
    }
    q
}

impl<const M: usize> Solver<M> {
    /// Builds a solver with cell values sampled from `init(x, y)` at cell centres.
    pub fn new(
        gas: GasModel,
        grid: Grid,
        cfg: SolverConfig,
        init: impl Fn(f64, f64) -> PrimitiveState,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.cells());
        for j in 0..grid.ny as isize {
            for i in 0..grid.nx as isize {
                values.push(gas.prim_to_cons_array::<M>(&init(grid.x(i), grid.y(j))));
            }
        }
        Self::from_conserved(gas, grid, cfg, &values)
    }

    /// Builds a solver from interior conserved values, x fastest.
    pub fn from_conserved(gas: GasModel, mut grid: Grid, cfg: SolverConfig, values: &[[f64; M]]) -> Result<Self> {
        if (M == 4) != grid.is_2d() || !(M == 3 || M == 4) {
            return Err(Error::Config(format!("{M} components do not match a {}D grid", grid.dim())));
        }
        if values.len() != grid.cells() {
            return Err(Error::Config(format!(
                "expected {} initial values, got {}",
                grid.cells(),
                values.len()
            )));
        }
        cfg.time.validate()?;
        cfg.scheme.limiter.validate()?;
        cfg.boundary.validate(&grid)?;
        let r = cfg.scheme.order.r();
        grid.ghost = grid.ghost.max(r);
        if grid.nx < r || (grid.is_2d() && grid.ny < r) {
            return Err(Error::Config(format!("grid too small for WENO{}", cfg.scheme.order.k())));
        }
        let mut q = Field::new(&grid);
        q.set_interior(values);
        let (nx, ny) = (grid.nx, grid.ny);
        let two_d = grid.is_2d();
        let fluxes = FluxField {
            fx: vec![[0.0; M]; (nx + 1) * ny],
            fx_low: if cfg.scheme.limiter.flux { vec![[0.0; M]; (nx + 1) * ny] } else { Vec::new() },
            ax: vec![0.0; (nx + 1) * ny],
            gy: if two_d { vec![[0.0; M]; nx * (ny + 1)] } else { Vec::new() },
            gy_low: if two_d && cfg.scheme.limiter.flux { vec![[0.0; M]; nx * (ny + 1)] } else { Vec::new() },
            ay: if two_d { vec![0.0; nx * (ny + 1)] } else { Vec::new() },
        };
        let mut solver = Self {
            gas,
            grid,
            cfg,
            q,
            t: 0.0,
            kernel: LineKernel::new(cfg.scheme),
            fluxes,
            line: Vec::with_capacity(nx.max(ny) + 2 * grid.ghost),
            stats: RunStats {
                min_density: f64::INFINITY,
                min_pressure: f64::INFINITY,
                ..RunStats::default()
            },
            dt_scale: 1.0,
            last_dt: 0.0,
        };
        let mins = solver.check_admissible().map_err(|e| e.at_cell((0, 0), 0.0))?;
        solver.record_minima(mins);
        solver.stats.initial_totals = solver.totals().to_vec();
        solver.stats.initial_magnitudes = solver.magnitudes().to_vec();
        Ok(solver)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn field(&self) -> &Field<M> {
        &self.q
    }

    pub fn last_dt(&self) -> f64 {
        self.last_dt
    }

    /// Run statistics including kernel counters.
    pub fn stats(&self) -> RunStats {
        let mut s = self.stats.clone();
        let tally = self.kernel.tally;
        s.mults = tally.mults;
        s.left_calls = tally.left_calls;
        s.right_calls = tally.right_calls;
        s.interfaces = tally.interfaces;
        s.interp_limiter_activations = tally.interp_activations;
        s
    }

    /// Interior conserved values, x fastest.
    pub fn conserved(&self) -> Vec<[f64; M]> {
        self.q.interior()
    }

    /// Interior primitive states, x fastest.
    pub fn primitives(&self) -> Result<Vec<PrimitiveState>> {
        self.q.interior().iter().map(|q| self.gas.cons_array_to_prim(q)).collect()
    }

    /// `sum_j u_j |cell|` per component.
    pub fn totals(&self) -> [f64; M] {
        let vol = self.grid.cell_volume();
        let mut out = [0.0; M];
        for q in self.q.interior() {
            for m in 0..M {
                out[m] += q[m];
            }
        }
        out.map(|x| x * vol)
    }

    fn magnitudes(&self) -> [f64; M] {
        let vol = self.grid.cell_volume();
        let mut out = [0.0; M];
        for q in self.q.interior() {
            for m in 0..M {
                out[m] += q[m].abs();
            }
        }
        out.map(|x| x * vol)
    }

    /// Largest change of the totals since the start of the run, per component
    /// relative to the initial `sum |u| |cell|` (so zero net momentum is fine).
    pub fn conservation_drift(&self) -> f64 {
        let now = self.totals();
        self.stats
            .initial_totals
            .iter()
            .zip(&self.stats.initial_magnitudes)
            .zip(now.iter())
            .map(|((a, s), b)| if *s > 0.0 { (b - a).abs() / s } else { b.abs() })
            .fold(0.0, f64::max)
    }

    fn record_minima(&mut self, (rho, p): (f64, f64)) {
        self.stats.min_density = self.stats.min_density.min(rho);
        self.stats.min_pressure = self.stats.min_pressure.min(p);
    }

    /// Semi-discrete operator at the current state: `du/dt` for the interior
    /// (x fastest) and the largest cell rate `alpha/dx (+ beta/dy)`. Flux
    /// limiting is not applied since it needs a time step.
    pub fn semidiscrete_rhs(&mut self) -> Result<(Vec<[f64; M]>, f64)> {
        let t = self.t;
        fill_ghosts(&mut self.q, &self.grid, &self.cfg.boundary, &self.gas, t);
        self.compute_fluxes(t)?;
        let rate = self.max_rate();
        let mut rhs = vec![[0.0; M]; self.grid.cells()];
        self.divergence(&mut rhs);
        Ok((rhs, rate))
    }

    /// Advances to the configured end time.
    pub fn advance(&mut self) -> Result<()> {
        self.advance_to(self.cfg.time.t_end)
    }

    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        while self.t < t_end {
            self.step_until(t_end)?;
        }
        Ok(())
    }

    /// One step with CFL-selected dt, clipped to the configured end time.
    pub fn step(&mut self) -> Result<f64> {
        self.step_until(self.cfg.time.t_end)
    }

    /// One step with CFL-selected dt and no end-time clipping.
    pub fn step_unclipped(&mut self) -> Result<f64> {
        self.step_until(f64::INFINITY)
    }

    fn step_until(&mut self, t_end: f64) -> Result<f64> {
        let start = Instant::now();
        let saved = self.q.data.clone();
        let mut forced: Option<f64> = None;
        let mut attempt = 0;
        let limiters_on = self.cfg.scheme.limiter.interpolation || self.cfg.scheme.limiter.flux;
        let result = loop {
            match self.try_step(forced, t_end) {
                Ok(dt) => break Ok(dt),
                Err((e, dt)) => {
                    self.q.data.copy_from_slice(&saved);
                    if !limiters_on || attempt >= self.cfg.max_retries || !e.is_numerical() || dt <= 0.0 {
                        break Err(e);
                    }
                    attempt += 1;
                    self.stats.retries += 1;
                    log::warn!("step at t = {} failed ({e}); retrying with dt = {}", self.t, 0.5 * dt);
                    forced = Some(0.5 * dt);
                }
            }
        };
        self.stats.wall_seconds += start.elapsed().as_secs_f64();
        let dt = result?;
        self.t += dt;
        if self.t > t_end * (1.0 - 1e-15) && t_end.is_finite() {
            self.t = t_end;
        }
        self.stats.steps += 1;
        self.last_dt = dt;
        Ok(dt)
    }

    /// Three-stage SSP-RK update. On failure returns the error and the dt tried.
    fn try_step(&mut self, forced: Option<f64>, t_end: f64) -> std::result::Result<f64, (Error, f64)> {
        let t0 = self.t;
        let u0 = self.q.interior();
        let n = u0.len();
        let mut rhs = vec![[0.0; M]; n];
        let mut stage = u0.clone();

        fill_ghosts(&mut self.q, &self.grid, &self.cfg.boundary, &self.gas, t0);
        self.compute_fluxes(t0).map_err(|e| (e, 0.0))?;
        let dt = match forced {
            Some(dt) => dt,
            None => {
                let h = if self.grid.is_2d() {
                    self.grid.dx().max(self.grid.dy())
                } else {
                    self.grid.dx()
                };
                let dt = select_dt(self.max_rate(), h, self.cfg.scheme.order, &self.cfg.time) * self.dt_scale;
                if t_end.is_finite() {
                    clip_to_end(t0, dt, t_end)
                } else {
                    dt
                }
            }
        };
        let fail = |e: Error| (e, dt);
        let mut activated = false;
        let mut mins = (f64::INFINITY, f64::INFINITY);

        // Shu-Osher coefficients: u(s) = a u0 + b (u(s-1) + dt L(u(s-1)))
        let stages = [(0.0, 1.0, 0.0), (0.75, 0.25, 1.0), (1.0 / 3.0, 2.0 / 3.0, 0.5)];
        for (s, &(a, b, _)) in stages.iter().enumerate() {
            if s > 0 {
                let ts = t0 + stages[s].2 * dt;
                fill_ghosts(&mut self.q, &self.grid, &self.cfg.boundary, &self.gas, ts);
                self.compute_fluxes(ts).map_err(fail)?;
            }
            activated |= self.limit_fluxes(dt) > 0;
            self.divergence(&mut rhs);
            for i in 0..n {
                for m in 0..M {
                    stage[i][m] = a * u0[i][m] + b * (stage[i][m] + dt * rhs[i][m]);
                }
            }
            self.q.set_interior(&stage);
            self.stats.stages += 1;
            let (r, p) = self.check_admissible().map_err(fail)?;
            mins = (mins.0.min(r), mins.1.min(p));
        }
        self.record_minima(mins);
        if self.cfg.scheme.limiter.flux {
            self.dt_scale = if activated {
                self.cfg.scheme.limiter.strict_cfl_factor
            } else {
                1.0
            };
        }
        Ok(dt)
    }

    /// Interior admissibility check; returns the density and pressure minima.
    fn check_admissible(&self) -> Result<(f64, f64)> {
        let t = self.t;
        let nx = self.grid.nx;
        let gm1 = self.gas.gamma() - 1.0;
        let (mut min_rho, mut min_p) = (f64::INFINITY, f64::INFINITY);
        for j in 0..self.grid.ny {
            for i in 0..nx {
                let q = self.q.get(i as isize, j as isize);
                let p = gm1 * internal_energy(q);
                min_rho = min_rho.min(q[0]);
                min_p = min_p.min(p);
                if !(q[0] > 0.0) {
                    return Err(Error::NonPositiveDensity { density: q[0] }.at_cell((i, j), t));
                }
                if !(p > 0.0) {
                    return Err(Error::NonPositivePressure {
                        density: q[0],
                        pressure: p,
                    }
                    .at_cell((i, j), t));
                }
            }
        }
        Ok((min_rho, min_p))
    }

    fn compute_fluxes(&mut self, t: f64) -> Result<()> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let g = self.q.ghost();
        let flux_lim = self.cfg.scheme.limiter.flux;
        for j in 0..ny {
            let range = j * (nx + 1)..(j + 1) * (nx + 1);
            let out = LineFluxes {
                high: &mut self.fluxes.fx[range.clone()],
                low: if flux_lim { Some(&mut self.fluxes.fx_low[range.clone()]) } else { None },
                speed: &mut self.fluxes.ax[range],
            };
            self.kernel
                .sweep(&self.gas, self.q.row(j as isize), g, out)
                .map_err(|(idx, e)| e.at_cell((idx.saturating_sub(g), j), t))?;
        }
        if !self.grid.is_2d() {
            return Ok(());
        }
        // y-sweeps on gathered columns with (rho v) moved to the normal slot
        let mut high = vec![[0.0; M]; ny + 1];
        let mut low = vec![[0.0; M]; if flux_lim { ny + 1 } else { 0 }];
        let mut speed = vec![0.0; ny + 1];
        for i in 0..nx {
            self.line.clear();
            for jj in -(g as isize)..(ny + g) as isize {
                self.line.push(swap_normal(*self.q.get(i as isize, jj)));
            }
            let out = LineFluxes {
                high: &mut high,
                low: if flux_lim { Some(&mut low) } else { None },
                speed: &mut speed,
            };
            self.kernel
                .sweep(&self.gas, &self.line, g, out)
                .map_err(|(idx, e)| e.at_cell((i, idx.saturating_sub(g)), t))?;
            for k in 0..=ny {
                let at = k * nx + i;
                self.fluxes.gy[at] = swap_normal(high[k]);
                if flux_lim {
                    self.fluxes.gy_low[at] = swap_normal(low[k]);
                }
                self.fluxes.ay[at] = speed[k];
            }
        }
        Ok(())
    }

    /// Cell rates `alpha/dx` (1D: per interface) and `(alpha/dx, beta/dy)` per cell.
    #[inline]
    fn cell_rates(&self, i: usize, j: usize) -> (f64, f64) {
        let nx = self.grid.nx;
        let f = &self.fluxes;
        let ax = f.ax[j * (nx + 1) + i].max(f.ax[j * (nx + 1) + i + 1]) / self.grid.dx();
        if self.grid.is_2d() {
            let ay = f.ay[j * nx + i].max(f.ay[(j + 1) * nx + i]) / self.grid.dy();
            (ax, ay)
        } else {
            (ax, 0.0)
        }
    }

    fn max_rate(&self) -> f64 {
        if !self.grid.is_2d() {
            let dx = self.grid.dx();
            return self.fluxes.ax.iter().fold(0.0f64, |m, a| m.max(*a)) / dx;
        }
        let mut rate = 0.0f64;
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                let (a, b) = self.cell_rates(i, j);
                rate = rate.max(a + b);
            }
        }
        rate
    }

    /// Applies the flux limiter for a forward-Euler substep of size `dt`;
    /// returns the number of limited interfaces.
    fn limit_fluxes(&mut self, dt: f64) -> u64 {
        let lim = self.cfg.scheme.limiter;
        if !lim.flux {
            return 0;
        }
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let two_d = self.grid.is_2d();
        let (dx, dy) = (self.grid.dx(), self.grid.dy());
        // Effective mesh ratio of cell (i, j) for the split update in direction d.
        let lambda = |s: &Self, i: isize, j: isize, d: usize| -> f64 {
            if i < 0 || j < 0 || i >= nx as isize || j >= ny as isize {
                return 0.0;
            }
            let (a, b) = s.cell_rates(i as usize, j as usize);
            let h = if d == 0 { dx } else { dy };
            let own = if d == 0 { a } else { b };
            if !two_d || own <= 0.0 {
                2.0 * dt / h
            } else {
                2.0 * dt * (a + b) / (own * h)
            }
        };
        let gas = self.gas;
        let mut count = 0;
        for j in 0..ny {
            for k in 0..=nx {
                let at = j * (nx + 1) + k;
                let (il, ir) = (k as isize - 1, k as isize);
                let ql = *self.q.get(il, j as isize);
                let qr = *self.q.get(ir, j as isize);
                let (fl, fr) = (physical_flux_arr(&ql, &gas), physical_flux_arr(&qr, &gas));
                let sides = FluxLimitSides {
                    q_left: &ql,
                    f_left: &fl,
                    q_right: &qr,
                    f_right: &fr,
                    lambda_left: lambda(self, il, j as isize, 0),
                    lambda_right: lambda(self, ir, j as isize, 0),
                };
                let (f, theta) = pp_flux_limit(&self.fluxes.fx_low[at], &self.fluxes.fx[at], &sides, &lim);
                if theta < 1.0 {
                    self.fluxes.fx[at] = f;
                    count += 1;
                }
            }
        }
        if two_d {
            for k in 0..=ny {
                for i in 0..nx {
                    let at = k * nx + i;
                    let (jl, jr) = (k as isize - 1, k as isize);
                    let ql = swap_normal(*self.q.get(i as isize, jl));
                    let qr = swap_normal(*self.q.get(i as isize, jr));
                    let (fl, fr) = (physical_flux_arr(&ql, &gas), physical_flux_arr(&qr, &gas));
                    let sides = FluxLimitSides {
                        q_left: &ql,
                        f_left: &fl,
                        q_right: &qr,
                        f_right: &fr,
                        lambda_left: lambda(self, i as isize, jl, 1),
                        lambda_right: lambda(self, i as isize, jr, 1),
                    };
                    let low = swap_normal(self.fluxes.gy_low[at]);
                    let high = swap_normal(self.fluxes.gy[at]);
                    let (f, theta) = pp_flux_limit(&low, &high, &sides, &lim);
                    if theta < 1.0 {
                        self.fluxes.gy[at] = swap_normal(f);
                        count += 1;
                    }
                }
            }
        }
        self.stats.flux_limiter_activations += count;
        count
    }

    /// `-(F_{i+1/2} - F_{i-1/2})/dx - (G_{j+1/2} - G_{j-1/2})/dy + S`.
    fn divergence(&self, rhs: &mut [[f64; M]]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let (idx, idy) = (1.0 / self.grid.dx(), 1.0 / self.grid.dy());
        let f = &self.fluxes;
        let two_d = self.grid.is_2d();
        let (gx, gy) = self.cfg.source.gravity;
        let source = !self.cfg.source.is_zero();
        for j in 0..ny {
            for i in 0..nx {
                let out = &mut rhs[j * nx + i];
                let (a, b) = (&f.fx[j * (nx + 1) + i], &f.fx[j * (nx + 1) + i + 1]);
                for m in 0..M {
                    out[m] = -(b[m] - a[m]) * idx;
                }
                if two_d {
                    let (c, d) = (&f.gy[j * nx + i], &f.gy[(j + 1) * nx + i]);
                    for m in 0..M {
                        out[m] -= (d[m] - c[m]) * idy;
                    }
                }
                if source {
                    let q = self.q.get(i as isize, j as isize);
                    out[1] += q[0] * gx;
                    if M == 4 {
                        out[2] += q[0] * gy;
                        out[M - 1] += q[1] * gx + q[2] * gy;
                    } else {
                        out[M - 1] += q[1] * gx;
                    }
                }
            }
        }
    }
}
