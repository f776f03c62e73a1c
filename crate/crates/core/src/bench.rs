//! Run driver: configuration, error norms, convergence tables and
//! multiplication-count reports.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::eos::{GasModel, PrimitiveState};
use crate::error::{Error, Result};
use crate::lcd::{ConMatvec, LcdBackend};
use crate::limiter::LimiterConfig;
use crate::problems::{ProblemId, ProblemSpec};
use crate::snapshot::FieldSnapshot;
use crate::solver::{BoundarySpec, Grid, RunStats, SchemeConfig, Solver, SolverConfig, SourceSpec, TimeControl};
use crate::weno::WenoOrder;

/// One run of a catalog problem. Unset fields take the problem defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub order: WenoOrder,
    pub backend: LcdBackend,
    pub matvec: ConMatvec,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub gamma: Option<f64>,
    pub pp_interp: bool,
    pub pp_flux: bool,
    pub accuracy_mode: bool,
    pub h0: Option<f64>,
    /// Run on the reduced desk-scale grid when no size is given.
    pub desk: bool,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(problem: ProblemId, order: WenoOrder, backend: LcdBackend) -> Self {
        Self {
            problem,
            order,
            backend,
            matvec: ConMatvec::default(),
            nx: None,
            ny: None,
            cfl: None,
            t_end: None,
            gamma: None,
            pp_interp: true,
            pp_flux: true,
            accuracy_mode: false,
            h0: None,
            desk: false,
            out: None,
            seed: 0,
        }
    }

    /// Sets one `key = value` entry.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("bad value `{value}` for {what}"));
        let num = |what: &str| value.parse::<f64>().map_err(|_| bad(what));
        let int = |what: &str| value.parse::<usize>().map_err(|_| bad(what));
        let flag = |what: &str| match value {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            _ => Err(bad(what)),
        };
        match key {
            "problem" => self.problem = value.parse()?,
            "order" | "k" => self.order = WenoOrder::from_k(value.parse().map_err(|_| bad(key))?)?,
            "backend" => self.backend = value.parse()?,
            "matvec" => {
                self.matvec = match value {
                    "naive" => ConMatvec::Naive,
                    "split_xi" => ConMatvec::SplitXi,
                    _ => return Err(bad(key)),
                }
            }
            "n" => {
                let n = int(key)?;
                self.nx = Some(n);
                self.ny = Some(n);
            }
            "nx" => self.nx = Some(int(key)?),
            "ny" => self.ny = Some(int(key)?),
            "cfl" => self.cfl = Some(num(key)?),
            "tend" | "t_end" => self.t_end = Some(num(key)?),
            "gamma" => self.gamma = Some(num(key)?),
            "pp_interp" => self.pp_interp = flag(key)?,
            "pp_flux" => self.pp_flux = flag(key)?,
            "accuracy_mode" => self.accuracy_mode = flag(key)?,
            "h0" => self.h0 = Some(num(key)?),
            "desk" => self.desk = flag(key)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => self.seed = value.parse().map_err(|_| bad(key))?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines onto `self`; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
    }

    /// Problem spec with the overrides applied.
    pub fn spec(&self) -> ProblemSpec {
        let mut spec = ProblemSpec::get(self.problem);
        if let Some(g) = self.gamma {
            spec.gamma = g;
        }
        if let Some(t) = self.t_end {
            spec.t_end = t;
        }
        spec
    }

    pub fn scheme(&self) -> SchemeConfig {
        let mut scheme = SchemeConfig::new(self.order, self.backend);
        scheme.matvec = self.matvec;
        scheme.limiter.interpolation = self.pp_interp;
        scheme.limiter.flux = self.pp_flux;
        scheme
    }

    /// Grid size `(nx, ny)`.
    pub fn cells(&self, spec: &ProblemSpec) -> (usize, usize) {
        let (dx, dy) = if self.desk { spec.desk_cells } else { spec.cells };
        let nx = self.nx.unwrap_or(dx);
        let ny = if spec.is_2d() { self.ny.or(self.nx).unwrap_or(dy) } else { 1 };
        (nx, ny)
    }

    pub fn time_control(&self, spec: &ProblemSpec) -> TimeControl {
        let mut tc = TimeControl::new(self.cfl.unwrap_or(spec.default_cfl()), spec.t_end);
        if self.accuracy_mode {
            tc.accuracy_h0 = Some(self.h0.unwrap_or(spec.accuracy_h0()));
        }
        tc
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.spec();
        GasModel::new(spec.gamma)?;
        self.time_control(&spec).validate()?;
        let (nx, ny) = self.cells(&spec);
        if nx == 0 || ny == 0 {
            return Err(Error::Config("grid needs at least one cell".into()));
        }
        Ok(())
    }
}

/// Density error norms; weights are the cell volume.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Norms of `numeric - exact` with cell volume `vol`.
pub fn error_norms(numeric: &[f64], exact: &[f64], vol: f64) -> ErrorNorms {
    assert_eq!(numeric.len(), exact.len(), "error_norms needs equal lengths");
    let mut n = ErrorNorms::default();
    for (a, b) in numeric.iter().zip(exact) {
        let e = (a - b).abs();
        n.l1 += e;
        n.l2 += e * e;
        n.linf = n.linf.max(e);
    }
    n.l1 *= vol;
    n.l2 = (n.l2 * vol).sqrt();
    n
}

/// Result of [`run`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub snapshot: FieldSnapshot,
    pub stats: RunStats,
    pub conservation_drift: f64,
    /// Against the exact density when the problem has one.
    pub errors: Option<ErrorNorms>,
}

impl RunOutcome {
    pub fn wall_per_step(&self) -> f64 {
        if self.stats.steps == 0 {
            0.0
        } else {
            self.stats.wall_seconds / self.stats.steps as f64
        }
    }

    /// Run metadata for the snapshot header. Excludes timings so reruns give
    /// identical files.
    pub fn header_meta(&self) -> serde_json::Value {
        serde_json::json!({
            "problem": self.config.problem,
            "order": self.config.order.k(),
            "backend": self.config.backend,
            "cfl": self.config.cfl,
            "accuracy_mode": self.config.accuracy_mode,
            "pp_interp": self.config.pp_interp,
            "pp_flux": self.config.pp_flux,
            "steps": self.stats.steps,
            "seed": self.config.seed,
        })
    }

    /// Full metadata including timings and counters.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "stats": self.stats,
            "wall_per_step": self.wall_per_step(),
            "conservation_drift": self.conservation_drift,
            "errors": self.errors,
        })
    }
}

fn run_m<const M: usize>(cfg: &RunConfig, spec: &ProblemSpec) -> Result<RunOutcome> {
    let (nx, ny) = cfg.cells(spec);
    let mut solver: Solver<M> = spec.solver(cfg.scheme(), nx, ny, cfg.time_control(spec))?;
    solver.advance()?;
    let snapshot = FieldSnapshot::from_solver(&solver)?;
    let errors = match spec.exact_density(solver.grid(), solver.time()) {
        Some(exact) => Some(error_norms(&snapshot.density(), &exact?, solver.grid().cell_volume())),
        None => None,
    };
    Ok(RunOutcome {
        config: cfg.clone(),
        snapshot,
        stats: solver.stats(),
        conservation_drift: solver.conservation_drift(),
        errors,
    })
}

/// Advances the configured problem to its end time.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let spec = cfg.spec();
    if spec.is_2d() {
        run_m::<4>(cfg, &spec)
    } else {
        run_m::<3>(cfg, &spec)
    }
}

/// Writes `<dir>/<stem>.txt` and the JSON sidecar `<dir>/<stem>.json`.
pub fn emit_snapshot(outcome: &RunOutcome, dir: &Path, stem: &str) -> Result<PathBuf> {
    let txt = dir.join(format!("{stem}.txt"));
    outcome.snapshot.write_text(&txt, &outcome.header_meta())?;
    let json = dir.join(format!("{stem}.json"));
    let body = serde_json::to_string_pretty(&outcome.sidecar()).expect("sidecar serializes");
    std::fs::write(&json, body + "\n").map_err(|source| Error::Io { path: json, source })?;
    Ok(txt)
}

/// Default file stem of a run.
pub fn default_stem(cfg: &RunConfig, cells: (usize, usize)) -> String {
    if cells.1 > 1 {
        format!("{}_k{}_{}_{}x{}", cfg.problem, cfg.order.k(), cfg.backend, cells.0, cells.1)
    } else {
        format!("{}_k{}_{}_n{}", cfg.problem, cfg.order.k(), cfg.backend, cells.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l2_error: f64,
    pub l2_order: Option<f64>,
    pub linf_error: f64,
    pub linf_order: Option<f64>,
}

/// `log(e_coarse / e_fine) / log(n_fine / n_coarse)`.
pub fn observed_order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> f64 {
    (e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln()
}

/// Orders between consecutive `(n, l2, linf)` entries.
pub fn convergence_rows(errors: &[(usize, f64, f64)]) -> Vec<ConvergenceRow> {
    errors
        .iter()
        .enumerate()
        .map(|(i, &(n, l2, linf))| {
            let prev = i.checked_sub(1).map(|p| errors[p]);
            ConvergenceRow {
                n,
                l2_error: l2,
                l2_order: prev.map(|(pn, pl2, _)| observed_order(pl2, l2, pn, n)),
                linf_error: linf,
                linf_order: prev.map(|(pn, _, pli)| observed_order(pli, linf, pn, n)),
            }
        })
        .collect()
}

/// Runs `base` in accuracy mode at each `n` (square grids in 2D).
pub fn convergence_study(base: &RunConfig, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let spec = base.spec();
    if !spec.has_exact {
        return Err(Error::Config(format!("{} has no exact solution", spec.id)));
    }
    let mut errs = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut cfg = base.clone();
        cfg.accuracy_mode = true;
        cfg.nx = Some(n);
        cfg.ny = Some(n);
        let out = run(&cfg)?;
        let e = out.errors.expect("problem has an exact solution");
        log::info!("n = {n}: l2 = {:.3e}, linf = {:.3e}", e.l2, e.linf);
        errs.push((n, e.l2, e.linf));
    }
    Ok(convergence_rows(&errs))
}

/// Plain-text table in the usual error/order layout.
pub fn format_convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut s = format!("{:>6} {:>12} {:>8} {:>12} {:>8}\n", "N", "l2 error", "order", "linf error", "order");
    let ord = |o: Option<f64>| o.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
    for r in rows {
        s.push_str(&format!(
            "{:>6} {:>12.2e} {:>8} {:>12.2e} {:>8}\n",
            r.n,
            r.l2_error,
            ord(r.l2_order),
            r.linf_error,
            ord(r.linf_order)
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub order: WenoOrder,
    pub backend: LcdBackend,
    pub dim: usize,
    pub steps: u64,
    pub wall_per_step: f64,
    /// Multiplications in left eigenmatrix actions over the run.
    pub left_mults: u64,
    pub left_calls: u64,
    pub left_mults_per_call: f64,
    /// Left-action multiplications per interface per stage as counted by the
    /// solver (one projection of the 2r shared stencil points).
    pub left_mults_per_interface: f64,
    /// Same count under the 4r-projection convention.
    pub left_mults_per_interface_4r: f64,
    /// `1 - left_mults / left_mults(ch_con)`; `None` for the reference row.
    pub count_saving: Option<f64>,
    /// `1 - wall / wall(ch_con)`; informative only.
    pub wall_saving: Option<f64>,
}

/// Uniform state used for timing.
pub fn uniform_state() -> PrimitiveState {
    PrimitiveState::new(1.0, 1.0, 0.5, 1.0)
}

fn timed_steps<const M: usize>(scheme: SchemeConfig, grid: Grid, steps: u64) -> Result<RunStats> {
    let cfg = SolverConfig {
        scheme,
        boundary: BoundarySpec::periodic(),
        source: SourceSpec::default(),
        time: TimeControl::new(0.5, f64::INFINITY),
        max_retries: 0,
    };
    let w = uniform_state();
    let mut solver = Solver::<M>::new(GasModel::air(), grid, cfg, |_, _| w)?;
    for _ in 0..steps {
        solver.step_unclipped()?;
    }
    Ok(solver.stats())
}

/// Times `steps` steps of uniform flow on `n` cells (or `n x n` in 2D) for
/// every order and backend. Savings are taken against CH-CON with the same
/// order and `matvec`.
pub fn efficiency_report(
    orders: &[WenoOrder],
    backends: &[LcdBackend],
    two_d: bool,
    n: usize,
    steps: u64,
    matvec: ConMatvec,
) -> Result<Vec<EfficiencyRow>> {
    let mut rows = Vec::new();
    for &order in orders {
        let grid = if two_d {
            Grid::new_2d((0.0, 1.0), (0.0, 1.0), n, n, order.r())?
        } else {
            Grid::new_1d(0.0, 1.0, n, order.r())?
        };
        let mut group: Vec<EfficiencyRow> = Vec::new();
        for &backend in backends {
            let mut scheme = SchemeConfig::new(order, backend);
            scheme.matvec = matvec;
            scheme.limiter = LimiterConfig::default();
            let stats = if two_d {
                timed_steps::<4>(scheme, grid, steps)?
            } else {
                timed_steps::<3>(scheme, grid, steps)?
            };
            let per_iface_stage = if stats.interfaces == 0 {
                0.0
            } else {
                stats.mults.left as f64 / stats.interfaces as f64
            };
            let per_call = stats.left_mults_per_call();
            group.push(EfficiencyRow {
                order,
                backend,
                dim: if two_d { 2 } else { 1 },
                steps: stats.steps,
                wall_per_step: stats.wall_seconds / stats.steps.max(1) as f64,
                left_mults: stats.mults.left,
                left_calls: stats.left_calls,
                left_mults_per_call: per_call,
                left_mults_per_interface: per_iface_stage,
                left_mults_per_interface_4r: 4.0 * order.r() as f64 * per_call,
                count_saving: None,
                wall_saving: None,
            });
        }
        if let Some(con) = group.iter().find(|r| r.backend == LcdBackend::ChCon).copied() {
            for r in group.iter_mut().filter(|r| r.backend != LcdBackend::ChCon) {
                if con.left_mults > 0 {
                    r.count_saving = Some(1.0 - r.left_mults as f64 / con.left_mults as f64);
                }
                if con.wall_per_step > 0.0 {
                    r.wall_saving = Some(1.0 - r.wall_per_step / con.wall_per_step);
                }
            }
        }
        rows.extend(group);
    }
    Ok(rows)
}

pub fn format_efficiency_table(rows: &[EfficiencyRow]) -> String {
    let mut s = format!(
        "{:>2} {:>3} {:>8} {:>12} {:>9} {:>10} {:>10} {:>11} {:>11}\n",
        "D", "k", "backend", "s/step", "mul/call", "mul/if", "mul/if 4r", "count save", "time save"
    );
    let pct = |o: Option<f64>| o.map_or_else(|| "-".to_string(), |v| format!("{:.1}%", 100.0 * v));
    for r in rows {
        s.push_str(&format!(
            "{:>2} {:>3} {:>8} {:>12.4e} {:>9.2} {:>10.1} {:>10.1} {:>11} {:>11}\n",
            r.dim,
            r.order.k(),
            r.backend,
            r.wall_per_step,
            r.left_mults_per_call,
            r.left_mults_per_interface,
            r.left_mults_per_interface_4r,
            pct(r.count_saving),
            pct(r.wall_saving)
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_of_zero_error() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(error_norms(&a, &a, 0.5), ErrorNorms::default());
    }

    #[test]
    fn norms_single_spike() {
        let n = 8;
        let mut e = vec![0.0; n];
        e[3] = 1.0;
        let z = vec![0.0; n];
        let r = error_norms(&e, &z, 2.0 / n as f64);
        assert!((r.l2 - (2.0 / n as f64).sqrt()).abs() < 1e-15);
        assert_eq!(r.linf, 1.0);
    }

    #[test]
    fn norms_constant_error() {
        let n = 10;
        let c = 0.3;
        let r = error_norms(&vec![c; n], &vec![0.0; n], 2.0 / n as f64);
        assert!((r.l2 - c * 2f64.sqrt()).abs() < 1e-15);
        assert!((r.l1 - 2.0 * c).abs() < 1e-15);
    }

    #[test]
    fn orders_from_rows() {
        let rows = convergence_rows(&[(20, 1e-3, 2e-3), (40, 1.25e-4, 5e-4)]);
        assert!(rows[0].l2_order.is_none());
        assert!((rows[1].l2_order.unwrap() - 3.0).abs() < 1e-12);
        assert!((rows[1].linf_order.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn config_text_and_errors() {
        let mut c = RunConfig::new(ProblemId::Sod, WenoOrder::Five, LcdBackend::ChRi);
        c.apply_text("# comment\nproblem = lax\norder=7\nbackend = ch_con\nn = 64\npp_flux = off\n")
            .unwrap();
        assert_eq!(c.problem, ProblemId::Lax);
        assert_eq!(c.order, WenoOrder::Seven);
        assert_eq!(c.backend, LcdBackend::ChCon);
        assert_eq!(c.cells(&c.spec()), (64, 1));
        assert!(!c.pp_flux);
        assert!(c.apply_text("order = 4").is_err());
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("no equals sign").is_err());
    }

    #[test]
    fn desk_cells_for_2d() {
        let mut c = RunConfig::new(ProblemId::Dmr, WenoOrder::Five, LcdBackend::ChRi);
        c.desk = true;
        assert_eq!(c.cells(&c.spec()), (480, 120));
        c.nx = Some(40);
        assert_eq!(c.cells(&c.spec()), (40, 40));
    }

    #[test]
    fn short_sod_run() {
        let mut c = RunConfig::new(ProblemId::Sod, WenoOrder::Five, LcdBackend::ChRi);
        c.nx = Some(50);
        c.t_end = Some(0.2);
        let out = run(&c).unwrap();
        assert!(out.errors.unwrap().l1 < 0.05);
        assert!(out.stats.min_density > 0.0);
    }
}
