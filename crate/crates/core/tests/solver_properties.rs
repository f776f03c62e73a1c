use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use aweno::bench::{run, RunConfig};
use aweno::eos::{GasModel, PrimitiveState};
use aweno::flux::physical_flux_arr;
use aweno::lcd::LcdBackend;
use aweno::problems::{exact_accuracy2, solve_burgers_characteristic, ProblemId};
use aweno::solver::{ssprk3_step, BoundarySpec, Grid, SchemeConfig, Solver, SolverConfig, SourceSpec, TimeControl};
use aweno::weno::WenoOrder;

fn periodic(scheme: SchemeConfig) -> SolverConfig {
    SolverConfig {
        scheme,
        boundary: BoundarySpec::periodic(),
        source: SourceSpec::default(),
        time: TimeControl::new(0.5, f64::INFINITY),
        max_retries: 0,
    }
}

fn wave(x: f64) -> PrimitiveState {
    PrimitiveState::new_1d(1.0 + 0.3 * (PI * x).sin(), 0.4 + 0.1 * (PI * x).cos(), 1.0 + 0.2 * (PI * x).sin())
}

#[test]
fn x_only_data_in_2d_matches_1d() {
    for backend in LcdBackend::ALL {
        let scheme = SchemeConfig::new(WenoOrder::Five, backend);
        let g1 = Grid::new_1d(0.0, 2.0, 32, 3).unwrap();
        let g2 = Grid::new_2d((0.0, 2.0), (0.0, 1.0), 32, 6, 3).unwrap();
        let mut s1 = Solver::<3>::new(GasModel::air(), g1, periodic(scheme), |x, _| wave(x)).unwrap();
        let mut s2 = Solver::<4>::new(GasModel::air(), g2, periodic(scheme), |x, _| wave(x)).unwrap();
        let (r1, _) = s1.semidiscrete_rhs().unwrap();
        let (r2, _) = s2.semidiscrete_rhs().unwrap();
        for j in 0..6 {
            for i in 0..32 {
                let (a, b) = (r1[i], r2[j * 32 + i]);
                assert!((a[0] - b[0]).abs() < 1e-12, "{backend}");
                assert!((a[1] - b[1]).abs() < 1e-12, "{backend}");
                assert!((a[2] - b[3]).abs() < 1e-12, "{backend}");
                assert_eq!(b[2], 0.0, "{backend}");
            }
        }
    }
}

#[test]
fn swapping_axes_transposes_the_operator() {
    let f = |x: f64, y: f64| {
        PrimitiveState::new(
            1.0 + 0.3 * (PI * x).sin() * (PI * y).cos(),
            0.3 * (PI * y).sin(),
            -0.2 * (PI * x).cos(),
            1.0 + 0.1 * (PI * (x + 2.0 * y)).sin(),
        )
    };
    let n = 16;
    for backend in LcdBackend::ALL {
        let scheme = SchemeConfig::new(WenoOrder::Seven, backend);
        let grid = Grid::new_2d((0.0, 2.0), (0.0, 2.0), n, n, 4).unwrap();
        let mut a = Solver::<4>::new(GasModel::air(), grid, periodic(scheme), f).unwrap();
        let mut b = Solver::<4>::new(GasModel::air(), grid, periodic(scheme), |x, y| f(y, x).swap_uv()).unwrap();
        let (ra, rate_a) = a.semidiscrete_rhs().unwrap();
        let (rb, rate_b) = b.semidiscrete_rhs().unwrap();
        assert!((rate_a - rate_b).abs() <= 1e-14 * rate_a);
        for j in 0..n {
            for i in 0..n {
                let (p, q) = (ra[j * n + i], rb[i * n + j]);
                for (m, mm) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                    assert!((p[m] - q[mm]).abs() < 1e-11, "{backend} ({i}, {j}) {m}: {} vs {}", p[m], q[mm]);
                }
            }
        }
    }
}

#[test]
fn limiters_are_bitwise_inactive_on_smooth_data() {
    for backend in LcdBackend::ALL {
        let mut on = RunConfig::new(ProblemId::Accuracy1, WenoOrder::Five, backend);
        on.nx = Some(40);
        let mut off = on.clone();
        (off.pp_interp, off.pp_flux) = (false, false);
        let a = run(&on).unwrap();
        let b = run(&off).unwrap();
        assert_eq!(a.stats.interp_limiter_activations, 0);
        assert_eq!(a.stats.flux_limiter_activations, 0);
        assert_eq!(a.stats.steps, b.stats.steps);
        for (x, y) in a.snapshot.states.iter().zip(&b.snapshot.states) {
            assert_eq!(x, y, "{backend}");
        }
    }
}

#[test]
fn backends_agree_on_smooth_solutions() {
    let mut errs = Vec::new();
    let mut density = Vec::new();
    for backend in LcdBackend::ALL {
        let mut cfg = RunConfig::new(ProblemId::Accuracy2, WenoOrder::Five, backend);
        cfg.nx = Some(80);
        let out = run(&cfg).unwrap();
        errs.push(out.errors.unwrap().l2);
        density.push(out.snapshot.density());
    }
    assert!(errs.iter().all(|&e| e < 1e-4), "{errs:?}");
    for d in &density[1..] {
        let diff = d.iter().zip(&density[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-3, "{diff}");
    }
}

#[test]
fn periodic_runs_conserve_totals() {
    let scheme = SchemeConfig::new(WenoOrder::Nine, LcdBackend::ChRi);
    let grid = Grid::new_1d(-1.0, 1.0, 50, 5).unwrap();
    let mut s = Solver::<3>::new(GasModel::air(), grid, periodic(scheme), |x, _| {
        // a weak shock forms but the totals may not move
        PrimitiveState::new_1d(1.0 + 0.5 * (PI * x).sin(), (PI * x).cos(), 1.0)
    })
    .unwrap();
    let start = s.totals();
    s.advance_to(0.6).unwrap();
    let end = s.totals();
    for m in 0..3 {
        assert!((end[m] - start[m]).abs() < 1e-12 * (1.0 + start[m].abs()), "{m}");
    }
    assert!(s.conservation_drift() < 1e-12);
}

#[test]
fn gravity_source_on_a_uniform_state() {
    // uniform periodic state: the fluxes cancel and only rho g and rho v.g remain
    let grid = Grid::new_2d((0.0, 0.25), (0.0, 1.0), 4, 16, 3).unwrap();
    let cfg = SolverConfig {
        source: SourceSpec { gravity: (0.0, -1.0) },
        ..periodic(SchemeConfig::new(WenoOrder::Five, LcdBackend::ChRi))
    };
    let mut s = Solver::<4>::new(GasModel::air(), grid, cfg, |_, _| PrimitiveState::new(2.0, 0.0, 0.5, 1.0)).unwrap();
    let (rhs, _) = s.semidiscrete_rhs().unwrap();
    for r in rhs {
        assert!(r[0].abs() < 1e-13 && r[1].abs() < 1e-13);
        assert!((r[2] + 2.0).abs() < 1e-12, "{}", r[2]);
        assert!((r[3] + 1.0).abs() < 1e-12, "{}", r[3]);
    }
}

#[test]
fn ssp_rk3_is_third_order() {
    let solve = |steps: usize| {
        let dt = 1.0 / steps as f64;
        let mut u = vec![1.0, 0.0];
        for n in 0..steps {
            // u'' = -u written as a system, plus a time-dependent forcing
            ssprk3_step(&mut u, n as f64 * dt, dt, |v, t, out| {
                out[0] = v[1];
                out[1] = -v[0] + t.cos();
                Ok(())
            })
            .unwrap();
        }
        // x'' + x = cos t, x(0) = 1, x'(0) = 0 -> x = cos t + t sin t / 2
        (u[0] - (1.0f64.cos() + 0.5 * 1.0f64.sin())).abs()
    };
    let (e1, e2) = (solve(40), solve(80));
    let order = (e1 / e2).log2();
    assert!((order - 3.0).abs() < 0.15, "{order}");
}

/// Sixth-order central first derivative.
fn d6(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (45.0 * (f(x + h) - f(x - h)) - 9.0 * (f(x + 2.0 * h) - f(x - 2.0 * h)) + (f(x + 3.0 * h) - f(x - 3.0 * h)))
        / (60.0 * h)
}

#[test]
fn burgers_characteristic_solves_the_pde() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let x = rng.gen_range(-1.0..1.0);
        let t = rng.gen_range(0.01..0.25);
        let j = |x: f64, t: f64| solve_burgers_characteristic(x, t).unwrap();
        let h = 5e-4;
        let jt = d6(|s| j(x, s), t, h);
        let jx = d6(|s| j(s, t), x, h);
        let res = jt + j(x, t) * jx;
        assert!(res.abs() < 1e-10, "x = {x}, t = {t}: {res}");
    }
}

#[test]
fn accuracy2_exact_state_solves_euler() {
    let gas = GasModel::new(3.0).unwrap();
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..100 {
        let x = rng.gen_range(-1.0..1.0);
        let t = rng.gen_range(0.01..0.2);
        let q = |x: f64, t: f64| gas.prim_to_cons_array::<3>(&exact_accuracy2(x, t).unwrap());
        let f = |x: f64, t: f64| physical_flux_arr(&q(x, t), &gas);
        let h = 5e-4;
        for m in 0..3 {
            let res = d6(|s| q(x, s)[m], t, h) + d6(|s| f(s, t)[m], x, h);
            assert!(res.abs() < 1e-9, "component {m} at x = {x}, t = {t}: {res}");
        }
    }
}

#[test]
fn burgers_characteristic_matches_a_fine_upwind_solution() {
    // first-order Godunov for J_t + (J^2/2)_x = 0 on [-1, 1], periodic
    let n = 20_000;
    let h = 2.0 / n as f64;
    let mut u: Vec<f64> = (0..n).map(|i| (PI * (-1.0 + (i as f64 + 0.5) * h)).sin()).collect();
    let flux = |a: f64, b: f64| {
        // exact Riemann flux of Burgers
        if a <= b {
            if a > 0.0 {
                0.5 * a * a
            } else if b < 0.0 {
                0.5 * b * b
            } else {
                0.0
            }
        } else if a + b > 0.0 {
            0.5 * a * a
        } else {
            0.5 * b * b
        }
    };
    let (t_end, mut t) = (0.2, 0.0);
    let mut f = vec![0.0; n];
    while t < t_end {
        let dt = (0.45 * h).min(t_end - t);
        for i in 0..n {
            f[i] = flux(u[i], u[(i + 1) % n]);
        }
        for i in 0..n {
            u[i] -= dt / h * (f[i] - f[(i + n - 1) % n]);
        }
        t += dt;
    }
    // cell centre nearest to x = 0.3
    let i = ((0.3 + 1.0) / h - 0.5).round() as usize;
    let xc = -1.0 + (i as f64 + 0.5) * h;
    let exact = solve_burgers_characteristic(xc, 0.2).unwrap();
    assert!((u[i] - exact).abs() < 5e-4, "{} vs {exact}", u[i]);
}

#[test]
fn leblanc_triggers_the_flux_limiter_and_stays_positive() {
    let mut cfg = RunConfig::new(ProblemId::Leblanc, WenoOrder::Five, LcdBackend::ChRi);
    cfg.nx = Some(400);
    let out = run(&cfg).unwrap();
    assert!(out.stats.flux_limiter_activations > 0);
    assert!(out.stats.min_density > 0.0 && out.stats.min_pressure > 0.0);
}
