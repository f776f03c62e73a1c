use proptest::prelude::*;

use aweno::eos::{GasModel, PrimitiveState};
use aweno::flux::{
    einfeldt_speeds, flux_correction, hll_flux_arr, physical_flux_arr, two_rarefaction_speeds, WaveSpeedPair,
};
use aweno::lcd::roe_average_arr;
use aweno::problems::ExactRiemann;

fn state() -> impl Strategy<Value = PrimitiveState> {
    (0.1f64..10.0, -2.0f64..2.0, 0.1f64..10.0).prop_map(|(r, u, p)| PrimitiveState::new_1d(r, u, p))
}

fn gamma() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.4, 5.0 / 3.0, 1.2])
}

/// Star pressure by plain bisection on the textbook pressure function.
fn p_star_bisection(l: &PrimitiveState, r: &PrimitiveState, g: f64) -> f64 {
    let side = |w: &PrimitiveState, p: f64| {
        let c = (g * w.p / w.rho).sqrt();
        if p > w.p {
            let a = 2.0 / ((g + 1.0) * w.rho);
            let b = (g - 1.0) / (g + 1.0) * w.p;
            (p - w.p) * (a / (p + b)).sqrt()
        } else {
            2.0 * c / (g - 1.0) * ((p / w.p).powf((g - 1.0) / (2.0 * g)) - 1.0)
        }
    };
    let f = |p: f64| side(l, p) + side(r, p) + r.u - l.u;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn cons(gas: &GasModel, w: &PrimitiveState) -> [f64; 3] {
    gas.prim_to_cons_array::<3>(w)
}

/// Relative residual of `s [U] = [F]` across a discontinuity.
fn jump_residual(gas: &GasModel, a: &PrimitiveState, b: &PrimitiveState) -> f64 {
    let (qa, qb) = (cons(gas, a), cons(gas, b));
    let (fa, fb) = (physical_flux_arr(&qa, gas), physical_flux_arr(&qb, gas));
    let s = (fb[0] - fa[0]) / (qb[0] - qa[0]);
    (1..3)
        .map(|m| ((fb[m] - fa[m]) - s * (qb[m] - qa[m])).abs() / (fb[m].abs() + fa[m].abs() + 1e-300))
        .fold(0.0, f64::max)
}

fn non_vacuum(l: &PrimitiveState, r: &PrimitiveState, g: f64) -> bool {
    let c = |w: &PrimitiveState| (g * w.p / w.rho).sqrt();
    2.0 * (c(l) + c(r)) / (g - 1.0) > (r.u - l.u) + 0.1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn star_pressure_matches_bisection(l in state(), r in state(), g in gamma()) {
        prop_assume!(non_vacuum(&l, &r, g));
        let rp = ExactRiemann::new(l, r, &GasModel::new(g).unwrap()).unwrap();
        let oracle = p_star_bisection(&l, &r, g);
        prop_assert!((rp.p_star - oracle).abs() <= 1e-10 * oracle, "{} vs {oracle}", rp.p_star);
    }

    #[test]
    fn waves_satisfy_jump_and_invariant_relations(l in state(), r in state(), g in gamma()) {
        prop_assume!(non_vacuum(&l, &r, g));
        let gas = GasModel::new(g).unwrap();
        let rp = ExactRiemann::new(l, r, &gas).unwrap();
        let us = rp.u_star;
        let eps = 1e-9 * (1.0 + us.abs());
        let star_l = rp.sample(us - eps);
        let star_r = rp.sample(us + eps);
        // contact: continuous velocity and pressure
        prop_assert!((star_l.u - star_r.u).abs() <= 1e-10 * (1.0 + us.abs()));
        prop_assert!((star_l.p - star_r.p).abs() <= 1e-10 * rp.p_star);

        for (outer, star, sign) in [(l, star_l, -1.0), (r, star_r, 1.0)] {
            if rp.p_star > outer.p * (1.0 + 1e-9) {
                prop_assert!(jump_residual(&gas, &outer, &star) <= 1e-10);
            } else if rp.p_star < outer.p * (1.0 - 1e-9) {
                // sample across the fan: entropy and the outgoing invariant are constant
                let c0 = gas.sound_speed(&outer);
                let head = outer.u + sign * c0;
                let tail = us + sign * gas.sound_speed(&star);
                let inv = |w: &PrimitiveState| w.u - sign * 2.0 * gas.sound_speed(w) / (g - 1.0);
                for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
                    let w = rp.sample(head + t * (tail - head));
                    prop_assert!((w.p / w.rho.powf(g) - outer.p / outer.rho.powf(g)).abs()
                        <= 1e-10 * outer.p / outer.rho.powf(g));
                    prop_assert!((inv(&w) - inv(&outer)).abs() <= 1e-10 * (1.0 + inv(&outer).abs()));
                    // characteristic speed equals the ray speed inside the fan
                    let ray = w.u + sign * gas.sound_speed(&w);
                    prop_assert!((ray - (head + t * (tail - head))).abs() <= 1e-9 * (1.0 + ray.abs()));
                }
            }
        }
    }

    #[test]
    fn two_rarefaction_speeds_bound_the_exact_waves(l in state(), r in state(), g in prop::sample::select(vec![1.4, 5.0 / 3.0])) {
        prop_assume!(non_vacuum(&l, &r, g));
        let gas = GasModel::new(g).unwrap();
        let rp = ExactRiemann::new(l, r, &gas).unwrap();
        let s = two_rarefaction_speeds(&l, &r, &gas);
        // outside the bound the solution is the unperturbed data
        let tol = 1e-9 * (1.0 + s.max_abs());
        prop_assert_eq!(rp.sample(s.left - tol), l);
        prop_assert_eq!(rp.sample(s.right + tol), r);
    }

    #[test]
    fn hll_is_consistent(w in state(), v in -2.0f64..2.0, g in gamma()) {
        let gas = GasModel::new(g).unwrap();
        let w = PrimitiveState::new(w.rho, w.u, v, w.p);
        let q = gas.prim_to_cons_array::<4>(&w);
        let f = physical_flux_arr(&q, &gas);
        let roe = roe_average_arr(&q, &q, &gas).unwrap();
        let s = einfeldt_speeds(&w, &w, &roe, &gas);
        let h = hll_flux_arr(&q, &q, &f, &f, &s).unwrap();
        for m in 0..4 {
            prop_assert!((h[m] - f[m]).abs() <= 1e-13 * (1.0 + f[m].abs()));
        }
    }

    #[test]
    fn hll_is_upwind_outside_the_fan(l in state(), r in state()) {
        let gas = GasModel::air();
        let (ql, qr) = (cons(&gas, &l), cons(&gas, &r));
        let (fl, fr) = (physical_flux_arr(&ql, &gas), physical_flux_arr(&qr, &gas));
        let right_moving = WaveSpeedPair { left: 0.5, right: 2.0 };
        prop_assert_eq!(hll_flux_arr(&ql, &qr, &fl, &fr, &right_moving).unwrap(), fl);
        let left_moving = WaveSpeedPair { left: -2.0, right: -0.5 };
        prop_assert_eq!(hll_flux_arr(&ql, &qr, &fl, &fr, &left_moving).unwrap(), fr);
    }
}

#[test]
fn correction_of_polynomials_matches_taylor_terms() {
    // Unit spacing, interface at 1/2. The correction must equal
    // -f''/24 + 7 f''''/5760 - ... evaluated at the interface.
    let window = |r: usize, f: &dyn Fn(f64) -> f64| -> Vec<f64> {
        (0..2 * r).map(|s| f(s as f64 - r as f64 + 1.0)).collect()
    };
    let quad = |x: f64| 3.0 * x * x - x + 2.0;
    for r in 2..=5 {
        assert!((flux_correction(&window(r, &quad), r) - (-6.0 / 24.0)).abs() < 1e-13, "r = {r}");
    }
    let quartic = |x: f64| (x - 0.5).powi(4);
    for r in 3..=5 {
        // f'' = 0 and f'''' = 24 at the interface
        let want = 7.0 * 24.0 / 5760.0;
        assert!((flux_correction(&window(r, &quartic), r) - want).abs() < 1e-12, "r = {r}");
    }
    // r = 2 keeps only the second-derivative term, computed from a 4-point stencil
    let got = flux_correction(&window(2, &quartic), 2);
    let second = (quartic(-1.0) - quartic(0.0) - quartic(1.0) + quartic(2.0)) / 2.0;
    assert!((got + second / 24.0).abs() < 1e-13);
}

#[test]
fn sod_star_state() {
    let gas = GasModel::air();
    let rp = ExactRiemann::new(
        PrimitiveState::new_1d(1.0, 0.0, 1.0),
        PrimitiveState::new_1d(0.125, 0.0, 0.1),
        &gas,
    )
    .unwrap();
    assert!((rp.p_star - 0.303_130_178_050).abs() < 1e-9);
    assert!((rp.u_star - 0.927_452_620_049).abs() < 1e-9);
}
