use std::f64::consts::{PI, TAU};

use amphase::counterexample::{
    compose_counterexample_psi, evaluate_calk, k_squared_from_phase, nonlinear_milne_residual,
    solve_pendulum_phase,
};
use amphase::milne::{
    amplitude_from_pair, compose_psi, evaluate_k, integrate_phase, polar_decompose,
    solve_milne, PolarTriple,
};
use amphase::ode::{Grid, IntegratorConfig};
use amphase::schrodinger::{
    k_squared, solve_linear, solve_linear_from, superpose, wronskian, ComplexWaveFunction,
    KSquaredProfile, PhysicalParams, Potential,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::new(-3.0, 3.0, 1201).unwrap()
}

fn rk4() -> IntegratorConfig {
    IntegratorConfig::rk4()
}

fn profile(which: u8) -> KSquaredProfile {
    let pot = match which % 3 {
        0 => Potential::Free,
        1 => Potential::Constant(0.3),
        _ => Potential::Harmonic { omega: 1.0 },
    };
    k_squared(&pot, &PhysicalParams::with_energy(0.5))
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Moduli in [0.5, 2], arguments at least ~0.1 rad away from a real pair.
fn complex_data() -> impl Strategy<Value = (Complex64, Complex64)> {
    (0.5..2.0f64, 0.0..TAU, 0.5..2.0f64, 0.3..(PI - 0.3), any::<bool>()).prop_map(
        |(r0, p0, r1, dp, flip)| {
            let p1 = if flip { p0 - dp } else { p0 + dp };
            (Complex64::from_polar(r0, p0), Complex64::from_polar(r1, p1))
        },
    )
}

fn pair(
    k2: &KSquaredProfile,
    psi0: Complex64,
    dpsi0: Complex64,
    g: &Grid,
) -> (ComplexWaveFunction, ComplexWaveFunction) {
    let f = solve_linear_from(k2, 0.0, re(psi0.re), re(dpsi0.re), g, &rk4()).unwrap();
    let h = solve_linear_from(k2, 0.0, re(psi0.im), re(dpsi0.im), g, &rk4()).unwrap();
    (f, h)
}

fn triple(k2: &KSquaredProfile, psi0: Complex64, dpsi0: Complex64, n: f64) -> PolarTriple {
    let (f, g) = pair(k2, psi0, dpsi0, &grid());
    let s0 = g.psi()[0].re.atan2(f.psi()[0].re);
    let amp = amplitude_from_pair(&f, &g).unwrap();
    let phase = integrate_phase(&amp, s0, &rk4()).unwrap();
    PolarTriple::new(n, amp, phase).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wronskian_is_conserved(which in 0u8..3, (a, b) in complex_data(), (c, d) in complex_data()) {
        let k2 = profile(which);
        let g = grid();
        let f = solve_linear(&k2, a, b, &g, &rk4()).unwrap();
        let h = solve_linear(&k2, c, d, &g, &rk4()).unwrap();
        let w = wronskian(&f, &h).unwrap();
        let scale = (0..g.n_points())
            .map(|i| (f.psi()[i] * h.psi_prime()[i]).norm() + (f.psi_prime()[i] * h.psi()[i]).norm())
            .fold(0.0, f64::max);
        prop_assert!(w.max_deviation <= 1e-9 * scale, "{} vs {}", w.max_deviation, scale);
    }

    #[test]
    fn solutions_superpose(which in 0u8..3, (a, b) in complex_data(), (c, d) in complex_data(),
                           alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let k2 = profile(which);
        let g = grid();
        let f = solve_linear(&k2, a, b, &g, &rk4()).unwrap();
        let h = solve_linear(&k2, c, d, &g, &rk4()).unwrap();
        let direct = solve_linear(&k2, a * alpha + c * beta, b * alpha + d * beta, &g, &rk4()).unwrap();
        let combined = superpose(&f, &h, re(alpha), re(beta)).unwrap();
        let scale = f.modulus().iter().chain(h.modulus().iter()).fold(1.0, |m: f64, v| m.max(*v));
        for i in 0..g.n_points() {
            prop_assert!((direct.psi()[i] - combined.psi()[i]).norm() <= 1e-12 * scale * 4.0);
        }
    }

    #[test]
    fn polar_round_trip(which in 0u8..3, (a, b) in complex_data(), n in 0.5..2.0f64) {
        let t = triple(&profile(which), a, b, n);
        let psi = compose_psi(&t);
        let back = polar_decompose(&psi, n).unwrap();
        let c = t.amp().c();
        prop_assert!((back.amp().c() - c).abs() <= 1e-9 * c.abs());
        let offset = back.phase().s()[0] - t.phase().s()[0];
        prop_assert!(((offset / TAU).round() * TAU - offset).abs() <= 1e-9);
        for i in 0..psi.psi().len() {
            let u = t.amp().u()[i];
            prop_assert!((back.amp().u()[i] - u).abs() <= 1e-9 * u);
            prop_assert!((back.phase().s()[i] - t.phase().s()[i] - offset).abs() <= 1e-9 * (1.0 + t.phase().s()[i].abs()));
        }
    }

    #[test]
    fn phase_is_monotone_and_current_is_constant(which in 0u8..3, (a, b) in complex_data()) {
        let t = triple(&profile(which), a, b, 1.0);
        let c = t.amp().c();
        let s = t.phase().s();
        for w in s.windows(2) {
            let increasing = w[1] > w[0];
            prop_assert_eq!(increasing, c > 0.0);
        }
        for (u, sp) in t.amp().u().iter().zip(t.phase().s_prime()) {
            prop_assert!((u * u * sp - c).abs() <= 1e-9 * c.abs());
        }
    }

    #[test]
    fn k_vanishes_for_oscillatory_profiles(which in 0u8..2, (a, b) in complex_data(), n in 0.5..2.0f64) {
        let t = triple(&profile(which), a, b, n);
        let k = evaluate_k(&compose_psi(&t), t.amp(), 1e-7).unwrap();
        let c2n2 = (t.amp().c() * n).powi(2);
        prop_assert!(k.report.pass, "{}", k.report.max_abs);
        prop_assert!((k.term_magnitude - c2n2).abs() <= 1e-9 * c2n2);
    }

    #[test]
    fn milne_reproduces_pair_amplitude(which in 0u8..2, (a, b) in complex_data()) {
        // The Milne start sits at the grid edge, where u can be small; h = 1.25e-3 keeps
        // the RK4 truncation error well under the tolerance.
        let k2 = profile(which);
        let fine = Grid::new(-3.0, 3.0, 4801).unwrap();
        let (f, g) = pair(&k2, a, b, &fine);
        let amp = amplitude_from_pair(&f, &g).unwrap();
        let solved = solve_milne(&k2, amp.c(), amp.u()[0], amp.u_prime()[0], &fine, &rk4()).unwrap();
        for (x, y) in solved.u().iter().zip(amp.u()) {
            prop_assert!((x - y).abs() <= 1e-7 * y);
        }
    }

    #[test]
    fn pendulum_conserves_energy(c1 in 0.5..1.5f64, s0 in -0.5..0.5f64, ds0 in -2.0..2.0f64) {
        let g = Grid::new(0.0, 10.0, 2001).unwrap();
        let phase = solve_pendulum_phase(c1, s0, ds0, &g, &rk4()).unwrap();
        prop_assert!(phase.energy_report(1e-8).pass);
    }

    #[test]
    fn counterexample_closes(c1 in 0.5..1.5f64, s0 in -0.5..0.5f64, ds0 in -1.5..1.5f64) {
        let g = Grid::new(0.0, 10.0, 4001).unwrap();
        let phase = solve_pendulum_phase(c1, s0, ds0, &g, &rk4()).unwrap();
        let psi = compose_counterexample_psi(&phase);
        let r = nonlinear_milne_residual(&psi, &k_squared_from_phase(&phase), c1, 1e-6).unwrap();
        prop_assert!(r.pass, "{}", r.max_abs);
    }

    #[test]
    fn calk_modulus_is_constant_and_value_tracks_phase(c1 in 0.5..1.5f64, s0 in -0.5..0.5f64, ds0 in 0.2..1.5f64) {
        let g = Grid::new(0.0, 10.0, 1001).unwrap();
        let phase = solve_pendulum_phase(c1, s0, ds0, &g, &rk4()).unwrap();
        let calk = evaluate_calk(&compose_counterexample_psi(&phase), c1, 1.0, 1e-9).unwrap();
        prop_assert!(calk.modulus_report.pass);
        prop_assert!(!phase.is_constant());
        prop_assert!(calk.spread() > 0.0);
        for (k, s) in calk.values.iter().zip(phase.s()) {
            let expected = Complex64::from_polar(c1 * c1, -2.0 * s);
            prop_assert!((k - expected).norm() <= 1e-12 * c1 * c1);
        }
    }
}

#[test]
fn equilibria_give_constant_calk() {
    let g = Grid::new(0.0, 10.0, 401).unwrap();
    for s0 in [0.0, PI / 4.0, PI / 2.0, -PI / 4.0] {
        let phase = solve_pendulum_phase(1.3, s0, 0.0, &g, &rk4()).unwrap();
        assert!(phase.is_constant());
        let calk = evaluate_calk(&compose_counterexample_psi(&phase), 1.3, 1.0, 1e-9).unwrap();
        // S is exactly constant; calK picks up finite-difference round-off only.
        assert!(calk.spread() <= 1e-12, "{}", calk.spread());
    }
}
