//! Cross-validation of independent computation paths: local expansions
//! against sampled curves, closed forms against quadrature, display
//! formulas against numerical derivatives, and the algebraic identities
//! tying the expansion coefficients together.

mod common;

use common::{fitted_quadratic_coefficient, period_at_amplitude, sys};
use periodlab::{
    classification_grid, criterion_opial, criterion_rothe, derivatives_at,
    expansion_coefficients, expr::parse, moment_integral, period_conservative_with_tol,
    potential, return_map, sabatini_c, sigma, turning_points, well_range, Conclusion,
    GridConfig, SystemSpec, X_SWITCH,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> String {
    let mut terms = Vec::with_capacity(degree + 1);
    for k in 0..=degree {
        let c = rng.random_range(-2.0..2.0);
        terms.push(format!("{c} * x^{k}"));
    }
    terms.join(" + ")
}

/// Random restoring force a1·x + a2·x² + a3·x³ with a1 ≥ 1/2, so the well
/// always reaches past |x| = 0.6.
fn random_g(rng: &mut ChaCha8Rng) -> String {
    let a1 = rng.random_range(0.5..2.0);
    let a2 = rng.random_range(-0.5..0.5);
    let a3 = rng.random_range(-0.5..0.5);
    format!("{a1} * x + {a2} * x^2 + {a3} * x^3")
}

fn random_f(rng: &mut ChaCha8Rng) -> String {
    let b1 = rng.random_range(-1.0..1.0);
    let b2 = rng.random_range(-1.0..1.0);
    format!("{b1} * x + {b2} * x^2")
}

#[test]
fn jet_derivatives_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let h = 1e-5;
    for _ in 0..40 {
        let src = random_poly(&mut rng, 4);
        let p = parse(&src).unwrap();
        let x0: f64 = rng.random_range(-1.0..1.0);
        let d = derivatives_at(&p, x0, 2).unwrap();
        let up = p.eval(x0 + h).unwrap();
        let down = p.eval(x0 - h).unwrap();
        let mid = p.eval(x0).unwrap();
        let fd1 = (up - down) / (2.0 * h);
        let fd2 = (up - 2.0 * mid + down) / (h * h);
        // The difference quotients carry their own rounding floor of about
        // ε·|p| spread over the stencil span; budget it on top of the
        // relative band so the band tests the jets, not the oracle.
        let mag = up.abs().max(mid.abs()).max(down.abs());
        let floor1 = f64::EPSILON * mag / h;
        let floor2 = 4.0 * f64::EPSILON * mag / (h * h);
        assert!(
            (fd1 - d[1]).abs() <= 1e-6 * d[1].abs().max(1.0) + floor1,
            "first derivative of {src} at {x0}: jet {} vs difference {fd1}",
            d[1]
        );
        assert!(
            (fd2 - d[2]).abs() <= 1e-6 * d[2].abs().max(1.0) + floor2,
            "second derivative of {src} at {x0}: jet {} vs difference {fd2}",
            d[2]
        );
    }
}

#[test]
fn moment_integral_slope_recovers_the_integrand() {
    let mut rng = ChaCha8Rng::seed_from_u64(402);
    let h = 1e-6;
    for _ in 0..10 {
        let src = random_poly(&mut rng, 3);
        let f = parse(&src).unwrap();
        for k in -9..=9 {
            let x = 0.1 * k as f64;
            let slope =
                (moment_integral(&f, x + h).unwrap() - moment_integral(&f, x - h).unwrap())
                    / (2.0 * h);
            let direct = x * f.eval(x).unwrap();
            assert!(
                (slope - direct).abs() <= 1e-6,
                "moment slope of {src} at {x}: {slope} vs {direct}"
            );
        }
    }
    // One non-polynomial profile against its closed-form primitive:
    // ∫₀ˣ s·sin(s) ds = sin(x) - x·cos(x).
    let f = parse("sin(x)").unwrap();
    for k in 1..=8 {
        let x = 0.25 * k as f64;
        let m = moment_integral(&f, x).unwrap();
        let exact = x.sin() - x * x.cos();
        assert!((m - exact).abs() <= 1e-10, "sine moment at {x}: {m} vs {exact}");
    }
}

#[test]
fn expansion_coefficients_satisfy_the_curvature_identity() {
    // k must equal -π·q/(8·gamma^{5/2}) by construction; recomputing it
    // through that closed form exercises a different rounding path.
    let mut rng = ChaCha8Rng::seed_from_u64(403);
    for i in 0..1000 {
        let g = random_g(&mut rng);
        let f = if i % 2 == 0 { "0".to_string() } else { random_f(&mut rng) };
        let system = sys(&f, &g);
        let e = expansion_coefficients(&system);
        let gamma = system.gamma();
        let reference = -std::f64::consts::PI * e.q / (8.0 * gamma.powf(2.5));
        let scale = e.k.abs().max(reference.abs()).max(1e-300);
        assert!(
            (e.k - reference).abs() <= 1e-14 * scale,
            "system f={f}, g={g}: k={} vs -πq/(8γ^(5/2))={reference}",
            e.k
        );
    }
}

#[test]
fn conservative_discriminant_is_the_origin_schaaf_witness_scaled() {
    // With no damping, q and the Schaaf combination 5g''² - 3g'g''' at the
    // origin are proportional: q = -H/3. Their signs must never disagree.
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..200 {
        let g = random_g(&mut rng);
        let system = sys("0", &g);
        let e = expansion_coefficients(&system);
        let d = derivatives_at(system.g(), 0.0, 3).unwrap();
        let schaaf_at_zero = 5.0 * d[2] * d[2] - 3.0 * d[1] * d[3];
        let scale = e.q.abs().max(schaaf_at_zero.abs() / 3.0).max(1.0);
        assert!(
            (e.q + schaaf_at_zero / 3.0).abs() <= 1e-14 * scale,
            "g={g}: q={} vs -H(0)/3={}",
            e.q,
            -schaaf_at_zero / 3.0
        );
        if e.q.abs() > 1e-12 * scale {
            assert_eq!(e.q.signum(), -schaaf_at_zero.signum(), "g={g}");
        }
    }
}

#[test]
fn quadrature_and_return_map_agree_on_conservative_wells() {
    let mut rng = ChaCha8Rng::seed_from_u64(405);
    for _ in 0..10 {
        let g = random_g(&mut rng);
        let system = sys("0", &g);
        let amplitude = 0.25;
        let range = well_range(system.g(), 1.0).unwrap();
        let c = potential(system.g()).eval(amplitude).unwrap();
        let by_energy =
            period_conservative_with_tol(system.g(), &range, c, 1e-11).unwrap();
        let by_return = return_map(&system, amplitude, 1e-11).unwrap().period;
        assert!(
            (by_energy - by_return).abs() <= 1e-6,
            "g={g}: quadrature {by_energy} vs return map {by_return}"
        );
    }
}

#[test]
fn stiffness_scaling_rescales_conservative_periods() {
    // Multiplying g by λ shrinks every period by exactly √λ: same orbit,
    // faster clock. Checked through the full quadrature pipeline.
    let lambda = 2.7f64;
    for g in ["sin(x)", "x + 0.5 * x^2", "x - x^3"] {
        let plain = sys("0", g);
        let scaled = sys("0", &format!("{lambda} * ({g})"));
        for amp in [0.15, 0.3] {
            let t = period_at_amplitude(&plain, amp, 1e-11);
            let t_scaled = period_at_amplitude(&scaled, amp, 1e-11);
            assert!(
                (t_scaled - t / lambda.sqrt()).abs() <= 1e-8,
                "g={g}, amplitude {amp}: {t_scaled} vs {}",
                t / lambda.sqrt()
            );
        }
    }
}

#[test]
fn joint_scaling_rescales_lienard_periods() {
    // The damped analogue: g → λ·g together with f → √λ·f is a pure time
    // rescaling, so T drops by √λ.
    let lambda = 1.96f64;
    let root = lambda.sqrt();
    for (f, g) in [("x", "x"), ("x", "x + x^3 / 9"), ("0.5 * x + 0.25 * x^2", "x + 0.5 * x^2")]
    {
        let plain = sys(f, g);
        let scaled = sys(
            &format!("{root} * ({f})"),
            &format!("{lambda} * ({g})"),
        );
        for amp in [0.1, 0.25] {
            let t = return_map(&plain, amp, 1e-11).unwrap().period;
            let t_scaled = return_map(&scaled, amp, 1e-11).unwrap().period;
            assert!(
                (t_scaled - t / root).abs() <= 1e-7,
                "f={f}, g={g}, amplitude {amp}: {t_scaled} vs {}",
                t / root
            );
        }
    }
}

#[test]
fn odd_systems_close_their_orbits() {
    // Odd damping and odd stiffness force a reversible center; the first
    // return must land back on its start to within integrator accuracy.
    let tol = 1e-10;
    for (f, g) in [
        ("x", "x"),
        ("x^3", "x - x^3"),
        ("x + 2 * x^3", "x - 0.5 * x^3"),
        ("0.5 * x", "2 * x + x^3"),
    ] {
        let system = sys(f, g);
        for amp in [0.05, 0.1, 0.18] {
            let r = return_map(&system, amp, tol).unwrap();
            assert!(
                r.displacement.abs() <= 100.0 * tol,
                "f={f}, g={g}, amplitude {amp}: displacement {:e}",
                r.displacement
            );
        }
    }
}

#[test]
fn reversing_damping_preserves_odd_system_periods() {
    for (f, g) in [("x", "x"), ("x + x^3", "x - x^3"), ("0.5 * x^3", "x + x^3")] {
        let forward = sys(f, g);
        let reversed = sys(&format!("-({f})"), g);
        for amp in [0.08, 0.2] {
            let tf = return_map(&forward, amp, 1e-11).unwrap().period;
            let tr = return_map(&reversed, amp, 1e-11).unwrap().period;
            assert!(
                (tf - tr).abs() <= 1e-7,
                "f={f}, g={g}, amplitude {amp}: {tf} vs {tr}"
            );
        }
    }
}

#[test]
fn commutator_slope_series_meets_direct_form_at_the_switch() {
    // At |x| = X_SWITCH the implementation hands over from the direct
    // quotient to its Taylor polynomial; recompute the quotient here from
    // public pieces and require both branches to meet.
    let mut rng = ChaCha8Rng::seed_from_u64(406);
    for _ in 0..10 {
        // Modest damping: the handover error carries the dropped quartic
        // term f'(0)·f''(0)/(12γ)·x⁴, which must stay under the bound.
        let b1 = rng.random_range(-0.5..0.5);
        let b2 = rng.random_range(-0.5..0.5);
        let f = format!("{b1} * x + {b2} * x^2");
        let g = random_g(&mut rng);
        let system = sys(&f, &g);
        let gamma = system.gamma();
        for x in [X_SWITCH, -X_SWITCH] {
            let series = sabatini_c(&system, x).unwrap();
            let m = moment_integral(system.f(), x).unwrap();
            let direct = system.g().eval(x).unwrap() / gamma - m * m / (gamma * x * x * x);
            assert!(
                (series - direct).abs() <= 1e-9,
                "f={f}, g={g}, x={x}: series {series} vs direct {direct}"
            );
        }
    }
}

#[test]
fn sigma_display_matches_derivative_of_normalized_slope() {
    // σ must equal -x⁵ · d/dx (C(x)/x); the display formula avoids the
    // derivative entirely, so a central difference is an independent path.
    let h = 1e-6;
    for (f, g) in [("x", "x + x^3 / 9"), ("x + x^3", "x - 0.5 * x^3"), ("2 * x", "x")] {
        let system = sys(f, g);
        for k in 1..=8 {
            let x = 0.1 * k as f64;
            let up = sabatini_c(&system, x + h).unwrap() / (x + h);
            let down = sabatini_c(&system, x - h).unwrap() / (x - h);
            let derivative_form = -x.powi(5) * (up - down) / (2.0 * h);
            let display = sigma(&system, x).unwrap();
            assert!(
                (display - derivative_form).abs() <= 1e-6,
                "f={f}, g={g}, x={x}: display {display} vs derivative {derivative_form}"
            );
        }
    }
}

#[test]
fn turning_points_sit_on_the_energy_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(407);
    for _ in 0..20 {
        let g = random_g(&mut rng);
        let system = sys("0", &g);
        let range = well_range(system.g(), 0.6).unwrap();
        let pot = potential(system.g());
        for frac in [0.05, 0.3, 0.9] {
            let c = frac * range.c_max;
            let tp = turning_points(system.g(), &range, c).unwrap();
            assert!(tp.a < 0.0 && tp.b > 0.0, "g={g}");
            let res_a = (pot.eval(tp.a).unwrap() - c).abs();
            let res_b = (pot.eval(tp.b).unwrap() - c).abs();
            let allowed = 1e-12 * c.max(1.0);
            assert!(
                res_a <= allowed && res_b <= allowed,
                "g={g}, c={c}: residuals {res_a:e}, {res_b:e}"
            );
        }
    }
}

#[test]
fn halving_the_tolerance_moves_the_period_less_than_the_looser_one() {
    for g in ["sin(x)", "x + x^3"] {
        let system = sys("0", g);
        let range = well_range(system.g(), 1.2).unwrap();
        let c = 0.4 * range.c_max;
        for tol in [1e-6, 1e-8, 1e-10] {
            let loose = period_conservative_with_tol(system.g(), &range, c, tol).unwrap();
            let tight =
                period_conservative_with_tol(system.g(), &range, c, 0.5 * tol).unwrap();
            assert!(
                (loose - tight).abs() <= tol,
                "g={g}, tol={tol:e}: {loose} vs {tight}"
            );
        }
    }
}

#[test]
fn fitted_curvature_tracks_the_expansion_for_strong_discriminants() {
    // Any center system whose discriminant clears 0.1 must show the
    // predicted quadratic coefficient in its measured curve. Conservative
    // systems are centers automatically; the damped entries are known
    // centers with both discriminant signs; the scaled pendulum exercises
    // gamma ≠ 1 on a non-polynomial stiffness.
    let mut rng = ChaCha8Rng::seed_from_u64(408);
    let mut fixed = vec![
        ("x".to_string(), "x".to_string()),
        ("2 * x".to_string(), "x + x^3".to_string()),
        ("0".to_string(), "2.25 * sin(x)".to_string()),
    ];
    for _ in 0..8 {
        fixed.push(("0".to_string(), random_g(&mut rng)));
    }
    let mut tested = 0;
    for (f, g) in &fixed {
        let system = sys(f, g);
        let e = expansion_coefficients(&system);
        if e.q.abs() <= 0.1 {
            continue;
        }
        let fitted = fitted_quadratic_coefficient(&system, 0.02, 1e-11);
        assert!(
            (fitted - e.k).abs() <= 0.05 * e.k.abs(),
            "f={f}, g={g}: fitted {fitted} vs expansion {}",
            e.k
        );
        tested += 1;
    }
    assert!(tested >= 6, "draw produced only {tested} strong discriminants");
}

#[test]
fn rothe_direction_implies_opial_direction_without_curvature() {
    // With g''(0) = 0 the Rothe combination factors through the Opial
    // witness, so whenever the former reaches a direction the latter must
    // reach the same one.
    for t in [-0.8, -0.3, 0.3, 0.9] {
        let g = format!("x + {t} * x^3");
        let system = sys("0", &g);
        let grid = classification_grid(&system, &GridConfig::default()).unwrap();
        let rothe = criterion_rothe(&system, &grid).unwrap();
        let opial = criterion_opial(&system, &grid).unwrap();
        if rothe.applicable
            && matches!(rothe.conclusion, Conclusion::Increasing | Conclusion::Decreasing)
        {
            assert_eq!(
                rothe.conclusion, opial.conclusion,
                "g={g}: rothe {:?} vs opial {:?}",
                rothe.conclusion, opial.conclusion
            );
        }
    }
}

#[test]
fn pendulum_quadrature_matches_the_elliptic_oracle_at_many_amplitudes() {
    // T(amplitude) = 4/√γ · K(sin²(amplitude/2)) for g = sin(x); the AGM
    // oracle is independent of every quadrature path in the crate.
    let system = sys("0", "sin(x)");
    for amp_deg in [20.0, 60.0, 90.0, 120.0] {
        let amp = amp_deg * std::f64::consts::PI / 180.0;
        let m = (0.5 * amp).sin().powi(2);
        let oracle = 4.0 * common::elliptic_k(m);
        let t = period_at_amplitude(&system, amp, 1e-11);
        assert!(
            (t - oracle).abs() <= 1e-8,
            "amplitude {amp_deg} degrees: {t} vs oracle {oracle}"
        );
    }
}

#[test]
fn isochrone_defeats_every_finite_amplitude_probe() {
    // The one-parameter family f = x, g = x + x³/9 keeps T pinned at 2π
    // far beyond the asymptotic regime.
    let system = sys("x", "x + x^3 / 9");
    let two_pi = 2.0 * std::f64::consts::PI;
    for amp in [0.05, 0.2, 0.5, 0.9, 1.4] {
        let r = return_map(&system, amp, 1e-11).unwrap();
        assert!(
            (r.period - two_pi).abs() <= 1e-7,
            "amplitude {amp}: period {} vs 2π",
            r.period
        );
    }
}
