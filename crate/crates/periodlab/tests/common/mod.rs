//! Oracles and helpers shared by the integration suites. Everything here is
//! independent of the code paths under test: the elliptic integral comes
//! from the arithmetic-geometric mean, and the amplitude dispatch only
//! composes public entry points.

use periodlab::{
    period_conservative_with_tol, potential, return_map, well_range, SystemSpec,
};

/// Complete elliptic integral of the first kind with parameter m = k²,
///
///     K(m) = π / (2·agm(1, √(1 - m))),
///
/// by the arithmetic-geometric mean iteration, which converges
/// quadratically to machine precision.
pub fn elliptic_k(m: f64) -> f64 {
    assert!((0.0..1.0).contains(&m), "parameter out of range: {m}");
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    std::f64::consts::FRAC_PI_2 / a
}

/// Parses a system, panicking with the offending source on failure.
pub fn sys(f: &str, g: &str) -> SystemSpec {
    match SystemSpec::from_strings(f, g) {
        Ok(s) => s,
        Err(e) => panic!("bad test system f={f}, g={g}: {e}"),
    }
}

/// Period of the orbit through right amplitude `amp`: energy quadrature for
/// conservative systems, first-return integration otherwise. The well scan
/// cap scales with the amplitude so large swings stay in range.
pub fn period_at_amplitude(system: &SystemSpec, amp: f64, tol: f64) -> f64 {
    if system.is_conservative() {
        let cap = (4.0 * amp).max(0.4);
        let range = well_range(system.g(), cap).unwrap();
        let c = potential(system.g()).eval(amp).unwrap();
        period_conservative_with_tol(system.g(), &range, c, tol).unwrap()
    } else {
        return_map(system, amp, tol).unwrap().period
    }
}

/// Quadratic coefficient of T(amplitude) at the origin, fitted from
/// samples at h, 2h, 4h. With y(a) = (T(a) - T0)/a² the combination
/// (8·y(h) - 6·y(2h) + y(4h))/3 cancels the linear and quadratic
/// corrections of y, leaving an O(h³) fit error.
pub fn fitted_quadratic_coefficient(system: &SystemSpec, h: f64, tol: f64) -> f64 {
    let t0 = system.linear_period();
    let y = |a: f64| (period_at_amplitude(system, a, tol) - t0) / (a * a);
    (8.0 * y(h) - 6.0 * y(2.0 * h) + y(4.0 * h)) / 3.0
}
