//! The dissipationless-in-disguise side: x'' + f(x)·x' + g(x) = 0 traced as
//! a first order system, its Poincaré return map on the positive x axis,
//! and the commutator-based isochronicity machinery built from the moment
//! integral M(x) = ∫₀ˣ s·f(s) ds.
//!
//! The plane is coordinatized so the linearization at the origin is a rigid
//! rotation with frequency sqrt(gamma):
//!
//!     x' = -sqrt(gamma)·y,
//!     y' = g(x)/sqrt(gamma) - f(x)·y.
//!
//! Substituting y = -x'/sqrt(gamma) recovers the second order equation
//! exactly, so periods measured on this field are periods of the original
//! oscillator; the scaling g -> λg, f -> sqrt(λ)f divides them by sqrt(λ).

use crate::conservative::{
    well_range, CurveMethod, CurveSample, Parameterization, PeriodCurve,
};
use crate::error::{Error, Result};
use crate::expr::{differentiate, Expr};
use crate::jet::{derivatives_at, moment_integral};
use crate::ode::{rk_step, AcceptedStep, AdaptiveRk};
use crate::poly::Poly;
use crate::system::SystemSpec;

/// A point of the phase plane in the rotation-normalized coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x: f64,
    pub y: f64,
}

/// Right hand side of the first order system at one state.
pub fn vector_field(system: &SystemSpec, s: &PhaseState) -> Result<PhaseState> {
    let sq = system.sqrt_gamma();
    Ok(PhaseState {
        x: -sq * s.y,
        y: system.eval_g(s.x)? / sq - system.eval_f(s.x)? * s.y,
    })
}

/// One fixed Runge–Kutta step of the field. Exposed for callers that want
/// to trace orbits by hand; the return map drives its own integration.
pub fn integrate_step(system: &SystemSpec, s: &PhaseState, dt: f64) -> Result<PhaseState> {
    let mut field = raw_field(system);
    let out = rk_step(&mut field, &[s.x, s.y], dt)?;
    Ok(PhaseState { x: out[0], y: out[1] })
}

fn raw_field(system: &SystemSpec) -> impl FnMut(&[f64; 2]) -> Result<[f64; 2]> + '_ {
    let sq = system.sqrt_gamma();
    move |s: &[f64; 2]| {
        Ok([
            -sq * s[1],
            system.eval_g(s[0])? / sq - system.eval_f(s[0])? * s[1],
        ])
    }
}

/// Outcome of one full turn of the return map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnMapResult {
    /// Time of first return to the positive x axis.
    pub period: f64,
    /// x at return minus starting amplitude; zero for a closed orbit.
    pub displacement: f64,
}

const CROSSING_Y_TOL: f64 = 1e-12;
const RETURN_TIME_FACTOR: f64 = 20.0;

/// Follows the orbit from (amplitude, 0) once around the origin and reports
/// first-return time and radial displacement.
///
/// The orbit is tracked crossing by crossing: the half turn shows up as a
/// y sign change at negative x, the full turn as the next sign change at
/// positive x. Each crossing time is pinned by bisection with single fixed
/// steps from the bracketing step's start, so localization accuracy is not
/// limited by the step size that happened to straddle the axis.
pub fn return_map(system: &SystemSpec, amplitude: f64, tol: f64) -> Result<ReturnMapResult> {
    if !(amplitude > 0.0) {
        return Err(Error::DomainError(format!(
            "return map needs a positive starting amplitude, got {amplitude:e}"
        )));
    }
    if system.eval_g(amplitude)? <= 0.0 {
        return Err(Error::DomainError(format!(
            "starting amplitude {amplitude:e} lies outside the potential well"
        )));
    }
    let t_limit = RETURN_TIME_FACTOR * system.linear_period();
    let escape = 10.0 * amplitude.max(1.0);
    let max_step = system.linear_period() / 8.0;

    let mut rk = AdaptiveRk::new(raw_field(system), [amplitude, 0.0], tol, max_step)?;
    let mut seen_negative = false;
    loop {
        let step = rk.advance()?;
        if step.y_to[0].abs() > escape || step.y_to[1].abs() > escape {
            return Err(Error::NoReturn);
        }
        if let Some((t_cross, state)) = axis_crossing(rk.field(), &step)? {
            if state[0] < 0.0 {
                seen_negative = true;
            } else if state[0] > 0.0 && seen_negative {
                return Ok(ReturnMapResult {
                    period: t_cross,
                    displacement: state[0] - amplitude,
                });
            }
        }
        if step.t_to > t_limit {
            return Err(Error::NoReturn);
        }
    }
}

/// Detects and localizes a y = 0 crossing inside one accepted step.
fn axis_crossing<F>(field: &mut F, step: &AcceptedStep) -> Result<Option<(f64, [f64; 2])>>
where
    F: FnMut(&[f64; 2]) -> Result<[f64; 2]>,
{
    let y0 = step.y_from[1];
    let y1 = step.y_to[1];
    if y0 == 0.0 {
        // Leaving the axis, not crossing it: the start point itself.
        return Ok(None);
    }
    if y1 == 0.0 {
        return Ok(Some((step.t_to, step.y_to)));
    }
    if y0.signum() == y1.signum() {
        return Ok(None);
    }
    // Bisect on time offset from the step start, probing with one fixed
    // step each; the probe step never exceeds the accepted step size.
    let span = step.t_to - step.t_from;
    let mut lo = 0.0f64;
    let mut hi = span;
    let mut best = (span, step.y_to);
    let mut best_abs = y1.abs();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let probe = rk_step(field, &step.y_from, mid)?;
        let ay = probe[1].abs();
        if ay < best_abs {
            best_abs = ay;
            best = (mid, probe);
        }
        if ay <= CROSSING_Y_TOL {
            return Ok(Some((step.t_from + mid, probe)));
        }
        if probe[1].signum() == y0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((step.t_from + best.0, best.1)))
}

/// Samples periods over starting amplitudes via the return map. Orbits must
/// close to within the curve tolerance (100 times the integrator tolerance);
/// a larger residual displacement is decisive evidence against a center.
pub fn period_curve_lienard(
    system: &SystemSpec,
    amplitudes: &[f64],
    tol: f64,
) -> Result<PeriodCurve> {
    let curve_tol = 100.0 * tol;
    let mut samples = Vec::with_capacity(amplitudes.len());
    for &a in amplitudes {
        let r = return_map(system, a, tol)?;
        if r.displacement.abs() > curve_tol {
            return Err(Error::NotACenter { c: a, phi: r.displacement });
        }
        samples.push(CurveSample {
            param: a,
            period: r.period,
            displacement: Some(r.displacement),
        });
    }
    Ok(PeriodCurve {
        samples,
        parameterization: Parameterization::Amplitude,
        method: CurveMethod::ReturnMap,
        tolerance: curve_tol,
    })
}

/// Largest amplitude the local analysis trusts: half the distance to the
/// nearest zero of g, or half the scan cap when no zero is found.
pub fn small_amplitude_cap(system: &SystemSpec, x_cap: f64) -> Result<f64> {
    let r = well_range(system.g(), x_cap)?;
    Ok(0.5 * r.b_max.min(-r.a_min))
}

/// Where the direct formula for the commutator slope hands over to its
/// series expansion near the origin.
pub const X_SWITCH: f64 = 1e-2;

/// Sabatini's normalized commutator slope
///
///     C(x) = g(x)/gamma - M(x)² / (gamma·x³),
///
/// which equals x identically exactly when the center is isochronous. Away
/// from the origin this is evaluated literally; inside |x| <= X_SWITCH the
/// cubic Taylor polynomial takes over, sidestepping the 0/0 quotient.
pub fn sabatini_c(system: &SystemSpec, x: f64) -> Result<f64> {
    let gamma = system.gamma();
    if x.abs() <= X_SWITCH {
        let c2 = system.gpp0() / gamma / 2.0;
        let c3 = (system.gppp0() / gamma - 2.0 * system.fp0().powi(2) / (3.0 * gamma)) / 6.0;
        return Ok(x + c2 * x * x + c3 * x * x * x);
    }
    let m = moment_integral(system.f(), x)?;
    Ok(system.eval_g(x)? / gamma - m * m / (gamma * x.powi(3)))
}

/// Commutator deficit C(x) - x; identically zero for an isochronous center.
pub fn isochronicity_residual(system: &SystemSpec, x: f64) -> Result<f64> {
    Ok(sabatini_c(system, x)? - x)
}

/// The monotonicity discriminant
///
///     sigma(x) = (2x²/gamma)·f·M - (4/gamma)·M² + x³·gₙ - x⁴·gₙ'
///
/// with gₙ(x) = g(x)/gamma - x. It satisfies sigma = -x⁵·(C(x)/x)', so a
/// one-signed sigma pins the direction in which the period drifts.
pub fn sigma(system: &SystemSpec, x: f64) -> Result<f64> {
    let gamma = system.gamma();
    let m = moment_integral(system.f(), x)?;
    let gn = system.eval_g(x)? / gamma - x;
    let gp = derivatives_at(system.g(), x, 1)?[1];
    let gn_prime = gp / gamma - 1.0;
    Ok(2.0 * x * x / gamma * system.eval_f(x)? * m - 4.0 / gamma * m * m
        + x.powi(3) * gn
        - x.powi(4) * gn_prime)
}

/// A Rayleigh oscillator z'' + F(z') + z = 0 restated for the velocity:
/// differentiating once gives x'' + F'(x)·x' + x = 0 for x = z'.
#[derive(Debug)]
pub struct RayleighReduction {
    pub system: SystemSpec,
    /// Set when the local expansion alone already forces a growing period:
    /// even damping profile with curvature at the origin.
    pub increasing_near_origin: bool,
    pub reason: String,
}

/// Builds the Liénard system equivalent to the Rayleigh equation with
/// damping profile F. F must vanish at the origin; its derivative becomes
/// the Liénard damping, the restoring force is the identity.
pub fn rayleigh_to_lienard(profile: &Expr) -> Result<RayleighReduction> {
    let f0 = profile.eval(0.0)?;
    if f0 != 0.0 {
        return Err(Error::NotAtOrigin { which: 'F', value: f0 });
    }
    let fprime = match Poly::from_expr(profile) {
        Some(p) => p.derivative().to_expr(),
        None => differentiate(profile),
    };
    let system = SystemSpec::new(fprime, Expr::Var)?;
    let d = derivatives_at(profile, 0.0, 3)?;
    let even = d[1] == 0.0 && d[3] == 0.0;
    let curved = d[2] != 0.0;
    let increasing = even && curved;
    let reason = if increasing {
        format!(
            "even damping profile with F''(0) = {:e}: local discriminant \
             -(2/3)F''(0)² is negative, so the period grows near the origin",
            d[2]
        )
    } else if !even {
        "damping profile is not even to third order; the local shortcut does not apply"
            .to_string()
    } else {
        "damping profile has no curvature at the origin; the local test is silent"
            .to_string()
    };
    Ok(RayleighReduction {
        system,
        increasing_near_origin: increasing,
        reason,
    })
}
