//! The conservative side: x'' + g(x) = 0 with energy
//! E = y²/2 + G(x), G(x) = ∫₀ˣ g. Orbits are level sets of E, and the
//! period of the orbit at energy c is
//!
//!     T(c) = √2 ∫_a^b dx / √(c - G(x)),
//!
//! where a < 0 < b are the turning points with G(a) = G(b) = c. The
//! square root vanishes at both ends, which the tanh-sinh rule absorbs.
//!
//! This module also owns the curve types shared with the return map side.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet;
use crate::poly::Poly;
use crate::quad;
use serde::{Deserialize, Serialize};

/// Potential energy G(x) = ∫₀ˣ g(s) ds. Polynomial restoring forces get the
/// exact antiderivative; anything else is integrated adaptively per call.
pub struct PotentialFn {
    kind: PotentialKind,
}

enum PotentialKind {
    Exact(Poly),
    Quadrature(Expr),
}

impl PotentialFn {
    pub fn eval(&self, x: f64) -> Result<f64> {
        match &self.kind {
            PotentialKind::Exact(p) => Ok(p.eval(x)),
            PotentialKind::Quadrature(g) => {
                quad::adaptive(&mut |s| g.eval(s), 0.0, x, 1e-12)
            }
        }
    }
}

pub fn potential(g: &Expr) -> PotentialFn {
    let kind = match Poly::from_expr(g) {
        Some(p) => PotentialKind::Exact(p.antiderivative()),
        None => PotentialKind::Quadrature(g.clone()),
    };
    PotentialFn { kind }
}

/// The potential well around the origin, bounded either by the nearest
/// zeros of g or by the scan cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellRange {
    /// Left edge, negative.
    pub a_min: f64,
    /// Right edge, positive.
    pub b_max: f64,
    /// Largest usable orbit energy: slightly inside the lower barrier.
    pub c_max: f64,
}

const SCAN_STEPS: usize = 1000;
const DEGENERATE_ZERO_RUN: usize = 3;

/// Scans outward from the origin for the first sign change of g on each
/// side, refines it by bisection, and caps the result at `x_cap`. A run of
/// three or more consecutive exact zeros means g vanishes on a whole
/// stretch, which has no well to speak of.
pub fn well_range(g: &Expr, x_cap: f64) -> Result<WellRange> {
    let b_max = scan_for_zero(g, x_cap, 1.0)?;
    let a_min = scan_for_zero(g, x_cap, -1.0)?;
    let pot = potential(g);
    let barrier = pot.eval(a_min)?.min(pot.eval(b_max)?);
    Ok(WellRange {
        a_min,
        b_max,
        c_max: (1.0 - 1e-6) * barrier,
    })
}

fn scan_for_zero(g: &Expr, x_cap: f64, direction: f64) -> Result<f64> {
    let step = x_cap / SCAN_STEPS as f64;
    let mut zero_run = 0usize;
    let mut prev_x = 0.0;
    for k in 1..=SCAN_STEPS {
        let x = direction * step * k as f64;
        let v = g.eval(x)?;
        if v == 0.0 {
            zero_run += 1;
            if zero_run >= DEGENERATE_ZERO_RUN {
                return Err(Error::DegenerateWell);
            }
            // An isolated exact zero is the well edge itself.
            let next = g.eval(x + direction * step)?;
            if next != 0.0 {
                return Ok(x);
            }
            continue;
        }
        zero_run = 0;
        // Inside the well g has the sign of x; a flip marks the edge.
        if v * direction < 0.0 {
            return bisect_sign_change(g, prev_x, x, direction);
        }
        prev_x = x;
    }
    Ok(direction * x_cap)
}

/// Bisection on g over a bracket straddling a sign change; `side` is the
/// in-well sign of g, held at `lo`.
fn bisect_sign_change(g: &Expr, lo: f64, hi: f64, side: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let v = g.eval(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Orbit extremes at energy c: G(a) = G(b) = c with a < 0 < b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub a: f64,
    pub b: f64,
}

/// Solves G(x) = c on both sides of the well by bisection plus a Newton
/// polish. Energies must lie in (0, c_max].
pub fn turning_points(g: &Expr, range: &WellRange, c: f64) -> Result<TurningPoints> {
    if !(c > 0.0) || c > range.c_max {
        return Err(Error::EnergyOutOfRange { c, c_max: range.c_max });
    }
    let pot = potential(g);
    let b = solve_energy_level(g, &pot, c, range.b_max)?;
    let a = solve_energy_level(g, &pot, c, range.a_min)?;
    Ok(TurningPoints { a, b })
}

fn solve_energy_level(g: &Expr, pot: &PotentialFn, c: f64, edge: f64) -> Result<f64> {
    // G is monotone from 0 at the origin up to the barrier at the edge, so
    // the bracket [0, edge] always contains exactly one root.
    let mut lo = 0.0f64;
    let mut hi = edge;
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if pot.eval(mid)? < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let slope = g.eval(x)?;
        if slope == 0.0 {
            break;
        }
        let dx = (pot.eval(x)? - c) / slope;
        x -= dx;
        if dx.abs() <= 1e-14 * x.abs().max(1e-300) {
            break;
        }
    }
    Ok(x)
}

/// Orbit period at energy c by tanh-sinh quadrature at the default
/// tolerance 1e-10.
pub fn period_conservative(g: &Expr, range: &WellRange, c: f64) -> Result<f64> {
    period_conservative_with_tol(g, range, c, 1e-10)
}

/// Terms kept in the turning point expansion of the radicand; the d⁷ tail
/// is far below quadrature tolerance at the switch radius of 1% of the
/// well width.
const RADICAND_SERIES_TERMS: usize = 7;

/// c - G(x) expanded around a turning point p in the distance d to it,
/// using G(p) = c:
///
///     c - G(p - d) =  Σ_{j≥0} (-1)^j g^{(j)}(p) d^{j+1}/(j+1)!  (right end)
///     c - G(p + d) = -Σ_{j≥0} g^{(j)}(p) d^{j+1}/(j+1)!         (left end)
///
/// Returns the sum without the left end's outer minus; `alternating` picks
/// the right end sign pattern.
fn radicand_series(derivs: &[f64], d: f64, alternating: bool) -> f64 {
    let mut coeffs = [0.0; RADICAND_SERIES_TERMS];
    let mut factorial = 1.0;
    for (j, &gj) in derivs.iter().enumerate() {
        factorial *= (j + 1) as f64;
        let sign = if alternating && j % 2 == 1 { -1.0 } else { 1.0 };
        coeffs[j] = sign * gj / factorial;
    }
    let mut acc = 0.0;
    for &cj in coeffs.iter().rev() {
        acc = acc * d + cj;
    }
    acc * d
}

pub fn period_conservative_with_tol(
    g: &Expr,
    range: &WellRange,
    c: f64,
    tol: f64,
) -> Result<f64> {
    let tp = turning_points(g, range, c)?;
    let pot = potential(g);
    // Close to a turning point the radicand c - G(x) cancels to nothing and,
    // worse, x itself carries too little information once its distance to
    // the endpoint nears 1 ulp. The quadrature rule supplies that distance
    // exactly, and the radicand is rebuilt from it by a Taylor expansion of
    // G around the turning point; in the middle of the well the direct form
    // is both cheap and accurate.
    let switch = 0.01 * (tp.b - tp.a);
    let at_b = jet::derivatives_at(g, tp.b, RADICAND_SERIES_TERMS - 1)?;
    let at_a = jet::derivatives_at(g, tp.a, RADICAND_SERIES_TERMS - 1)?;
    let mut integrand = |x: f64, d_left: f64, d_right: f64| {
        let r = if d_right < switch {
            radicand_series(&at_b, d_right, true)
        } else if d_left < switch {
            -radicand_series(&at_a, d_left, false)
        } else {
            c - pot.eval(x)?
        };
        if r <= 0.0 {
            // The numeric turning point sits within rounding of the true
            // one, so a node can land a hair beyond it; the lost sliver
            // contributes below resolution.
            return Ok(0.0);
        }
        Ok(1.0 / r.sqrt())
    };
    let i = quad::tanh_sinh_endpoint(&mut integrand, tp.a, tp.b, tol)?;
    Ok(std::f64::consts::SQRT_2 * i)
}

/// How a sampled period curve is parameterized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameterization {
    Energy,
    Amplitude,
}

/// How the samples were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMethod {
    Quadrature,
    ReturnMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    /// Energy or amplitude, per the curve's parameterization.
    pub param: f64,
    pub period: f64,
    /// First-return radial displacement, for return map samples only; a
    /// nonzero value beyond tolerance means the orbit did not close.
    pub displacement: Option<f64>,
}

/// Monotonicity call on a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveVerdict {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodCurve {
    pub samples: Vec<CurveSample>,
    pub parameterization: Parameterization,
    pub method: CurveMethod,
    /// Trust radius of each period sample; verdicts ignore variation within
    /// ten times this.
    pub tolerance: f64,
}

impl PeriodCurve {
    pub fn periods(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.period).collect()
    }

    pub fn verdict(&self) -> Result<CurveVerdict> {
        monotonicity_verdict(&self.periods(), self.tolerance)
    }
}

/// Classifies a period sequence as constant, strictly monotone, or mixed.
/// Differences within 10·tol are treated as numerically unresolved: the
/// curve is constant if every sample sits that close to the mean, strictly
/// monotone only if every consecutive difference clears the band.
pub fn monotonicity_verdict(periods: &[f64], tol: f64) -> Result<CurveVerdict> {
    if periods.len() < 3 {
        return Err(Error::TooFewSamples);
    }
    let band = 10.0 * tol;
    let mean = periods.iter().sum::<f64>() / periods.len() as f64;
    if periods.iter().all(|&t| (t - mean).abs() <= band) {
        return Ok(CurveVerdict::Constant);
    }
    let diffs: Vec<f64> = periods.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|&d| d > band) {
        return Ok(CurveVerdict::Increasing);
    }
    if diffs.iter().all(|&d| d < -band) {
        return Ok(CurveVerdict::Decreasing);
    }
    Ok(CurveVerdict::Mixed)
}

/// Samples the period over the given energies by quadrature.
pub fn period_curve_conservative(
    g: &Expr,
    range: &WellRange,
    energies: &[f64],
    tol: f64,
) -> Result<PeriodCurve> {
    let mut samples = Vec::with_capacity(energies.len());
    for &c in energies {
        let period = period_conservative_with_tol(g, range, c, tol)?;
        samples.push(CurveSample { param: c, period, displacement: None });
    }
    Ok(PeriodCurve {
        samples,
        parameterization: Parameterization::Energy,
        method: CurveMethod::Quadrature,
        tolerance: tol,
    })
}
