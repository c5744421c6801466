//! Monotonicity and isochronicity classifiers for the period function,
//! plus the orchestrator that runs every one of them, samples a numeric
//! period curve, and checks the two stories against each other.
//!
//! Every grid-based classifier reports per-point witness values. Sign
//! calls share one convention: a witness clears the noise floor
//! 1e-9·max(1, largest |witness|) or it does not count. Strict criteria
//! need every point cleared with the right sign; one-sided criteria allow
//! points inside the floor as long as none clears it on the wrong side;
//! a grid entirely inside the floor reads as "isochronous candidate",
//! a tentative label that the curve comparison then vets.

use crate::conservative::{
    period_curve_conservative, potential, well_range, CurveVerdict, PeriodCurve,
};
use crate::error::{Error, Result};
use crate::jet::derivatives_at;
use crate::lienard::{period_curve_lienard, sabatini_c, sigma, small_amplitude_cap};
use crate::poly::Poly;
use crate::system::SystemSpec;
use serde::{Deserialize, Serialize};

/// Direction call produced by a criterion or by the whole classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Increasing,
    Decreasing,
    IsochronousCandidate,
    Inconclusive,
    NotACenter,
}

/// One witness evaluation: the grid point and the criterion's value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: f64,
    pub value: f64,
}

/// Outcome of a single criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub name: &'static str,
    /// False when the criterion cannot be brought to bear on this system
    /// at all (wrong structure); hypothesis failures on the grid instead
    /// leave an applicable criterion inconclusive.
    pub applicable: bool,
    pub conclusion: Conclusion,
    pub witnesses: Vec<Witness>,
    pub reason: String,
}

impl CriterionVerdict {
    fn inapplicable(name: &'static str, reason: impl Into<String>) -> Self {
        CriterionVerdict {
            name,
            applicable: false,
            conclusion: Conclusion::Inconclusive,
            witnesses: Vec::new(),
            reason: reason.into(),
        }
    }
}

/// Sampling grid layout for the witness evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    /// Points before the near-origin exclusion; an odd count puts one
    /// exactly at the origin, which the exclusion then drops.
    pub points: usize,
    /// Fraction of the well half-width actually covered.
    pub span_fraction: f64,
    /// Half-width of the excluded strip around the origin.
    pub exclusion: f64,
    /// Outward scan limit when locating the well.
    pub x_cap: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points: 41,
            span_fraction: 0.8,
            exclusion: 1e-3,
            x_cap: 0.4,
        }
    }
}

/// Period-curve sampling parameters for the numeric cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveConfig {
    pub samples: usize,
    pub tol: f64,
}

impl Default for CurveConfig {
    fn default() -> Self {
        CurveConfig { samples: 6, tol: 1e-10 }
    }
}

/// Symmetric witness grid: evenly spaced across the central fraction of
/// the well, with the strip around the origin removed.
pub fn classification_grid(system: &SystemSpec, cfg: &GridConfig) -> Result<Vec<f64>> {
    let range = well_range(system.g(), cfg.x_cap)?;
    let span = cfg.span_fraction * range.b_max.min(-range.a_min);
    let n = cfg.points.max(2);
    let step = 2.0 * span / (n - 1) as f64;
    Ok((0..n)
        .map(|i| -span + step * i as f64)
        .filter(|x| x.abs() >= cfg.exclusion)
        .collect())
}

/// Noise floor under which a witness value does not count as signed.
pub fn witness_threshold(values: &[f64]) -> f64 {
    let peak = values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    1e-9 * peak.max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pattern {
    /// Every value inside the noise floor.
    Zero,
    /// Every value clears the floor on the positive side.
    StrictPos,
    StrictNeg,
    /// Nothing clears the floor negatively, at least one clears positively.
    WeakPos,
    WeakNeg,
    Mixed,
}

fn pattern(values: &[f64]) -> (Pattern, f64) {
    let thr = witness_threshold(values);
    let p = if values.iter().all(|v| v.abs() <= thr) {
        Pattern::Zero
    } else if values.iter().all(|&v| v > thr) {
        Pattern::StrictPos
    } else if values.iter().all(|&v| v < -thr) {
        Pattern::StrictNeg
    } else if values.iter().all(|&v| v >= -thr) {
        Pattern::WeakPos
    } else if values.iter().all(|&v| v <= thr) {
        Pattern::WeakNeg
    } else {
        Pattern::Mixed
    };
    (p, thr)
}

fn require_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Inapplicable("empty evaluation grid".into()));
    }
    Ok(())
}

fn conservative_only(system: &SystemSpec, name: &'static str) -> Option<CriterionVerdict> {
    if system.is_conservative() {
        None
    } else {
        Some(CriterionVerdict::inapplicable(
            name,
            "criterion assumes a conservative system, but damping is present",
        ))
    }
}

fn witnesses_of(grid: &[f64], values: &[f64]) -> Vec<Witness> {
    grid.iter()
        .zip(values)
        .map(|(&x, &value)| Witness { x, value })
        .collect()
}

/// Slope test on the averaged restoring force: the witness is (g(x)/x)'.
/// A force whose average stiffness falls with amplitude stretches the
/// period; one that stiffens shortens it.
pub fn criterion_opial(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "opial";
    if let Some(v) = conservative_only(system, NAME) {
        return Ok(v);
    }
    require_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut toward_origin = Vec::with_capacity(grid.len());
    for &x in grid {
        let d = derivatives_at(system.g(), x, 1)?;
        let w = (x * d[1] - d[0]) / (x * x);
        values.push(w);
        // Fold the two sides together: negative means average stiffness
        // drops away from the center.
        toward_origin.push(x.signum() * w);
    }
    let (p, thr) = pattern(&toward_origin);
    let (conclusion, reason) = match p {
        Pattern::Zero => (
            Conclusion::IsochronousCandidate,
            "g(x)/x is constant to within the noise floor".to_string(),
        ),
        Pattern::StrictNeg => (
            Conclusion::Increasing,
            "average stiffness g(x)/x strictly falls away from the origin on both sides"
                .to_string(),
        ),
        Pattern::StrictPos => (
            Conclusion::Decreasing,
            "average stiffness g(x)/x strictly grows away from the origin on both sides"
                .to_string(),
        ),
        _ => (
            Conclusion::Inconclusive,
            format!(
                "slope of g(x)/x is not one-signed relative to the origin \
                 (noise floor {thr:.3e})"
            ),
        ),
    };
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &values),
        reason,
    })
}

/// For convex restoring forces, compares the growth of g' against the
/// curvature via the witness x·(g''(0)·g'(x) - g'(0)·g''(x)).
pub fn criterion_chow_wang_c1(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "chow_wang_c1";
    if let Some(v) = conservative_only(system, NAME) {
        return Ok(v);
    }
    require_grid(grid)?;
    let gpp0 = system.gpp0();
    let gamma = system.gamma();
    let mut convex = true;
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        let d = derivatives_at(system.g(), x, 2)?;
        if d[2] <= 0.0 {
            convex = false;
        }
        values.push(x * (gpp0 * d[1] - gamma * d[2]));
    }
    if !convex {
        return Ok(CriterionVerdict {
            name: NAME,
            applicable: true,
            conclusion: Conclusion::Inconclusive,
            witnesses: witnesses_of(grid, &values),
            reason: "hypothesis fails: g'' is not positive across the grid".to_string(),
        });
    }
    let (p, thr) = pattern(&values);
    let (conclusion, reason) = match p {
        Pattern::Zero => (
            Conclusion::IsochronousCandidate,
            "curvature-weighted witness vanishes across the grid".to_string(),
        ),
        Pattern::StrictPos | Pattern::WeakPos => (
            Conclusion::Increasing,
            "witness x·(g''(0)g' - g'(0)g'') is nonnegative across the grid".to_string(),
        ),
        Pattern::StrictNeg | Pattern::WeakNeg => (
            Conclusion::Decreasing,
            "witness x·(g''(0)g' - g'(0)g'') is nonpositive across the grid".to_string(),
        ),
        Pattern::Mixed => (
            Conclusion::Inconclusive,
            format!("witness changes sign on the grid (noise floor {thr:.3e})"),
        ),
    };
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &values),
        reason,
    })
}

/// Energy-weighted witness g² + (g''(0)/(3·gamma²))·g³ - 2G·g'. One-signed
/// positivity certifies a growing period, negativity a shrinking one.
pub fn criterion_chow_wang_c0(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "chow_wang_c0";
    if let Some(v) = conservative_only(system, NAME) {
        return Ok(v);
    }
    require_grid(grid)?;
    let pot = potential(system.g());
    let gamma = system.gamma();
    let cubic_weight = system.gpp0() / (3.0 * gamma * gamma);
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        let d = derivatives_at(system.g(), x, 1)?;
        let g = d[0];
        let big_g = pot.eval(x)?;
        values.push(g * g + cubic_weight * g * g * g - 2.0 * big_g * d[1]);
    }
    let (p, thr) = pattern(&values);
    let (conclusion, reason) = match p {
        Pattern::Zero => (
            Conclusion::IsochronousCandidate,
            "energy-weighted witness vanishes across the grid".to_string(),
        ),
        Pattern::StrictPos => (
            Conclusion::Increasing,
            "energy-weighted witness is strictly positive across the grid".to_string(),
        ),
        Pattern::StrictNeg => (
            Conclusion::Decreasing,
            "energy-weighted witness is strictly negative across the grid".to_string(),
        ),
        _ => (
            Conclusion::Inconclusive,
            format!(
                "energy-weighted witness does not clear the noise floor {thr:.3e} \
                 with one sign"
            ),
        ),
    };
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &values),
        reason,
    })
}

/// Curvature-dominance witness 5·g''² - 3·g'·g'''. Where g' vanishes the
/// criterion additionally demands g·g'' < 0.
pub fn criterion_schaaf(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "schaaf";
    if let Some(v) = conservative_only(system, NAME) {
        return Ok(v);
    }
    require_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut derivs = Vec::with_capacity(grid.len());
    for &x in grid {
        let d = derivatives_at(system.g(), x, 3)?;
        values.push(5.0 * d[2] * d[2] - 3.0 * d[1] * d[3]);
        derivs.push(d);
    }
    // Side condition at critical points of g.
    let slope_floor = witness_threshold(&derivs.iter().map(|d| d[1]).collect::<Vec<_>>());
    for (i, d) in derivs.iter().enumerate() {
        if d[1].abs() <= slope_floor && d[0] * d[2] >= 0.0 {
            return Ok(CriterionVerdict {
                name: NAME,
                applicable: true,
                conclusion: Conclusion::Inconclusive,
                witnesses: witnesses_of(grid, &values),
                reason: format!(
                    "side condition fails at x = {:.6e}: g' vanishes there without g·g'' < 0",
                    grid[i]
                ),
            });
        }
    }
    let (p, thr) = pattern(&values);
    let (conclusion, reason) = match p {
        Pattern::Zero => (
            Conclusion::IsochronousCandidate,
            "curvature-dominance witness vanishes across the grid".to_string(),
        ),
        Pattern::StrictPos => (
            Conclusion::Increasing,
            "witness 5g''² - 3g'g''' is strictly positive across the grid".to_string(),
        ),
        Pattern::StrictNeg => (
            Conclusion::Decreasing,
            "witness 5g''² - 3g'g''' is strictly negative across the grid".to_string(),
        ),
        _ => (
            Conclusion::Inconclusive,
            format!("witness mixes signs on the grid (noise floor {thr:.3e})"),
        ),
    };
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &values),
        reason,
    })
}

/// One-sided witness x·(3g''(0)·g'² - g''(0)·g·g'' - 3·gamma²·g'').
pub fn criterion_rothe(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "rothe";
    if let Some(v) = conservative_only(system, NAME) {
        return Ok(v);
    }
    require_grid(grid)?;
    let gpp0 = system.gpp0();
    let gamma = system.gamma();
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        let d = derivatives_at(system.g(), x, 2)?;
        values.push(
            x * (3.0 * gpp0 * d[1] * d[1]
                - gpp0 * d[0] * d[2]
                - 3.0 * gamma * gamma * d[2]),
        );
    }
    let (p, thr) = pattern(&values);
    let (conclusion, reason) = match p {
        Pattern::Zero => (
            Conclusion::IsochronousCandidate,
            "witness vanishes across the grid".to_string(),
        ),
        Pattern::StrictPos | Pattern::WeakPos => (
            Conclusion::Increasing,
            "witness is nonnegative across the grid with clearance somewhere".to_string(),
        ),
        Pattern::StrictNeg | Pattern::WeakNeg => (
            Conclusion::Decreasing,
            "witness is nonpositive across the grid with clearance somewhere".to_string(),
        ),
        Pattern::Mixed => (
            Conclusion::Inconclusive,
            format!("witness changes sign on the grid (noise floor {thr:.3e})"),
        ),
    };
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &values),
        reason,
    })
}

/// Two-sided screening scan. Part one evaluates
/// g''(0)·(3g'² - g·g'' - 3·gamma²·g'') on the negative grid points inside
/// the nearest critical point of g; part two evaluates
/// g'·g''(0)/(g''·gamma²) - 2G/g² on the positive points. Only
/// nonvanishing is recorded; the conclusion is always inconclusive.
pub fn criterion_chouikha_c5(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "chouikha_c5";
    if let Some(v) = conservative_only(system, NAME) {
        return Ok(v);
    }
    require_grid(grid)?;
    let gamma = system.gamma();
    let gpp0 = system.gpp0();
    let pot = potential(system.g());

    // Negative points above the nearest critical point of g: walk outward
    // from the origin while g' stays positive.
    let mut neg_points: Vec<f64> = grid.iter().copied().filter(|&x| x < 0.0).collect();
    neg_points.sort_by(|a, b| b.partial_cmp(a).unwrap()); // toward -span
    let mut part_one = Vec::new();
    for &x in &neg_points {
        let d = derivatives_at(system.g(), x, 2)?;
        if d[1] <= 0.0 {
            break;
        }
        let w = gpp0 * (3.0 * d[1] * d[1] - d[0] * d[2] - 3.0 * gamma * gamma * d[2]);
        part_one.push(Witness { x, value: w });
    }

    let pos_points: Vec<f64> = grid.iter().copied().filter(|&x| x > 0.0).collect();
    let mut curvature = Vec::with_capacity(pos_points.len());
    for &x in &pos_points {
        curvature.push(derivatives_at(system.g(), x, 2)?);
    }
    let curv_floor =
        witness_threshold(&curvature.iter().map(|d| d[2]).collect::<Vec<_>>());
    let mut part_two = Vec::new();
    for (&x, d) in pos_points.iter().zip(&curvature) {
        if d[2].abs() <= curv_floor {
            continue; // quotient undefined at this point
        }
        let big_g = pot.eval(x)?;
        let w = d[1] * gpp0 / (d[2] * gamma * gamma) - 2.0 * big_g / (d[0] * d[0]);
        part_two.push(Witness { x, value: w });
    }
    if part_two.is_empty() && !pos_points.is_empty() {
        return Err(Error::UndefinedWitness(
            "g'' vanishes at every positive grid point, so the quotient witness \
             is undefined everywhere"
                .into(),
        ));
    }

    let describe = |vals: &[Witness]| -> String {
        if vals.is_empty() {
            return "no usable points".to_string();
        }
        let values: Vec<f64> = vals.iter().map(|w| w.value).collect();
        let (p, _) = pattern(&values);
        match p {
            Pattern::Zero => "vanishes within the noise floor".to_string(),
            Pattern::StrictPos => "nonvanishing, all positive".to_string(),
            Pattern::StrictNeg => "nonvanishing, all negative".to_string(),
            _ => "sign varies or touches the noise floor".to_string(),
        }
    };
    let reason = format!(
        "screening only: part one on {} points left of the origin ({}); \
         part two on {} points right of it ({})",
        part_one.len(),
        describe(&part_one),
        part_two.len(),
        describe(&part_two),
    );
    let mut witnesses = part_one;
    witnesses.extend(part_two);
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion: Conclusion::Inconclusive,
        witnesses,
        reason,
    })
}

/// Implication chain for restoring forces with no quadratic part: each of
/// x·g'' < 0, then g² - 2G·g' > 0, then x·(g/x)' < 0 is successively
/// weaker, and the last one pins a growing period (mirrored for the other
/// direction). The numerics verify each implication on the grid; a broken
/// link is reported as an internal defect rather than trusted.
pub fn criterion_sign_chain(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "sign_chain";
    if let Some(v) = conservative_only(system, NAME) {
        return Ok(v);
    }
    if system.gpp0().abs() > 1e-12 {
        return Ok(CriterionVerdict::inapplicable(
            NAME,
            "chain argument needs g''(0) = 0",
        ));
    }
    require_grid(grid)?;
    let pot = potential(system.g());
    let mut w1 = Vec::with_capacity(grid.len());
    let mut w2 = Vec::with_capacity(grid.len());
    let mut w3 = Vec::with_capacity(grid.len());
    for &x in grid {
        let d = derivatives_at(system.g(), x, 2)?;
        let big_g = pot.eval(x)?;
        w1.push(x * d[2]);
        w2.push(d[0] * d[0] - 2.0 * big_g * d[1]);
        w3.push((x * d[1] - d[0]) / x);
    }
    let (p1, _) = pattern(&w1);
    let (p2, _) = pattern(&w2);
    let (p3, _) = pattern(&w3);

    let label = |p: Pattern| match p {
        Pattern::Zero => "zero",
        Pattern::StrictPos => "positive",
        Pattern::StrictNeg => "negative",
        Pattern::WeakPos => "nonnegative",
        Pattern::WeakNeg => "nonpositive",
        Pattern::Mixed => "mixed",
    };
    let summary = format!(
        "x·g'' {}; g² - 2G·g' {}; x·(g/x)' {}",
        label(p1),
        label(p2),
        label(p3)
    );

    if p1 == Pattern::Zero && p2 == Pattern::Zero && p3 == Pattern::Zero {
        return Ok(CriterionVerdict {
            name: NAME,
            applicable: true,
            conclusion: Conclusion::IsochronousCandidate,
            witnesses: witnesses_of(grid, &w3),
            reason: format!("all three chain witnesses vanish: {summary}"),
        });
    }

    // Entry points for the increasing chain and its mirror, with the
    // downstream implications verified numerically.
    let check = |entry: usize, want2: Pattern, want3: Pattern| -> Option<bool> {
        // Returns Some(chain_ok); None if this direction has no entry.
        match entry {
            1 => Some(p2 == want2 && p3 == want3),
            2 => Some(p3 == want3),
            _ => Some(true),
        }
    };
    let (conclusion, reason);
    if p1 == Pattern::StrictNeg || p2 == Pattern::StrictPos || p3 == Pattern::StrictNeg {
        let entry = if p1 == Pattern::StrictNeg {
            1
        } else if p2 == Pattern::StrictPos {
            2
        } else {
            3
        };
        if check(entry, Pattern::StrictPos, Pattern::StrictNeg) == Some(true) {
            conclusion = Conclusion::Increasing;
            reason = format!("chain holds toward a growing period: {summary}");
        } else {
            conclusion = Conclusion::Inconclusive;
            reason = format!(
                "internal defect: a proven implication failed numerically ({summary}); \
                 treating the chain as unusable"
            );
        }
    } else if p1 == Pattern::StrictPos || p2 == Pattern::StrictNeg || p3 == Pattern::StrictPos
    {
        let entry = if p1 == Pattern::StrictPos {
            1
        } else if p2 == Pattern::StrictNeg {
            2
        } else {
            3
        };
        if check(entry, Pattern::StrictNeg, Pattern::StrictPos) == Some(true) {
            conclusion = Conclusion::Decreasing;
            reason = format!("chain holds toward a shrinking period: {summary}");
        } else {
            conclusion = Conclusion::Inconclusive;
            reason = format!(
                "internal defect: a proven implication failed numerically ({summary}); \
                 treating the chain as unusable"
            );
        }
    } else {
        conclusion = Conclusion::Inconclusive;
        reason = format!("no chain entry: {summary}");
    }
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &w3),
        reason,
    })
}

/// Local expansion data of the period function at the center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    /// Period of the linearization, 2π/sqrt(gamma).
    pub t0: f64,
    /// Cubic discriminant gamma·g'''(0) - (5/3)g''(0)² - (2/3)f'(0)²·gamma.
    pub q: f64,
    /// Normalized discriminant (3/(2·gamma²))·q.
    pub b: f64,
    /// Amplitude-squared period coefficient: T(a) = t0 + k·a² + O(a⁴).
    pub k: f64,
}

pub fn expansion_coefficients(system: &SystemSpec) -> Expansion {
    let gamma = system.gamma();
    let q = gamma * system.gppp0()
        - 5.0 / 3.0 * system.gpp0() * system.gpp0()
        - 2.0 / 3.0 * system.fp0() * system.fp0() * gamma;
    let b = 1.5 * q / (gamma * gamma);
    let k = -std::f64::consts::PI / (12.0 * system.sqrt_gamma()) * b;
    Expansion { t0: system.linear_period(), q, b, k }
}

/// Sign of the cubic discriminant: negative forces a locally growing
/// period, positive a locally shrinking one, an exact zero is the
/// threshold every isochronous center must sit on.
pub fn local_discriminant(system: &SystemSpec) -> CriterionVerdict {
    const NAME: &str = "local_discriminant";
    let gamma = system.gamma();
    let t1 = gamma * system.gppp0();
    let t2 = 5.0 / 3.0 * system.gpp0() * system.gpp0();
    let t3 = 2.0 / 3.0 * system.fp0() * system.fp0() * gamma;
    let q = t1 - t2 - t3;
    let thr = 1e-9 * t1.abs().max(t2.abs()).max(t3.abs()).max(1.0);
    let (conclusion, reason) = if q.abs() <= thr {
        (
            Conclusion::IsochronousCandidate,
            format!("discriminant {q:.3e} sits at the isochronous threshold"),
        )
    } else if q < 0.0 {
        (
            Conclusion::Increasing,
            format!("discriminant {q:.3e} is negative: period grows near the center"),
        )
    } else {
        (
            Conclusion::Decreasing,
            format!("discriminant {q:.3e} is positive: period shrinks near the center"),
        )
    };
    CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: vec![Witness { x: 0.0, value: q }],
        reason,
    }
}

/// Result of the local center obstruction test.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterCheck {
    /// f'(0)·g''(0) - 2·gamma·f''(0); must vanish at a center.
    pub residual: f64,
    /// Predicted cubic coefficient of the return displacement when the
    /// residual does not vanish.
    pub displacement_coefficient: f64,
    pub verdict: CriterionVerdict,
}

/// Necessary local condition for a center: the obstruction
/// f'(0)·g''(0) - 2·gamma·f''(0) must vanish. A nonzero value predicts a
/// first-return displacement Φ(a) ≈ (φ/6)·a³ with
/// φ = (3π/(8·gamma²))·obstruction.
pub fn center_necessary(system: &SystemSpec) -> CenterCheck {
    const NAME: &str = "center_necessary";
    let gamma = system.gamma();
    let t1 = system.fp0() * system.gpp0();
    let t2 = 2.0 * gamma * system.fpp0();
    let residual = t1 - t2;
    let thr = 1e-9 * t1.abs().max(t2.abs()).max(1.0);
    let phi = 3.0 * std::f64::consts::PI / (8.0 * gamma * gamma) * residual;
    let displacement_coefficient = phi / 6.0;
    let single = system.fp0() * system.gpp0() - gamma * system.fpp0();
    let verdict = if residual.abs() <= thr {
        CriterionVerdict {
            name: NAME,
            applicable: true,
            conclusion: Conclusion::Inconclusive,
            witnesses: vec![Witness { x: 0.0, value: residual }],
            reason: "local center obstruction vanishes; nothing against a center here"
                .to_string(),
        }
    } else {
        CriterionVerdict {
            name: NAME,
            applicable: true,
            conclusion: Conclusion::NotACenter,
            witnesses: vec![Witness { x: 0.0, value: residual }],
            reason: format!(
                "obstruction f'(0)g''(0) - 2·gamma·f''(0) = {residual:.6e}; orbits fail \
                 to close with displacement ≈ {displacement_coefficient:.6e}·a³ \
                 (single-derivative variant f'(0)g''(0) - gamma·f''(0) = {single:.6e})"
            ),
        }
    };
    CenterCheck { residual, displacement_coefficient, verdict }
}

/// Candidate damping slopes that a quadratic-in-g restoring force pairs
/// with on the isochronous threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsochroneTargets {
    /// Radicand 3·g'''(0) - 5·g''(0)²/gamma.
    pub radicand: f64,
    /// (f'(0), f''(0)) pairs, one per sign branch.
    pub targets: [(f64, f64); 2],
}

/// Solves for the damping slopes paired with g''(0) ≠ 0. Fails with
/// `Inapplicable` when g''(0) = 0 and `NoRealTarget` when the radicand is
/// negative.
pub fn isochrone_targets(system: &SystemSpec) -> Result<IsochroneTargets> {
    let gpp0 = system.gpp0();
    if gpp0 == 0.0 {
        return Err(Error::Inapplicable(
            "damping-slope targets need g''(0) != 0".into(),
        ));
    }
    let gamma = system.gamma();
    let radicand = 3.0 * system.gppp0() - 5.0 * gpp0 * gpp0 / gamma;
    if radicand < 0.0 {
        return Err(Error::NoRealTarget { radicand });
    }
    let root = radicand.sqrt();
    let second = gpp0 / (2.0 * gamma) * root;
    Ok(IsochroneTargets {
        radicand,
        targets: [(root, second), (-root, -second)],
    })
}

/// Curvature of the commutator slope: the witness is x·C''(x). Requires a
/// restoring force and damping with no quadratic part at the origin.
pub fn criterion_convexity(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "convexity";
    if system.gpp0().abs() > 1e-12 || system.fpp0().abs() > 1e-12 {
        return Ok(CriterionVerdict::inapplicable(
            NAME,
            "curvature test needs g''(0) = 0 and f''(0) = 0",
        ));
    }
    require_grid(grid)?;
    // Exact path: both right-hand sides polynomial makes C itself a
    // polynomial, since M² carries a factor x⁶.
    let exact: Option<Poly> = (|| {
        let fp = Poly::from_expr(system.f())?;
        let gp = Poly::from_expr(system.g())?;
        let m = fp.mul_x().antiderivative();
        let m2 = m.mul(&m).deflate(6)?;
        let c = gp
            .scale(1.0 / system.gamma())
            .sub(&m2.mul_x().mul_x().mul_x().scale(1.0 / system.gamma()));
        Some(c.derivative().derivative())
    })();
    let mut values = Vec::with_capacity(grid.len());
    match &exact {
        Some(cpp) => {
            for &x in grid {
                values.push(x * cpp.eval(x));
            }
        }
        None => {
            let h = 1e-4;
            for &x in grid {
                let cpp = (sabatini_c(system, x + h)? - 2.0 * sabatini_c(system, x)?
                    + sabatini_c(system, x - h)?)
                    / (h * h);
                values.push(x * cpp);
            }
        }
    }
    let (p, thr) = pattern(&values);
    let (conclusion, reason) = match p {
        Pattern::Zero => (
            Conclusion::IsochronousCandidate,
            "commutator slope is flat: x·C'' vanishes across the grid".to_string(),
        ),
        Pattern::StrictNeg => (
            Conclusion::Increasing,
            "commutator slope bends against the radius: x·C'' < 0 across the grid"
                .to_string(),
        ),
        Pattern::StrictPos => (
            Conclusion::Decreasing,
            "commutator slope bends with the radius: x·C'' > 0 across the grid"
                .to_string(),
        ),
        _ => (
            Conclusion::Inconclusive,
            format!("x·C'' does not keep one sign (noise floor {thr:.3e})"),
        ),
    };
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &values),
        reason,
    })
}

/// Sign of the drift discriminant sigma = -x⁵·(C/x)'. Nonnegative across
/// the grid certifies a growing period, nonpositive a shrinking one.
/// Requires x·C > 0 on the grid and no quadratic parts at the origin.
pub fn criterion_sigma_sign(system: &SystemSpec, grid: &[f64]) -> Result<CriterionVerdict> {
    const NAME: &str = "sigma_sign";
    if system.gpp0().abs() > 1e-12 || system.fpp0().abs() > 1e-12 {
        return Ok(CriterionVerdict::inapplicable(
            NAME,
            "drift test needs g''(0) = 0 and f''(0) = 0",
        ));
    }
    require_grid(grid)?;
    for &x in grid {
        if x * sabatini_c(system, x)? <= 0.0 {
            return Ok(CriterionVerdict {
                name: NAME,
                applicable: true,
                conclusion: Conclusion::Inconclusive,
                witnesses: Vec::new(),
                reason: format!(
                    "hypothesis fails: x·C(x) is not positive at x = {x:.6e}"
                ),
            });
        }
    }
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        values.push(sigma(system, x)?);
    }
    let (p, thr) = pattern(&values);
    let (conclusion, reason) = match p {
        Pattern::Zero => (
            Conclusion::IsochronousCandidate,
            "drift discriminant vanishes across the grid".to_string(),
        ),
        Pattern::StrictPos | Pattern::WeakPos => (
            Conclusion::Increasing,
            "drift discriminant is nonnegative across the grid".to_string(),
        ),
        Pattern::StrictNeg | Pattern::WeakNeg => (
            Conclusion::Decreasing,
            "drift discriminant is nonpositive across the grid".to_string(),
        ),
        Pattern::Mixed => (
            Conclusion::Inconclusive,
            format!("drift discriminant changes sign (noise floor {thr:.3e})"),
        ),
    };
    Ok(CriterionVerdict {
        name: NAME,
        applicable: true,
        conclusion,
        witnesses: witnesses_of(grid, &values),
        reason,
    })
}

/// Full classification output.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub conclusion: Conclusion,
    pub expansion: Expansion,
    pub criteria: Vec<CriterionVerdict>,
    pub curve: Option<PeriodCurve>,
    /// True when every criterion that reached a direction agrees with the
    /// sampled curve; vacuously true when nothing concluded.
    pub agreement: bool,
    /// For isochronous candidates with g''(0) != 0: whether the damping
    /// curvature matches the slope pairing f''(0) = (g''(0)/(2·gamma))·f'(0)
    /// that such a center requires.
    pub conservative_crosscheck: Option<bool>,
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![hi];
    }
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|i| lo * ratio.powi(i as i32)).collect()
}

fn fold_c5(result: Result<CriterionVerdict>) -> Result<CriterionVerdict> {
    match result {
        Err(Error::UndefinedWitness(msg)) => {
            Ok(CriterionVerdict::inapplicable("chouikha_c5", msg))
        }
        other => other,
    }
}

fn fold_targets(system: &SystemSpec) -> CriterionVerdict {
    const NAME: &str = "isochrone_targets";
    match isochrone_targets(system) {
        Ok(t) => CriterionVerdict {
            name: NAME,
            applicable: true,
            conclusion: Conclusion::Inconclusive,
            witnesses: vec![Witness { x: 0.0, value: t.radicand }],
            reason: format!(
                "informational: the isochronous threshold pairs this g with damping \
                 slopes f'(0) = ±{:.6e} and curvatures f''(0) = ±{:.6e}",
                t.targets[0].0, t.targets[0].1
            ),
        },
        Err(Error::Inapplicable(msg)) => CriterionVerdict::inapplicable(NAME, msg),
        Err(Error::NoRealTarget { radicand }) => CriterionVerdict {
            name: NAME,
            applicable: true,
            conclusion: Conclusion::Inconclusive,
            witnesses: vec![Witness { x: 0.0, value: radicand }],
            reason: format!(
                "radicand {radicand:.6e} is negative: no real damping slope reaches \
                 the isochronous threshold for this g"
            ),
        },
        Err(_) => unreachable!("target solver only fails with the two errors above"),
    }
}

/// Runs every criterion, samples a numeric period curve, and reconciles
/// the two. A failed center obstruction short-circuits everything else.
pub fn classify(
    system: &SystemSpec,
    grid_cfg: &GridConfig,
    curve_cfg: &CurveConfig,
) -> Result<ClassificationReport> {
    let expansion = expansion_coefficients(system);
    let center = center_necessary(system);
    if center.verdict.conclusion == Conclusion::NotACenter {
        return Ok(ClassificationReport {
            conclusion: Conclusion::NotACenter,
            expansion,
            criteria: vec![center.verdict],
            curve: None,
            agreement: true,
            conservative_crosscheck: None,
        });
    }

    let grid = classification_grid(system, grid_cfg)?;
    let mut criteria = Vec::with_capacity(12);
    criteria.push(criterion_opial(system, &grid)?);
    criteria.push(criterion_chow_wang_c1(system, &grid)?);
    criteria.push(criterion_chow_wang_c0(system, &grid)?);
    criteria.push(criterion_schaaf(system, &grid)?);
    criteria.push(criterion_rothe(system, &grid)?);
    criteria.push(fold_c5(criterion_chouikha_c5(system, &grid))?);
    criteria.push(criterion_sign_chain(system, &grid)?);
    criteria.push(local_discriminant(system));
    criteria.push(center.verdict.clone());
    criteria.push(fold_targets(system));
    criteria.push(criterion_convexity(system, &grid)?);
    criteria.push(criterion_sigma_sign(system, &grid)?);

    let curve = if system.is_conservative() {
        let range = well_range(system.g(), grid_cfg.x_cap)?;
        let energies = geometric(0.05 * range.c_max, 0.8 * range.c_max, curve_cfg.samples);
        period_curve_conservative(system.g(), &range, &energies, curve_cfg.tol)?
    } else {
        let cap = small_amplitude_cap(system, grid_cfg.x_cap)?;
        let amplitudes = geometric(0.25 * cap, 0.9 * cap, curve_cfg.samples);
        period_curve_lienard(system, &amplitudes, curve_cfg.tol)?
    };
    let curve_verdict = curve.verdict()?;

    let matches = |c: Conclusion| match (c, curve_verdict) {
        (Conclusion::Increasing, CurveVerdict::Increasing) => true,
        (Conclusion::Decreasing, CurveVerdict::Decreasing) => true,
        (Conclusion::IsochronousCandidate, CurveVerdict::Constant) => true,
        _ => false,
    };
    let agreement = criteria
        .iter()
        .filter(|v| v.applicable && v.conclusion != Conclusion::Inconclusive)
        .all(|v| matches(v.conclusion));

    let conclusion = if !agreement {
        Conclusion::Inconclusive
    } else {
        match curve_verdict {
            CurveVerdict::Increasing => Conclusion::Increasing,
            CurveVerdict::Decreasing => Conclusion::Decreasing,
            CurveVerdict::Constant => Conclusion::IsochronousCandidate,
            CurveVerdict::Mixed => Conclusion::Inconclusive,
        }
    };

    let conservative_crosscheck = if conclusion == Conclusion::IsochronousCandidate
        && system.gpp0().abs() > 1e-12
    {
        let want = system.gpp0() / (2.0 * system.gamma()) * system.fp0();
        let diff = (system.fpp0() - want).abs();
        Some(diff <= 1e-9 * system.fpp0().abs().max(want.abs()).max(1.0))
    } else {
        None
    };

    Ok(ClassificationReport {
        conclusion,
        expansion,
        criteria,
        curve: Some(curve),
        agreement,
        conservative_crosscheck,
    })
}
