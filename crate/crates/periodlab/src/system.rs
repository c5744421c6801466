//! System descriptions for x'' + f(x)·x' + g(x) = 0.
//!
//! `SystemSpec` owns the two expressions, validates the center-at-origin
//! preconditions, and caches the handful of derivatives at 0 that nearly
//! every classifier consumes.

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::jet::{derivatives_at, eval_jet};

/// Checks that the origin is an equilibrium with linear center behavior:
/// f(0) = 0, g(0) = 0, and g'(0) > 0.
pub fn validate_system(f: &Expr, g: &Expr) -> Result<()> {
    let f0 = f.eval(0.0)?;
    if f0 != 0.0 {
        return Err(Error::NotAtOrigin { which: 'f', value: f0 });
    }
    let g0 = g.eval(0.0)?;
    if g0 != 0.0 {
        return Err(Error::NotAtOrigin { which: 'g', value: g0 });
    }
    let gp0 = derivatives_at(g, 0.0, 1)?[1];
    if !(gp0 > 0.0) {
        return Err(Error::NonpositiveStiffness { gp0 });
    }
    Ok(())
}

/// Conservative detection: a literal zero, or a vanishing 2-jet at the
/// origin backed by spot checks on [-1, 1]. The spot checks reject damping
/// terms that merely vanish to high order at 0, like sin(x) - x.
fn detect_conservative(f: &Expr) -> bool {
    if matches!(f, Expr::Const(c) if *c == 0.0) {
        return true;
    }
    let flat_at_zero = eval_jet(f, 0.0, 2)
        .map(|j| j.coeffs().iter().all(|&c| c == 0.0))
        .unwrap_or(false);
    if !flat_at_zero {
        return false;
    }
    const SAMPLES: [f64; 8] = [-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0];
    SAMPLES
        .iter()
        .all(|&x| f.eval(x).map(|v| v.abs() <= 1e-12).unwrap_or(false))
}

/// A validated Liénard system with cached local data at the origin.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    f: Expr,
    g: Expr,
    f_text: String,
    g_text: String,
    f0: f64,
    fp0: f64,
    fpp0: f64,
    gp0: f64,
    gpp0: f64,
    gppp0: f64,
    sqrt_gp0: f64,
    conservative: bool,
}

impl SystemSpec {
    pub fn new(f: Expr, g: Expr) -> Result<SystemSpec> {
        validate_system(&f, &g)?;
        let fd = derivatives_at(&f, 0.0, 2)?;
        let gd = derivatives_at(&g, 0.0, 3)?;
        let conservative = detect_conservative(&f);
        Ok(SystemSpec {
            f_text: f.to_string(),
            g_text: g.to_string(),
            f0: fd[0],
            fp0: fd[1],
            fpp0: fd[2],
            gp0: gd[1],
            gpp0: gd[2],
            gppp0: gd[3],
            sqrt_gp0: gd[1].sqrt(),
            conservative,
            f,
            g,
        })
    }

    /// Parses both right-hand sides and validates. The damping source may be
    /// "0" for a conservative system.
    pub fn from_strings(f_src: &str, g_src: &str) -> Result<SystemSpec> {
        SystemSpec::new(parse(f_src)?, parse(g_src)?)
    }

    /// A conservative x'' + g(x) = 0 system.
    pub fn conservative_from_str(g_src: &str) -> Result<SystemSpec> {
        SystemSpec::new(Expr::Const(0.0), parse(g_src)?)
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    /// Canonical text of the damping term, as reparsed and printed.
    pub fn f_text(&self) -> &str {
        &self.f_text
    }

    /// Canonical text of the restoring term.
    pub fn g_text(&self) -> &str {
        &self.g_text
    }

    pub fn eval_f(&self, x: f64) -> Result<f64> {
        self.f.eval(x)
    }

    pub fn eval_g(&self, x: f64) -> Result<f64> {
        self.g.eval(x)
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn fp0(&self) -> f64 {
        self.fp0
    }

    pub fn fpp0(&self) -> f64 {
        self.fpp0
    }

    /// The linearization frequency squared, g'(0); written gamma throughout.
    pub fn gamma(&self) -> f64 {
        self.gp0
    }

    pub fn gpp0(&self) -> f64 {
        self.gpp0
    }

    pub fn gppp0(&self) -> f64 {
        self.gppp0
    }

    pub fn sqrt_gamma(&self) -> f64 {
        self.sqrt_gp0
    }

    pub fn is_conservative(&self) -> bool {
        self.conservative
    }

    /// Linear period 2π/sqrt(gamma): the limit of the period function at the
    /// center itself.
    pub fn linear_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.sqrt_gp0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_is_conservative_with_unit_gamma() {
        let s = SystemSpec::from_strings("0", "x").unwrap();
        assert!(s.is_conservative());
        assert_eq!(s.gamma(), 1.0);
        assert_eq!(s.sqrt_gamma(), 1.0);
        assert!((s.linear_period() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn pendulum_third_derivative() {
        let s = SystemSpec::conservative_from_str("sin(x)").unwrap();
        assert!(s.is_conservative());
        assert_eq!(s.gamma(), 1.0);
        assert_eq!(s.gpp0(), 0.0);
        assert!((s.gppp0() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_damping_is_not_conservative() {
        let s = SystemSpec::from_strings("x", "x").unwrap();
        assert!(!s.is_conservative());
        assert_eq!(s.fp0(), 1.0);
        assert_eq!(s.fpp0(), 0.0);
    }

    #[test]
    fn cubic_order_damping_is_caught_by_samples() {
        // sin(x) - x vanishes to order 2 at the origin but is not zero.
        let s = SystemSpec::from_strings("sin(x) - x", "x").unwrap();
        assert!(!s.is_conservative());
    }

    #[test]
    fn structurally_zero_damping_counts_as_conservative() {
        let s = SystemSpec::from_strings("0*x", "x").unwrap();
        assert!(s.is_conservative());
    }

    #[test]
    fn displaced_restoring_term_is_rejected() {
        match SystemSpec::from_strings("0", "x + 1") {
            Err(Error::NotAtOrigin { which: 'g', value }) => assert_eq!(value, 1.0),
            other => panic!("expected NotAtOrigin for g, got {other:?}"),
        }
        match SystemSpec::from_strings("1", "x") {
            Err(Error::NotAtOrigin { which: 'f', value }) => assert_eq!(value, 1.0),
            other => panic!("expected NotAtOrigin for f, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_stiffness_is_rejected() {
        assert!(matches!(
            SystemSpec::from_strings("0", "-x"),
            Err(Error::NonpositiveStiffness { .. })
        ));
        assert!(matches!(
            SystemSpec::from_strings("0", "x^2"),
            Err(Error::NonpositiveStiffness { .. })
        ));
    }

    #[test]
    fn isochrone_third_derivative_is_exact() {
        let s = SystemSpec::from_strings("x", "x + x^3/9").unwrap();
        assert_eq!(s.gppp0(), 2.0 / 3.0);
        assert_eq!(s.fp0(), 1.0);
    }

    #[test]
    fn gamma_scaling() {
        let s = SystemSpec::conservative_from_str("4*x").unwrap();
        assert_eq!(s.gamma(), 4.0);
        assert_eq!(s.sqrt_gamma(), 2.0);
        assert!((s.linear_period() - std::f64::consts::PI).abs() < 1e-15);
    }
}
