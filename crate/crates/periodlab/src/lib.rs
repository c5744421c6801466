//! Period function laboratory for planar centers.
//!
//! The crate studies the oscillation period of
//!
//! ```text
//! x'' + f(x) x' + g(x) = 0
//! ```
//!
//! around a center at the origin: how the period of the orbit through a
//! given amplitude or energy changes as the orbit grows. It computes the
//! period two independent ways (an energy-level quadrature for
//! conservative systems, a first-return integration otherwise), expands
//! it locally at the center, evaluates a battery of sign criteria that
//! certify growth, decay, or isochronicity, and reconciles all of it in
//! one classification report.
//!
//! Entry points:
//!
//! - [`SystemSpec::from_strings`] parses and validates a system.
//! - [`classify`] runs everything and returns a [`ClassificationReport`].
//! - [`period_conservative`] and [`return_map`] expose the two period
//!   computations directly.
//! - [`render_report_json`] and friends turn results into documents.

pub mod builtin;
pub mod conservative;
pub mod criteria;
pub mod error;
pub mod expr;
pub mod jet;
pub mod lienard;
pub mod ode;
pub mod poly;
pub mod quad;
pub mod report;
pub mod system;

pub use conservative::{
    monotonicity_verdict, period_conservative, period_conservative_with_tol,
    period_curve_conservative, potential, turning_points, well_range, CurveMethod,
    CurveSample, CurveVerdict, Parameterization, PeriodCurve, TurningPoints, WellRange,
};
pub use criteria::{
    center_necessary, classification_grid, classify, criterion_chouikha_c5,
    criterion_chow_wang_c0, criterion_chow_wang_c1, criterion_convexity, criterion_opial,
    criterion_rothe, criterion_schaaf, criterion_sigma_sign, criterion_sign_chain,
    expansion_coefficients, isochrone_targets, local_discriminant, witness_threshold,
    CenterCheck, ClassificationReport, Conclusion, CriterionVerdict, CurveConfig, Expansion,
    GridConfig, IsochroneTargets, Witness,
};
pub use error::{Error, Result};
pub use expr::{differentiate, Expr};
pub use jet::{derivatives_at, eval_jet, moment_integral, poly_antiderivative, Jet};
pub use lienard::{
    integrate_step, isochronicity_residual, period_curve_lienard, rayleigh_to_lienard,
    return_map, sabatini_c, sigma, small_amplitude_cap, vector_field, PhaseState,
    RayleighReduction, ReturnMapResult, X_SWITCH,
};
pub use report::{
    render_builtin_json, render_builtin_list_json, render_builtin_list_text,
    render_curve_csv, render_report_json, render_report_text, ParsedCriterion,
    ParsedDerivatives, ParsedReport, ParsedSystem,
};
pub use system::SystemSpec;

/// Runnable versions of every code block in the guide. Each chapter file
/// is compiled as documentation here, so the guide cannot drift from the
/// library.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    pub mod expressions {}
    #[doc = include_str!("../../../book/src/jets.md")]
    pub mod jets {}
    #[doc = include_str!("../../../book/src/conservative.md")]
    pub mod conservative {}
    #[doc = include_str!("../../../book/src/lienard.md")]
    pub mod lienard {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    pub mod criteria {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
