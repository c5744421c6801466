use thiserror::Error;

/// Everything that can go wrong across the crate, from lexing an expression
/// to a return map never closing up.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("illegal character '{ch}' at offset {offset}")]
    IllegalCharacter { ch: char, offset: usize },

    #[error("malformed number literal at offset {offset}")]
    MalformedNumber { offset: usize },

    #[error("unexpected token at offset {offset}: {detail}")]
    UnexpectedToken { offset: usize, detail: String },

    #[error("unknown identifier '{name}' (the variable is 'x'; functions are sin, cos, exp, sqrt, atan)")]
    UnknownIdentifier { name: String },

    #[error("unbalanced parentheses")]
    UnbalancedParentheses,

    /// f(0) or g(0) is not zero, so the origin is not an equilibrium.
    #[error("{which}(0) = {value:e} but the origin must be an equilibrium ({which}(0) = 0)")]
    NotAtOrigin { which: char, value: f64 },

    /// g'(0) <= 0: the linearization at the origin is not a center.
    #[error("g'(0) = {gp0:e} but a center requires g'(0) > 0")]
    NonpositiveStiffness { gp0: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("expression is not a polynomial")]
    NotPolynomial,

    /// g vanishes identically on one side of the origin; there is no
    /// potential well to work in.
    #[error("degenerate well: g vanishes identically on one side of the origin")]
    DegenerateWell,

    #[error("energy {c:e} is outside the validated range (0, {c_max:e})")]
    EnergyOutOfRange { c: f64, c_max: f64 },

    #[error("quadrature did not converge to the requested tolerance")]
    QuadratureNoConvergence,

    #[error("integrator step size underflowed below 1e-14")]
    StepUnderflow,

    #[error("trajectory left the bounding box or exceeded the time budget without returning")]
    NoReturn,

    /// The orbit through (c, 0) does not close: the return map moved the
    /// starting point by phi.
    #[error("not a center: orbit through ({c:e}, 0) returned displaced by phi = {phi:e}")]
    NotACenter { c: f64, phi: f64 },

    #[error("too few samples: a monotonicity verdict needs at least 3")]
    TooFewSamples,

    /// The isochrone-target radicand is negative; no real perturbation
    /// targets exist.
    #[error("no real isochrone targets: radicand {radicand:e} < 0")]
    NoRealTarget { radicand: f64 },

    #[error("criterion not applicable: {0}")]
    Inapplicable(String),

    /// A criterion witness involves a division that vanishes over the whole
    /// grid it is evaluated on.
    #[error("criterion witness undefined: {0}")]
    UndefinedWitness(String),

    #[error("invalid range: lo = {lo:e}, hi = {hi:e} (need 0 < lo < hi and n >= 2)")]
    InvalidRange { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
