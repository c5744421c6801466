//! Truncated Taylor series ("jets") for forward-mode differentiation, plus
//! the two calculus helpers built on top of them: exact polynomial
//! antiderivatives and moment integrals.
//!
//! A jet stores `coeffs[k] = h^(k)(base) / k!`, so products are plain Cauchy
//! convolutions with no factorial bookkeeping. Arithmetic is exact in the
//! sense of floating point: no truncation error enters below the jet order.

use crate::error::{Error, Result};
use crate::expr::{Expr, UnaryFn};
use crate::poly::Poly;
use crate::quad;

/// Order used when nothing else is requested: enough for third derivatives
/// with one coefficient to spare.
pub const DEFAULT_ORDER: usize = 4;

/// Taylor jet of a scalar function at a fixed expansion point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base: f64,
    /// `coeffs[k]` is the k-th Taylor coefficient, i.e. `h^(k)(base) / k!`.
    coeffs: Vec<f64>,
}

impl Jet {
    /// The identity function's jet: value `x0`, first derivative 1.
    pub fn seed(x0: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = x0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { base: x0, coeffs }
    }

    pub fn constant(v: f64, base: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = v;
        Jet { base, coeffs }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Truncation order; the jet carries `order + 1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &Jet) {
        assert_eq!(self.base, other.base, "jet arithmetic requires equal base points");
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "jet arithmetic requires equal orders"
        );
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Jet { base: self.base, coeffs }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Jet { base: self.base, coeffs }
    }

    pub fn neg(&self) -> Jet {
        Jet { base: self.base, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Jet) -> Jet {
        self.check_compatible(other);
        let n = self.coeffs.len();
        let mut coeffs = vec![0.0; n];
        for k in 0..n {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.coeffs[j] * other.coeffs[k - j];
            }
            coeffs[k] = acc;
        }
        Jet { base: self.base, coeffs }
    }

    /// Division solves the convolution for the quotient term by term; the
    /// divisor's value must be nonzero.
    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other);
        let b0 = other.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::DomainError(format!(
                "jet division by a function vanishing at x = {:e}",
                self.base
            )));
        }
        let n = self.coeffs.len();
        let mut coeffs = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 0..k {
                acc -= coeffs[j] * other.coeffs[k - j];
            }
            coeffs[k] = acc / b0;
        }
        Ok(Jet { base: self.base, coeffs })
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.base, self.order());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let mut v = vec![0.0; n];
        v[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeffs[j] * v[k - j];
            }
            v[k] = acc / k as f64;
        }
        Jet { base: self.base, coeffs: v }
    }

    /// sin and cos propagate together through the coupled recurrence
    /// s' = u' c, c' = -u' s.
    fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.coeffs.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..n {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                sa += j as f64 * self.coeffs[j] * c[k - j];
                ca += j as f64 * self.coeffs[j] * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = -ca / k as f64;
        }
        (
            Jet { base: self.base, coeffs: s },
            Jet { base: self.base, coeffs: c },
        )
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let u0 = self.coeffs[0];
        if u0 < 0.0 {
            return Err(Error::DomainError(format!(
                "sqrt of negative value {u0:e} in jet at x = {:e}",
                self.base
            )));
        }
        let n = self.coeffs.len();
        if u0 == 0.0 && n > 1 {
            // sqrt is not differentiable where its argument vanishes.
            return Err(Error::DomainError(format!(
                "sqrt jet at a zero of its argument, x = {:e}",
                self.base
            )));
        }
        let mut v = vec![0.0; n];
        v[0] = u0.sqrt();
        for k in 1..n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= v[j] * v[k - j];
            }
            v[k] = acc / (2.0 * v[0]);
        }
        Ok(Jet { base: self.base, coeffs: v })
    }

    /// atan via v' = u' / (1 + u^2): differentiate the argument formally,
    /// divide as series, integrate back.
    pub fn atan(&self) -> Jet {
        let n = self.coeffs.len();
        let w = self.mul(self); // u^2
        let mut denom = w.coeffs.clone();
        denom[0] += 1.0;
        // u' as a series of length n-1.
        let uprime: Vec<f64> = (1..n).map(|k| k as f64 * self.coeffs[k]).collect();
        // q = u' / (1 + u^2), truncated at length n-1. 1 + u^2 >= 1 > 0, so
        // the division cannot fail.
        let mut q = vec![0.0; uprime.len()];
        for k in 0..q.len() {
            let mut acc = uprime[k];
            for j in 0..k {
                acc -= q[j] * denom[k - j];
            }
            q[k] = acc / denom[0];
        }
        let mut v = vec![0.0; n];
        v[0] = self.coeffs[0].atan();
        for k in 1..n {
            v[k] = q[k - 1] / k as f64;
        }
        Jet { base: self.base, coeffs: v }
    }
}

/// Evaluate the jet of `expr` at `x0` to the given truncation order.
pub fn eval_jet(expr: &Expr, x0: f64, order: usize) -> Result<Jet> {
    Ok(match expr {
        Expr::Const(c) => Jet::constant(*c, x0, order),
        Expr::Var => Jet::seed(x0, order),
        Expr::Neg(e) => eval_jet(e, x0, order)?.neg(),
        Expr::Add(a, b) => eval_jet(a, x0, order)?.add(&eval_jet(b, x0, order)?),
        Expr::Sub(a, b) => eval_jet(a, x0, order)?.sub(&eval_jet(b, x0, order)?),
        Expr::Mul(a, b) => eval_jet(a, x0, order)?.mul(&eval_jet(b, x0, order)?),
        Expr::Div(a, b) => eval_jet(a, x0, order)?.div(&eval_jet(b, x0, order)?)?,
        Expr::Pow(base, n) => eval_jet(base, x0, order)?.powi(*n),
        Expr::Fun(f, arg) => {
            let u = eval_jet(arg, x0, order)?;
            match f {
                UnaryFn::Sin => u.sin(),
                UnaryFn::Cos => u.cos(),
                UnaryFn::Exp => u.exp(),
                UnaryFn::Sqrt => u.sqrt()?,
                UnaryFn::Atan => u.atan(),
            }
        }
    })
}

/// Derivative values `[h(x0), h'(x0), ..., h^(k)(x0)]`, i.e. the jet
/// coefficients rescaled by factorials.
pub fn derivatives_at(expr: &Expr, x0: f64, k: usize) -> Result<Vec<f64>> {
    let jet = eval_jet(expr, x0, k)?;
    let mut factorial = 1.0;
    Ok((0..=k)
        .map(|j| {
            if j > 0 {
                factorial *= j as f64;
            }
            factorial * jet.coeff(j)
        })
        .collect())
}

/// Antiderivative with zero constant term, for structurally polynomial
/// expressions only. Products and powers are distributed first, so
/// `(x + 1) * (x - 1)` is accepted while `sin(x)` is not.
pub fn poly_antiderivative(expr: &Expr) -> Result<Expr> {
    let p = Poly::from_expr(expr).ok_or(Error::NotPolynomial)?;
    Ok(p.antiderivative().to_expr())
}

/// The moment integral `M(x) = ∫₀ˣ s·f(s) ds`.
///
/// Polynomial `f` goes through the exact antiderivative; anything else is
/// handled by adaptive Gauss–Kronrod quadrature at relative tolerance 1e-12.
pub fn moment_integral(f: &Expr, x: f64) -> Result<f64> {
    if let Some(p) = Poly::from_expr(f) {
        let primitive = p.mul_x().antiderivative();
        return Ok(primitive.eval(x));
    }
    quad::adaptive(&mut |s| Ok(s * f.eval(s)?), 0.0, x, 1e-12)
}
