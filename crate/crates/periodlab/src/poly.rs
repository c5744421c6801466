//! Dense univariate polynomials, used for the exact paths: antiderivatives,
//! moment integrals, and convexity witnesses avoid quadrature entirely when
//! the inputs are polynomial.

use crate::expr::Expr;

/// Coefficients in ascending order; the empty vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly { coeffs }.trim()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Poly { coeffs }.trim()
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| c * s).collect() }.trim()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }.trim()
    }

    /// Multiply by x (used to form s * f(s) before integrating).
    pub fn mul_x(&self) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut coeffs = vec![0.0];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Poly { coeffs }.trim()
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = vec![0.0];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Poly { coeffs }.trim()
    }

    /// Divide by x^k, requiring the low-order coefficients to vanish exactly.
    pub fn deflate(&self, k: usize) -> Option<Poly> {
        if self.coeffs.len() < k {
            return if self.is_zero() { Some(Poly::zero()) } else { None };
        }
        if self.coeffs[..k].iter().any(|&c| c != 0.0) {
            return None;
        }
        Some(Poly { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Structural conversion from an expression tree; `None` when the tree
    /// contains a transcendental function or a non-constant divisor.
    pub fn from_expr(e: &Expr) -> Option<Poly> {
        const MAX_DEGREE: usize = 512;
        let p = match e {
            Expr::Const(c) => Poly::constant(*c),
            Expr::Var => Poly { coeffs: vec![0.0, 1.0] },
            Expr::Neg(inner) => Poly::from_expr(inner)?.neg(),
            Expr::Add(a, b) => Poly::from_expr(a)?.add(&Poly::from_expr(b)?),
            Expr::Sub(a, b) => Poly::from_expr(a)?.sub(&Poly::from_expr(b)?),
            Expr::Mul(a, b) => Poly::from_expr(a)?.mul(&Poly::from_expr(b)?),
            Expr::Div(a, b) => {
                let den = Poly::from_expr(b)?;
                // Only division by a nonzero constant keeps us polynomial.
                if den.coeffs.len() == 1 && den.coeffs[0] != 0.0 {
                    Poly::from_expr(a)?.scale(1.0 / den.coeffs[0])
                } else {
                    return None;
                }
            }
            Expr::Pow(base, n) => {
                let b = Poly::from_expr(base)?;
                let mut acc = Poly::constant(1.0);
                for _ in 0..*n {
                    acc = acc.mul(&b);
                    if acc.coeffs.len() > MAX_DEGREE {
                        return None;
                    }
                }
                acc
            }
            Expr::Fun(..) => return None,
        };
        if p.coeffs.len() > MAX_DEGREE {
            return None;
        }
        Some(p)
    }

    /// Render back as an expression: a sum of `c * x^k` terms. Coefficients
    /// are carried verbatim, so evaluating the expression reproduces the
    /// polynomial exactly.
    pub fn to_expr(&self) -> Expr {
        let mut terms: Vec<Expr> = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let monomial = match k {
                0 => None,
                1 => Some(Expr::Var),
                _ => Some(Expr::Pow(Box::new(Expr::Var), k as u32)),
            };
            let term = match (c, monomial) {
                (c, None) => const_expr(c),
                (c, Some(m)) if c == 1.0 => m,
                (c, Some(m)) if c == -1.0 => Expr::Neg(Box::new(m)),
                (c, Some(m)) => Expr::Mul(Box::new(const_expr(c)), Box::new(m)),
            };
            terms.push(term);
        }
        terms
            .into_iter()
            .reduce(|a, b| Expr::Add(Box::new(a), Box::new(b)))
            .unwrap_or(Expr::Const(0.0))
    }
}

/// Negative constants are printed as negated positives so the result stays
/// inside the parser's output invariants.
fn const_expr(c: f64) -> Expr {
    if c < 0.0 {
        Expr::Neg(Box::new(Expr::Const(-c)))
    } else {
        Expr::Const(c)
    }
}
