//! Expression front-end: lexer, recursive-descent parser, pretty-printer, and
//! evaluator for one-variable real functions.
//!
//! The accepted grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' uint)?
//! atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | sqrt | atan
//! ```
//!
//! Precedence is `^` above unary minus above `*`/`/` above `+`/`-`, so
//! `-x^2` parses as the negation of `x^2`. Exponents are literal
//! non-negative integers, not arbitrary subexpressions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The unary functions the grammar admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Atan,
}

impl UnaryFn {
    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Atan => "atan",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "exp" => UnaryFn::Exp,
            "sqrt" => UnaryFn::Sqrt,
            "atan" => UnaryFn::Atan,
            _ => return None,
        })
    }
}

/// Abstract syntax tree for a function of the single variable `x`.
///
/// Trees produced by [`parse`] never contain negative constants: a leading
/// minus always becomes a [`Expr::Neg`] node. Integer powers are non-negative
/// by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// The variable `x`.
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power with a literal exponent.
    Pow(Box<Expr>, u32),
    Fun(UnaryFn, Box<Expr>),
}

/// Lexical token. Offsets into the source are carried separately by
/// [`SpannedToken`].
#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannedToken {
    pub token: Token,
    pub offset: usize,
}

/// Split `source` into tokens, reporting the byte offset of anything illegal.
pub fn tokenize(source: &str) -> Result<Vec<SpannedToken>> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '+' => {
                out.push(SpannedToken { token: Token::Plus, offset: start });
                i += 1;
            }
            '-' => {
                out.push(SpannedToken { token: Token::Minus, offset: start });
                i += 1;
            }
            '*' => {
                out.push(SpannedToken { token: Token::Star, offset: start });
                i += 1;
            }
            '/' => {
                out.push(SpannedToken { token: Token::Slash, offset: start });
                i += 1;
            }
            '^' => {
                out.push(SpannedToken { token: Token::Caret, offset: start });
                i += 1;
            }
            '(' => {
                out.push(SpannedToken { token: Token::LParen, offset: start });
                i += 1;
            }
            ')' => {
                out.push(SpannedToken { token: Token::RParen, offset: start });
                i += 1;
            }
            '0'..='9' | '.' => {
                let mut j = i;
                let mut seen_digit = false;
                let mut seen_dot = false;
                while j < bytes.len() {
                    match bytes[j] as char {
                        '0'..='9' => {
                            seen_digit = true;
                            j += 1;
                        }
                        '.' if !seen_dot => {
                            seen_dot = true;
                            j += 1;
                        }
                        _ => break,
                    }
                }
                if !seen_digit {
                    return Err(Error::MalformedNumber { offset: start });
                }
                // Optional exponent part: e or E, optional sign, digits.
                if j < bytes.len() && matches!(bytes[j] as char, 'e' | 'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && matches!(bytes[k] as char, '+' | '-') {
                        k += 1;
                    }
                    let exp_digits = k;
                    while k < bytes.len() && (bytes[k] as char).is_ascii_digit() {
                        k += 1;
                    }
                    if k == exp_digits {
                        return Err(Error::MalformedNumber { offset: start });
                    }
                    j = k;
                }
                let text = &source[i..j];
                let value: f64 = text
                    .parse()
                    .map_err(|_| Error::MalformedNumber { offset: start })?;
                out.push(SpannedToken { token: Token::Number(value), offset: start });
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && matches!(bytes[j] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    j += 1;
                }
                out.push(SpannedToken {
                    token: Token::Ident(source[i..j].to_string()),
                    offset: start,
                });
                i = j;
            }
            other => {
                return Err(Error::IllegalCharacter { ch: other, offset: start });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<SpannedToken>,
    pos: usize,
    source_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.offset)
            .unwrap_or(self.source_len)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|t| t.token.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, detail: &str) -> Error {
        Error::UnexpectedToken { offset: self.offset(), detail: detail.to_string() }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let exponent = match self.bump() {
                Some(Token::Number(v)) => {
                    if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
                        return Err(Error::UnexpectedToken {
                            offset: self.tokens[self.pos - 1].offset,
                            detail: format!("exponent must be a non-negative integer, got {v}"),
                        });
                    }
                    v as u32
                }
                _ => return Err(self.unexpected("expected an integer exponent after '^'")),
            };
            return Ok(Expr::Pow(Box::new(base), exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Number(v)) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Some(Token::Ident(name)) => {
                self.bump();
                if name == "x" {
                    return Ok(Expr::Var);
                }
                let func = UnaryFn::from_name(&name)
                    .ok_or(Error::UnknownIdentifier { name: name.clone() })?;
                match self.bump() {
                    Some(Token::LParen) => {}
                    _ => return Err(self.unexpected("expected '(' after function name")),
                }
                let arg = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(Expr::Fun(func, Box::new(arg))),
                    _ => Err(Error::UnbalancedParentheses),
                }
            }
            Some(Token::LParen) => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::UnbalancedParentheses),
                }
            }
            Some(Token::RParen) => Err(Error::UnbalancedParentheses),
            Some(_) => Err(self.unexpected("expected a number, 'x', a function call, or '('")),
            None => Err(self.unexpected("unexpected end of input")),
        }
    }
}

/// Parse a source string into an [`Expr`].
pub fn parse(source: &str) -> Result<Expr> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0, source_len: source.len() };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        // A stray ')' is a parenthesis problem; anything else is just junk.
        if matches!(parser.peek(), Some(Token::RParen)) {
            return Err(Error::UnbalancedParentheses);
        }
        return Err(parser.unexpected("trailing input after expression"));
    }
    Ok(expr)
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Expr {
    /// Evaluate at the point `x`. Division by zero and square roots of
    /// negative numbers are reported as domain errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let num = a.eval(x)?;
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(Error::DomainError(format!("division by zero at x = {x:e}")));
                }
                num / den
            }
            Expr::Pow(base, n) => base.eval(x)?.powi(*n as i32),
            Expr::Fun(f, arg) => {
                let v = arg.eval(x)?;
                match f {
                    UnaryFn::Sin => v.sin(),
                    UnaryFn::Cos => v.cos(),
                    UnaryFn::Exp => v.exp(),
                    UnaryFn::Sqrt => {
                        if v < 0.0 {
                            return Err(Error::DomainError(format!(
                                "sqrt of negative value {v:e} at x = {x:e}"
                            )));
                        }
                        v.sqrt()
                    }
                    UnaryFn::Atan => v.atan(),
                }
            }
        })
    }
}

// Pretty-printing. Each node prints itself inside a context precedence; a
// child whose own precedence is lower gets parenthesized. The levels match
// the grammar: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Const(_) | Expr::Var | Expr::Fun(..) => 5,
    }
}

fn fmt_prec(e: &Expr, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(e);
    let needs_parens = p < ctx;
    if needs_parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Const(c) => write!(f, "{c}")?,
        Expr::Var => write!(f, "x")?,
        Expr::Neg(inner) => {
            write!(f, "-")?;
            fmt_prec(inner, 3, f)?;
        }
        Expr::Add(a, b) => {
            fmt_prec(a, 1, f)?;
            write!(f, " + ")?;
            fmt_prec(b, 2, f)?;
        }
        Expr::Sub(a, b) => {
            fmt_prec(a, 1, f)?;
            write!(f, " - ")?;
            fmt_prec(b, 2, f)?;
        }
        Expr::Mul(a, b) => {
            fmt_prec(a, 2, f)?;
            write!(f, " * ")?;
            fmt_prec(b, 3, f)?;
        }
        Expr::Div(a, b) => {
            fmt_prec(a, 2, f)?;
            write!(f, " / ")?;
            fmt_prec(b, 3, f)?;
        }
        Expr::Pow(base, n) => {
            fmt_prec(base, 5, f)?;
            write!(f, "^{n}")?;
        }
        Expr::Fun(func, arg) => {
            write!(f, "{}(", func.name())?;
            fmt_prec(arg, 1, f)?;
            write!(f, ")")?;
        }
    }
    if needs_parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 1, f)
    }
}

// Smart constructors keep derivatives readable: identities with 0 and 1
// collapse on the spot.
fn smart_add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(z), _) if *z == 0.0 => b,
        (_, Expr::Const(z)) if *z == 0.0 => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn smart_sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (_, Expr::Const(z)) if *z == 0.0 => a,
        (Expr::Const(z), _) if *z == 0.0 => Expr::Neg(Box::new(b)),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn smart_mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(z), _) | (_, Expr::Const(z)) if *z == 0.0 => Expr::Const(0.0),
        (Expr::Const(o), _) if *o == 1.0 => b,
        (_, Expr::Const(o)) if *o == 1.0 => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

/// Symbolic derivative with respect to the variable. The result is exact;
/// only trivial 0/1 factors are simplified away.
pub fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var => Expr::Const(1.0),
        Expr::Neg(a) => Expr::Neg(Box::new(differentiate(a))),
        Expr::Add(a, b) => smart_add(differentiate(a), differentiate(b)),
        Expr::Sub(a, b) => smart_sub(differentiate(a), differentiate(b)),
        Expr::Mul(a, b) => smart_add(
            smart_mul(differentiate(a), (**b).clone()),
            smart_mul((**a).clone(), differentiate(b)),
        ),
        Expr::Div(a, b) => {
            let numerator = smart_sub(
                smart_mul(differentiate(a), (**b).clone()),
                smart_mul((**a).clone(), differentiate(b)),
            );
            let denominator = Expr::Pow(b.clone(), 2);
            Expr::Div(Box::new(numerator), Box::new(denominator))
        }
        Expr::Pow(base, n) => match n {
            0 => Expr::Const(0.0),
            1 => differentiate(base),
            _ => {
                let reduced = if *n == 2 {
                    (**base).clone()
                } else {
                    Expr::Pow(base.clone(), n - 1)
                };
                smart_mul(
                    smart_mul(Expr::Const(*n as f64), reduced),
                    differentiate(base),
                )
            }
        },
        Expr::Fun(f, u) => {
            let du = differentiate(u);
            let outer = match f {
                UnaryFn::Sin => Expr::Fun(UnaryFn::Cos, u.clone()),
                UnaryFn::Cos => Expr::Neg(Box::new(Expr::Fun(UnaryFn::Sin, u.clone()))),
                UnaryFn::Exp => Expr::Fun(UnaryFn::Exp, u.clone()),
                UnaryFn::Sqrt => {
                    // 1 / (2 sqrt(u))
                    return Expr::Div(
                        Box::new(du),
                        Box::new(Expr::Mul(
                            Box::new(Expr::Const(2.0)),
                            Box::new(Expr::Fun(UnaryFn::Sqrt, u.clone())),
                        )),
                    );
                }
                UnaryFn::Atan => {
                    // u' / (1 + u^2)
                    return Expr::Div(
                        Box::new(du),
                        Box::new(Expr::Add(
                            Box::new(Expr::Const(1.0)),
                            Box::new(Expr::Pow(u.clone(), 2)),
                        )),
                    );
                }
            };
            smart_mul(outer, du)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kinds(src: &str) -> Vec<Token> {
        tokenize(src).unwrap().into_iter().map(|t| t.token).collect()
    }

    #[test]
    fn tokenize_simple_sum() {
        assert_eq!(
            kinds("x + x^3"),
            vec![
                Token::Ident("x".into()),
                Token::Plus,
                Token::Ident("x".into()),
                Token::Caret,
                Token::Number(3.0),
            ]
        );
    }

    #[test]
    fn tokenize_function_call() {
        assert_eq!(
            kinds("sin(x)"),
            vec![
                Token::Ident("sin".into()),
                Token::LParen,
                Token::Ident("x".into()),
                Token::RParen,
            ]
        );
    }

    #[test]
    fn tokenize_reports_illegal_character_position() {
        assert_eq!(
            tokenize("x @ 2").unwrap_err(),
            Error::IllegalCharacter { ch: '@', offset: 2 }
        );
    }

    #[test]
    fn tokenize_rejects_malformed_exponent() {
        assert!(matches!(tokenize("1e"), Err(Error::MalformedNumber { offset: 0 })));
        assert!(matches!(tokenize("1e+"), Err(Error::MalformedNumber { offset: 0 })));
    }

    #[test]
    fn parse_respects_precedence() {
        // x + x^3/9: power binds tighter than division, division tighter than sum.
        let e = parse("x + x^3/9").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Var),
                Box::new(Expr::Div(
                    Box::new(Expr::Pow(Box::new(Expr::Var), 3)),
                    Box::new(Expr::Const(9.0)),
                )),
            )
        );
    }

    #[test]
    fn unary_minus_binds_below_power() {
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), 2)))
        );
        assert_eq!(
            parse("(-x)^2").unwrap(),
            Expr::Pow(Box::new(Expr::Neg(Box::new(Expr::Var))), 2)
        );
    }

    #[test]
    fn parse_function_of_compound_argument() {
        let e = parse("sin(2*x)").unwrap();
        assert_eq!(
            e,
            Expr::Fun(
                UnaryFn::Sin,
                Box::new(Expr::Mul(Box::new(Expr::Const(2.0)), Box::new(Expr::Var))),
            )
        );
    }

    #[test]
    fn parse_error_cases() {
        assert_eq!(
            parse("y + 1").unwrap_err(),
            Error::UnknownIdentifier { name: "y".into() }
        );
        assert_eq!(parse("(x").unwrap_err(), Error::UnbalancedParentheses);
        assert_eq!(parse("x)").unwrap_err(), Error::UnbalancedParentheses);
        assert!(matches!(parse("x ^ 2.5"), Err(Error::UnexpectedToken { .. })));
        assert!(matches!(parse("x ^ -2"), Err(Error::UnexpectedToken { .. })));
        assert!(matches!(parse("x + * 2"), Err(Error::UnexpectedToken { .. })));
        assert!(matches!(parse(""), Err(Error::UnexpectedToken { .. })));
    }

    #[test]
    fn eval_polynomial() {
        let e = parse("x + x^3").unwrap();
        assert_eq!(e.eval(2.0).unwrap(), 10.0);
    }

    #[test]
    fn eval_function() {
        let e = parse("sin(x)").unwrap();
        assert!((e.eval(std::f64::consts::FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_domain_errors() {
        let e = parse("1/x").unwrap();
        assert!(matches!(e.eval(0.0), Err(Error::DomainError(_))));
        let s = parse("sqrt(x)").unwrap();
        assert!(matches!(s.eval(-1.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn display_examples() {
        assert_eq!(parse("x + x^3/9").unwrap().to_string(), "x + x^3 / 9");
        assert_eq!(parse("-x^2").unwrap().to_string(), "-x^2");
        assert_eq!(parse("(-x)^2").unwrap().to_string(), "(-x)^2");
        assert_eq!(parse("(x+1)*(x-1)").unwrap().to_string(), "(x + 1) * (x - 1)");
    }

    /// Strategy producing trees with the same invariants the parser
    /// guarantees: non-negative finite constants, exponents <= 9.
    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0..10.0f64).prop_map(Expr::Const),
            (0u32..100).prop_map(|n| Expr::Const(n as f64)),
            Just(Expr::Var),
        ];
        leaf.prop_recursive(5, 64, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), 0u32..10).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
                (
                    prop_oneof![
                        Just(UnaryFn::Sin),
                        Just(UnaryFn::Cos),
                        Just(UnaryFn::Exp),
                        Just(UnaryFn::Sqrt),
                        Just(UnaryFn::Atan),
                    ],
                    inner,
                )
                    .prop_map(|(f, a)| Expr::Fun(f, Box::new(a))),
            ]
        })
    }

    proptest! {
        /// Pretty-printing then re-parsing returns the identical tree.
        #[test]
        fn roundtrip_print_parse(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(reparsed, e);
        }

        /// Evaluating a sum of expressions equals the sum of evaluations.
        #[test]
        fn eval_is_additive(a in arb_expr(), b in arb_expr(), x in -3.0..3.0f64) {
            let sum = Expr::Add(Box::new(a.clone()), Box::new(b.clone()));
            match (a.eval(x), b.eval(x), sum.eval(x)) {
                (Ok(va), Ok(vb), Ok(vs)) => {
                    if va.is_finite() && vb.is_finite() && vs.is_finite() {
                        let scale = 1.0f64.max(va.abs()).max(vb.abs());
                        prop_assert!((vs - (va + vb)).abs() <= 1e-12 * scale);
                    }
                }
                // Domain errors must at least be consistent: if either part
                // fails, the sum must fail too, and never the other way.
                (Err(_), _, s) | (_, Err(_), s) => prop_assert!(s.is_err()),
                (Ok(_), Ok(_), Err(e)) => {
                    prop_assert!(false, "sum failed though both parts evaluate: {}", e)
                }
            }
        }
    }

    #[test]
    fn derivative_of_square_is_clean() {
        let d = differentiate(&parse("x^2").unwrap());
        assert_eq!(d.to_string(), "2 * x");
    }

    #[test]
    fn derivative_of_shifted_cosine() {
        let d = differentiate(&parse("cos(x) - 1").unwrap());
        assert_eq!(d.to_string(), "-sin(x)");
        assert_eq!(d.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let cases = [
            "x^3 + 2*x",
            "sin(x) * cos(x)",
            "exp(x) / (1 + x^2)",
            "sqrt(1 + x^2)",
            "atan(x - x^3)",
        ];
        for src in cases {
            let e = parse(src).unwrap();
            let d = differentiate(&e);
            for &x in &[-0.8, -0.1, 0.4, 1.3] {
                let h = 1e-6;
                let fd = (e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h);
                let got = d.eval(x).unwrap();
                assert!(
                    (fd - got).abs() <= 1e-7 * got.abs().max(1.0),
                    "{src} at {x}: {got} vs fd {fd}"
                );
            }
        }
    }
}
