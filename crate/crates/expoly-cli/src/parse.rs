//! Recursive-descent parser for the expression DSL.
//!
//! Grammar:
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := ['-'] factor | atom ('^' uint)?
//! atom   := rational | 'i' | var | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//! Rationals are `p` or `p/q`; variables are `x1..xd`. The argument of `exp`
//! must reduce to an affine-linear form with Gaussian-rational coefficients.
//! The parser output is the canonical [`ExpPolynomial`], and parsing the
//! canonical rendering reproduces the value exactly.

use expoly::scalar::Rat;
use expoly::{ExpCoeff, ExpPolynomial, Frequency, GaussianRational, Monomial, Polynomial};
use num_bigint::BigInt;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(ParseError {
                    pos: i,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    dim: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError {
                pos: self.here(),
                message: format!("expected {what}"),
            })
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.here(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<ExpPolynomial, ParseError> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t).expect("same dimension by construction");
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t).expect("same dimension by construction");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExpPolynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f).expect("same dimension by construction");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ExpPolynomial, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(f.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let p = self.here();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let exp: u32 = n.try_into().map_err(|_| ParseError {
                        pos: p,
                        message: "exponent too large".into(),
                    })?;
                    let mut acc = ExpPolynomial::one(self.dim);
                    for _ in 0..exp {
                        acc = acc.mul(&base).expect("same dimension");
                    }
                    return Ok(acc);
                }
                _ => {
                    return Err(ParseError {
                        pos: p,
                        message: "expected non-negative integer exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExpPolynomial, ParseError> {
        let start = self.here();
        match self.bump() {
            Some(Tok::Int(num)) => {
                // rational := int ('/' int)?
                let mut den = BigInt::from(1);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => den = d,
                        _ => {
                            return Err(ParseError {
                                pos: start,
                                message: "expected nonzero denominator".into(),
                            })
                        }
                    }
                }
                let c = GaussianRational::from_rat(Rat::new(num, den));
                Ok(ExpPolynomial::from_polynomial(Polynomial::constant(
                    self.dim,
                    ExpCoeff::scalar(c),
                )))
            }
            Some(Tok::Ident(id)) if id == "i" => Ok(ExpPolynomial::from_polynomial(
                Polynomial::constant(self.dim, ExpCoeff::scalar(GaussianRational::i())),
            )),
            Some(Tok::Ident(id)) if id == "exp" => {
                self.expect(Tok::LParen, "'(' after exp")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')' closing exp")?;
                self.exp_of(inner, start)
            }
            Some(Tok::Ident(id)) if id.starts_with('x') => {
                let idx: usize = id[1..].parse().map_err(|_| ParseError {
                    pos: start,
                    message: format!("unknown identifier {id}"),
                })?;
                if idx == 0 || idx > self.dim {
                    return Err(ParseError {
                        pos: start,
                        message: format!(
                            "unknown variable {id}: dimension is {}",
                            self.dim
                        ),
                    });
                }
                Ok(ExpPolynomial::from_polynomial(Polynomial::var(
                    self.dim,
                    idx - 1,
                )))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(ParseError {
                pos: start,
                message: format!("unexpected token {t:?}"),
            }),
            None => Err(ParseError {
                pos: start,
                message: "unexpected end of input".into(),
            }),
        }
    }

    /// `exp(g)` for an affine-linear `g = c + Σ λ_j x_j` with plain
    /// Gaussian-rational coefficients becomes `E(c)·e^{⟨λ,x⟩}`.
    fn exp_of(
        &self,
        inner: ExpPolynomial,
        start: usize,
    ) -> Result<ExpPolynomial, ParseError> {
        let nonlinear = ParseError {
            pos: start,
            message: "exp argument must be linear in the variables with Gaussian-rational coefficients"
                .into(),
        };
        if inner.is_zero() {
            return Ok(ExpPolynomial::one(self.dim));
        }
        let class = inner.classify();
        if !class.is_polynomial || class.degree.is_some_and(|d| d > 1) {
            return Err(nonlinear);
        }
        let (_, poly) = inner.modes().next().expect("nonzero");
        let mut shift = GaussianRational::zero();
        let mut lambda = vec![GaussianRational::zero(); self.dim];
        for (mono, coeff) in poly.terms() {
            let Some(c) = coeff.as_scalar() else {
                return Err(nonlinear);
            };
            if mono.is_constant() {
                shift = c.clone();
            } else {
                let var = mono
                    .0
                    .iter()
                    .position(|&e| e == 1)
                    .expect("degree-1 monomial");
                lambda[var] = c.clone();
            }
        }
        let mut p = Polynomial::zero(self.dim);
        p.add_term(
            Monomial::constant(self.dim),
            ExpCoeff::exp(shift),
        );
        ExpPolynomial::mode(Frequency(lambda), p).map_err(|_| ParseError {
            pos: start,
            message: "internal dimension error".into(),
        })
    }
}

/// Parse an expression over variables `x1..xd` into canonical form.
pub fn parse_exppoly(text: &str, dim: usize) -> Result<ExpPolynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        dim,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse a constant scalar expression (no variables) to a Gaussian rational.
pub fn parse_scalar(text: &str) -> Result<GaussianRational, ParseError> {
    let e = parse_exppoly(text, 0)?;
    if e.is_zero() {
        return Ok(GaussianRational::zero());
    }
    let class = e.classify();
    if class.is_polynomial {
        if let Some((_, poly)) = e.modes().next() {
            if let Some((mono, coeff)) = poly.terms().next() {
                if mono.is_constant() {
                    if let Some(c) = coeff.as_scalar() {
                        return Ok(c.clone());
                    }
                }
            }
        }
    }
    Err(ParseError {
        pos: 0,
        message: "expected a Gaussian-rational constant".into(),
    })
}
