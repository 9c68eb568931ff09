//! Multivariate polynomials and exponential polynomials in canonical normal
//! form.
//!
//! An [`ExpPolynomial`] is a finite sum `Σ p_k(x)·e^{⟨λ_k,x⟩}` with pairwise
//! distinct frequencies `λ_k` and nonzero polynomial parts `p_k`. Coefficients
//! live in [`ExpCoeff`] rather than plain scalars so that translation by a
//! rational vector stays inside the representation: `τ_h` of a mode produces
//! the exact scalar `E(⟨λ,h⟩)`.

use crate::error::{Error, Result};
use crate::scalar::{ExpCoeff, GaussianRational, Rat};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector `x^α` over a fixed variable count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, idx: usize) -> Self {
        assert!(idx < dim, "variable index out of range");
        let mut e = vec![0; dim];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// Sparse polynomial in `dim` variables with [`ExpCoeff`] coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, ExpCoeff>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: ExpCoeff) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Monomial::constant(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, ExpCoeff::one())
    }

    /// The variable `x_idx`.
    pub fn var(dim: usize, idx: usize) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Monomial::var(dim, idx), ExpCoeff::one());
        p
    }

    pub fn from_terms(dim: usize, terms: Vec<(Monomial, ExpCoeff)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "monomial dimension mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExpCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ExpCoeff {
        self.terms.get(m).cloned().unwrap_or_else(ExpCoeff::zero)
    }

    /// Total degree; `None` is the degree of the zero polynomial (reported
    /// as −∞ in degree-bound checks: it satisfies every bound).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: ExpCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &ExpCoeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Self::one(self.dim);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Substitute `subs[i]` for variable `i`. All substituted polynomials
    /// must share one target dimension.
    pub fn substitute(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.dim, "need one substitution per variable");
        let target_dim = if subs.is_empty() { 0 } else { subs[0].dim };
        assert!(subs.iter().all(|s| s.dim == target_dim));
        // Memoized powers of each substituted polynomial.
        let mut powers: Vec<Vec<Polynomial>> = subs
            .iter()
            .map(|s| vec![Polynomial::one(target_dim), s.clone()])
            .collect();
        let mut out = Polynomial::zero(target_dim);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_dim, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        out
    }

    /// `p(x+h)` for an exact rational shift.
    pub fn translate(&self, h: &[Rat]) -> Polynomial {
        assert_eq!(h.len(), self.dim);
        let subs: Vec<Polynomial> = (0..self.dim)
            .map(|i| {
                let mut s = Polynomial::var(self.dim, i);
                s.add_term(
                    Monomial::constant(self.dim),
                    ExpCoeff::scalar(GaussianRational::from_rat(h[i].clone())),
                );
                s
            })
            .collect();
        self.substitute(&subs)
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.dim);
        let mut acc = Complex64::zero();
        for (m, c) in &self.terms {
            let mut v = c.eval();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    v *= point[i];
                }
            }
            acc += v;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// Frequency vector `λ ∈ ℚ(i)^d` of a mode `e^{⟨λ,x⟩}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Frequency(pub Vec<GaussianRational>);

impl Frequency {
    pub fn zero(dim: usize) -> Self {
        Frequency(vec![GaussianRational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Frequency) -> Frequency {
        assert_eq!(self.0.len(), other.0.len());
        Frequency(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Bilinear pairing `⟨λ, h⟩ = Σ λ_i h_i` with a rational vector.
    pub fn dot_rat(&self, h: &[Rat]) -> GaussianRational {
        assert_eq!(self.0.len(), h.len());
        let mut acc = GaussianRational::zero();
        for (l, hi) in self.0.iter().zip(h) {
            let s = GaussianRational::new(&l.re * hi, &l.im * hi);
            acc = &acc + &s;
        }
        acc
    }

    pub fn dot_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(self.0.len(), point.len());
        self.0
            .iter()
            .zip(point)
            .map(|(l, p)| l.to_complex() * p)
            .sum()
    }

    /// Concatenate two frequency blocks.
    pub fn concat(&self, other: &Frequency) -> Frequency {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Frequency(v)
    }
}

/// Outcome of [`ExpPolynomial::classify`]. `degree` is `None` both for the
/// zero function (the −∞ sentinel) and for non-polynomials; the flag
/// distinguishes the two.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Classification {
    pub is_polynomial: bool,
    pub degree: Option<u32>,
}

/// Canonical finite sum `Σ p_k(x)·e^{⟨λ_k,x⟩}`: no zero polynomial parts,
/// pairwise distinct frequencies. Equality of canonical forms is equality of
/// the represented functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpPolynomial {
    dim: usize,
    modes: BTreeMap<Frequency, Polynomial>,
}

impl ExpPolynomial {
    pub fn zero(dim: usize) -> Self {
        ExpPolynomial {
            dim,
            modes: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::from_polynomial(Polynomial::one(dim))
    }

    /// Lift a polynomial to the zero-frequency mode.
    pub fn from_polynomial(p: Polynomial) -> Self {
        let dim = p.dim();
        let mut out = Self::zero(dim);
        out.add_mode(Frequency::zero(dim), p);
        out
    }

    /// Single mode `p(x)·e^{⟨λ,x⟩}`.
    pub fn mode(freq: Frequency, p: Polynomial) -> Result<Self> {
        if freq.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                got: freq.dim(),
            });
        }
        let mut out = Self::zero(p.dim());
        out.add_mode(freq, p);
        Ok(out)
    }

    /// Canonical form of a raw mode list: merges duplicate frequencies and
    /// drops zero polynomial parts.
    pub fn normal_form(dim: usize, raw: Vec<(Frequency, Polynomial)>) -> Result<Self> {
        let mut out = Self::zero(dim);
        for (freq, p) in raw {
            if freq.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: freq.dim(),
                });
            }
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            out.add_mode(freq, p);
        }
        Ok(out)
    }

    fn add_mode(&mut self, freq: Frequency, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        match self.modes.entry(freq) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Frequency, &Polynomial)> {
        self.modes.iter()
    }

    pub fn scale(&self, c: &ExpCoeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (f, p) in &self.modes {
            out.add_mode(f.clone(), p.scale(c));
        }
        out
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = self.clone();
        for (f, p) in &rhs.modes {
            out.add_mode(f.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        ExpPolynomial {
            dim: self.dim,
            modes: self.modes.iter().map(|(f, p)| (f.clone(), -p)).collect(),
        }
    }

    /// Product: frequencies add modewise, polynomial parts multiply.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = Self::zero(self.dim);
        for (f1, p1) in &self.modes {
            for (f2, p2) in &rhs.modes {
                out.add_mode(f1.add(f2), p1 * p2);
            }
        }
        Ok(out)
    }

    /// Float evaluation `Σ p_k(point)·exp(⟨λ_k,point⟩)`.
    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.dim);
        let mut acc = Complex64::zero();
        for (f, p) in &self.modes {
            acc += p.evaluate(point) * f.dot_complex(point).exp();
        }
        acc
    }

    /// A function in this class is an ordinary polynomial exactly when its
    /// only frequency is zero.
    pub fn classify(&self) -> Classification {
        if self.modes.is_empty() {
            return Classification {
                is_polynomial: true,
                degree: None,
            };
        }
        if self.modes.len() == 1 {
            if let Some(p) = self.modes.get(&Frequency::zero(self.dim)) {
                return Classification {
                    is_polynomial: true,
                    degree: p.degree(),
                };
            }
        }
        Classification {
            is_polynomial: false,
            degree: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical text rendering. Round-trips through the CLI expression grammar:
//   expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
//   factor := atom ('^' uint)? ; atom := rational | 'i' | var | 'exp(linform)'
// ---------------------------------------------------------------------------

fn rat_str(r: &Rat) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a Gaussian rational as a factor string plus an extracted leading
/// sign, so callers can join terms with binary `+`/`-`.
fn gauss_factor(c: &GaussianRational) -> (bool, String) {
    use num_traits::Signed;
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let a = if neg { -c.re.clone() } else { c.re.clone() };
        (neg, rat_str(&a))
    } else if c.re.is_zero() {
        let neg = c.im.is_negative();
        let b = if neg { -c.im.clone() } else { c.im.clone() };
        let s = if num_traits::One::is_one(&b) {
            "i".to_string()
        } else {
            format!("{}*i", rat_str(&b))
        };
        (neg, s)
    } else {
        // Full complex value: parenthesized two-term expression.
        let re_s = rat_str(&c.re.abs());
        let re_sign = if c.re.is_negative() { "-" } else { "" };
        let im_mag = c.im.abs();
        let im_s = if num_traits::One::is_one(&im_mag) {
            "i".to_string()
        } else {
            format!("{}*i", rat_str(&im_mag))
        };
        let op = if c.im.is_negative() { "-" } else { "+" };
        (false, format!("({re_sign}{re_s} {op} {im_s})"))
    }
}

/// Constant Gaussian rational as a one- or two-term expression (no outer
/// parentheses), for use inside `exp(...)`.
fn gauss_expr(c: &GaussianRational) -> String {
    let (neg, s) = gauss_factor(c);
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

/// Linear form `⟨λ,x⟩ + w` inside `exp(...)`.
fn linform_str(freq: &Frequency, shift: Option<&GaussianRational>) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (j, c) in freq.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (neg, f) = gauss_factor(c);
        let var = format!("x{}", j + 1);
        let s = if f == "1" {
            var
        } else {
            format!("{f}*{var}")
        };
        parts.push((neg, s));
    }
    if let Some(w) = shift {
        if !w.is_zero() {
            let (neg, s) = gauss_factor(w);
            parts.push((neg, s));
        }
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (neg, s)) in parts.iter().enumerate() {
        if k == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(s);
    }
    out
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut fs = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            fs.push(format!("x{}", i + 1));
        } else {
            fs.push(format!("x{}^{}", i + 1, e));
        }
    }
    fs
}

impl fmt::Display for ExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modes.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (freq, p) in &self.modes {
            for (m, c) in p.terms() {
                // Coefficient: single-term ExpCoeffs render inline; multi-term
                // ones render as a parenthesized sum of exp(const) terms.
                let (neg, coeff_s) = if let Some((z, a)) = single_term(c) {
                    let (neg, a_s) = gauss_factor(a);
                    let s = if z.is_zero() {
                        Some(a_s).filter(|s| s != "1")
                    } else if a_s == "1" {
                        Some(format!("exp({})", gauss_expr(z)))
                    } else {
                        Some(format!("{a_s}*exp({})", gauss_expr(z)))
                    };
                    (neg, s)
                } else {
                    let inner: Vec<String> = c
                        .terms()
                        .map(|(z, a)| {
                            let (neg, a_s) = gauss_factor(a);
                            let sign = if neg { "-" } else { "" };
                            if z.is_zero() {
                                format!("{sign}{a_s}")
                            } else if a_s == "1" {
                                format!("{sign}exp({})", gauss_expr(z))
                            } else {
                                format!("{sign}{a_s}*exp({})", gauss_expr(z))
                            }
                        })
                        .collect();
                    (false, Some(format!("({})", inner.join(" + "))))
                };
                let mut factors: Vec<String> = Vec::new();
                if let Some(cs) = coeff_s {
                    factors.push(cs);
                }
                factors.extend(monomial_factors(m));
                if !freq.is_zero() {
                    factors.push(format!("exp({})", linform_str(freq, None)));
                }
                if factors.is_empty() {
                    factors.push("1".to_string());
                }
                let term = factors.join("*");
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                    write!(f, "{term}")?;
                    first = false;
                } else {
                    write!(f, " {} {term}", if neg { "-" } else { "+" })?;
                }
            }
        }
        Ok(())
    }
}

fn single_term(c: &ExpCoeff) -> Option<(&GaussianRational, &GaussianRational)> {
    if c.num_terms() == 1 {
        c.terms().next()
    } else {
        None
    }
}
