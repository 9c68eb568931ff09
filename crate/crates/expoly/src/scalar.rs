//! Exact scalar tower: arbitrary-precision rationals, Gaussian rationals,
//! and the group algebra of exponent values.
//!
//! [`ExpCoeff`] is the exact stand-in for finite sums `Σ c·e^z` with
//! Gaussian-rational `c` and `z`. Distinct Gaussian-rational exponents give
//! linearly independent exponentials, so an [`ExpCoeff`] is zero exactly when
//! its term map is empty. Exponents outside the Gaussian rationals are
//! unrepresentable by construction.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Build a rational from an integer pair, panicking on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Element of ℚ(i): `re + im·i` with exact rational parts.
///
/// The derived ordering is lexicographic on `(re, im)`. It is translation
/// invariant, which is what the leading-term arguments in [`ExpCoeff`]
/// division rely on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussianRational {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    /// `num/den` as a real Gaussian rational.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rat(rat(num, den))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`, the field norm down to ℚ.
    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero GaussianRational");
        let n = self.norm_sqr();
        GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().expect("rational out of f64 range"),
            self.im.to_f64().expect("rational out of f64 range"),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv()
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

fn fmt_rat(r: &Rat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return fmt_rat(&self.re, f);
        }
        if self.re.is_zero() {
            fmt_rat(&self.im, f)?;
            return write!(f, "i");
        }
        fmt_rat(&self.re, f)?;
        if self.im.is_positive() {
            write!(f, "+")?;
            fmt_rat(&self.im, f)?;
        } else {
            write!(f, "-")?;
            fmt_rat(&(-self.im.clone()), f)?;
        }
        write!(f, "i")
    }
}

/// Element of the group algebra of exponent values: a finite sum `Σ c_z·E(z)`
/// with `E(z1)·E(z2) = E(z1+z2)` and `E(0) = 1`.
///
/// Canonical form: no stored coefficient is zero. Equality of canonical forms
/// is equality of the represented functions of a formal exponential.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ExpCoeff {
    terms: BTreeMap<GaussianRational, GaussianRational>,
}

impl ExpCoeff {
    pub fn zero() -> Self {
        ExpCoeff {
            terms: BTreeMap::new(),
        }
    }

    /// Multiplicative identity `1·E(0)`.
    pub fn one() -> Self {
        Self::scalar(GaussianRational::one())
    }

    /// Constant `c·E(0)`.
    pub fn scalar(c: GaussianRational) -> Self {
        Self::term(GaussianRational::zero(), c)
    }

    /// The pure exponential `E(z)`.
    pub fn exp(z: GaussianRational) -> Self {
        Self::term(z, GaussianRational::one())
    }

    /// Single term `c·E(z)`.
    pub fn term(z: GaussianRational, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(z, c);
        }
        ExpCoeff { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::scalar(GaussianRational::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::scalar(GaussianRational::from_ratio(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&GaussianRational::zero())
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GaussianRational, &GaussianRational)> {
        self.terms.iter()
    }

    /// Some(c) if `self = c·E(0)`, i.e. a plain Gaussian-rational constant.
    pub fn as_scalar(&self) -> Option<&GaussianRational> {
        if self.is_zero() {
            return None;
        }
        if self.terms.len() == 1 {
            self.terms.get(&GaussianRational::zero())
        } else {
            None
        }
    }

    /// Single-term elements `c·E(z)` are the units of the algebra.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    /// Inverse of a unit: `(c·E(z))⁻¹ = c⁻¹·E(−z)`. Panics if not a unit.
    pub fn unit_inv(&self) -> Self {
        assert!(self.is_unit(), "ExpCoeff is not a unit");
        let (z, c) = self.terms.iter().next().unwrap();
        Self::term(-z, c.inv())
    }

    fn insert_term(&mut self, z: GaussianRational, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(z) {
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

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExpCoeff {
            terms: self
                .terms
                .iter()
                .map(|(z, a)| (z.clone(), a * c))
                .collect(),
        }
    }

    /// Multiply by a single term `c·E(z)` (cheap, exponent shift).
    pub fn mul_term(&self, z: &GaussianRational, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExpCoeff {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w + z, a * c))
                .collect(),
        }
    }

    /// Leading term in the lexicographic exponent order.
    fn leading(&self) -> Option<(&GaussianRational, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    fn trailing(&self) -> Option<(&GaussianRational, &GaussianRational)> {
        self.terms.iter().next()
    }

    /// Exact quotient `self / b`, or None when the quotient does not lie in
    /// the algebra. Peels leading terms; the exponent order is translation
    /// invariant, so every quotient term produced is forced.
    pub fn try_exact_div(&self, b: &ExpCoeff) -> Option<ExpCoeff> {
        assert!(!b.is_zero(), "division by zero ExpCoeff");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (lead_b_z, lead_b_c) = b.leading().unwrap();
        let trail_bound = {
            let (ta, _) = self.trailing().unwrap();
            let (tb, _) = b.trailing().unwrap();
            ta - tb
        };
        let mut rem = self.clone();
        let mut quot = Self::zero();
        // Quotient terms come out in strictly decreasing exponent order, all
        // ≥ trail(a)−trail(b) when the division is exact. The step cap is a
        // guard against pathological non-exact inputs.
        let cap = 4 * (self.terms.len() + b.terms.len()) + 64;
        for _ in 0..cap {
            if rem.is_zero() {
                return Some(quot);
            }
            let (lead_r_z, lead_r_c) = {
                let (z, c) = rem.leading().unwrap();
                (z.clone(), c.clone())
            };
            let qz = &lead_r_z - lead_b_z;
            if qz < trail_bound {
                return None;
            }
            let qc = &lead_r_c / lead_b_c;
            let t = Self::term(qz, qc);
            rem = &rem - &(&t * b);
            quot = &quot + &t;
        }
        None
    }

    /// Numeric value `Σ c_z·e^z` in complex floating point.
    pub fn eval(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(z, c)| c.to_complex() * z.to_complex().exp())
            .sum()
    }
}

impl Add for &ExpCoeff {
    type Output = ExpCoeff;
    fn add(self, rhs: &ExpCoeff) -> ExpCoeff {
        let mut out = self.clone();
        for (z, c) in &rhs.terms {
            out.insert_term(z.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ExpCoeff {
    type Output = ExpCoeff;
    fn sub(self, rhs: &ExpCoeff) -> ExpCoeff {
        let mut out = self.clone();
        for (z, c) in &rhs.terms {
            out.insert_term(z.clone(), -c);
        }
        out
    }
}

impl Mul for &ExpCoeff {
    type Output = ExpCoeff;
    fn mul(self, rhs: &ExpCoeff) -> ExpCoeff {
        let mut out = ExpCoeff::zero();
        for (z1, c1) in &self.terms {
            for (z2, c2) in &rhs.terms {
                out.insert_term(z1 + z2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ExpCoeff {
    type Output = ExpCoeff;
    fn neg(self) -> ExpCoeff {
        ExpCoeff {
            terms: self.terms.iter().map(|(z, c)| (z.clone(), -c)).collect(),
        }
    }
}

impl AddAssign<&ExpCoeff> for ExpCoeff {
    fn add_assign(&mut self, rhs: &ExpCoeff) {
        for (z, c) in &rhs.terms {
            self.insert_term(z.clone(), c.clone());
        }
    }
}

impl SubAssign<&ExpCoeff> for ExpCoeff {
    fn sub_assign(&mut self, rhs: &ExpCoeff) {
        for (z, c) in &rhs.terms {
            self.insert_term(z.clone(), -c);
        }
    }
}

impl fmt::Display for ExpCoeff {
    /// Report form: `(a+bi)*E(z)` summands, `E(0)` elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (z, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if z.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*E({z})")?;
            }
        }
        Ok(())
    }
}

/// Fraction of [`ExpCoeff`]s. The group algebra is an integral domain, so
/// these form its fraction field; no gcd reduction is attempted beyond
/// pulling unit factors out of the denominator.
#[derive(Clone, Debug)]
pub struct ExpFrac {
    num: ExpCoeff,
    den: ExpCoeff,
}

impl ExpFrac {
    pub fn new(num: ExpCoeff, den: ExpCoeff) -> Self {
        assert!(!den.is_zero(), "zero denominator in ExpFrac");
        let mut out = ExpFrac { num, den };
        out.normalize();
        out
    }

    pub fn from_coeff(num: ExpCoeff) -> Self {
        ExpFrac {
            num,
            den: ExpCoeff::one(),
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = ExpCoeff::one();
            return;
        }
        if self.den.is_unit() {
            let inv = self.den.unit_inv();
            self.num = &self.num * &inv;
            self.den = ExpCoeff::one();
            return;
        }
        // Pull the trailing unit out of the denominator so equal fractions
        // tend to share a representative.
        if let Some((z, c)) = self.den.trailing().map(|(z, c)| (z.clone(), c.clone())) {
            let unit_inv = ExpCoeff::term(-&z, c.inv());
            self.num = &self.num * &unit_inv;
            self.den = &self.den * &unit_inv;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numer(&self) -> &ExpCoeff {
        &self.num
    }

    pub fn denom(&self) -> &ExpCoeff {
        &self.den
    }

    pub fn add(&self, rhs: &ExpFrac) -> ExpFrac {
        ExpFrac::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &ExpFrac) -> ExpFrac {
        ExpFrac::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn mul(&self, rhs: &ExpFrac) -> ExpFrac {
        ExpFrac::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn inv(&self) -> ExpFrac {
        assert!(!self.is_zero(), "inverse of zero ExpFrac");
        ExpFrac::new(self.den.clone(), self.num.clone())
    }
}

impl PartialEq for ExpFrac {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}
