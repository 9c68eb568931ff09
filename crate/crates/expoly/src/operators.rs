//! Linear operators on exponential polynomials: translation `τ_y`, difference
//! powers `Δ_y^m`, dilation by an invertible rational matrix, polynomials in a
//! translation `q(τ_y)`, the translate span of a polynomial, and the minimal
//! polynomial of `τ_h` restricted to that span.

use crate::error::{Error, Result};
use crate::exppoly::{ExpPolynomial, Frequency, Monomial, Polynomial};
use crate::linalg::{FMat, SpanTracker};
use crate::scalar::{ExpCoeff, ExpFrac, GaussianRational, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// Exact d×d rational matrix with cached determinant.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rat>, // row major
    det: Rat,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        let entries: Vec<Rat> = rows.into_iter().flatten().collect();
        let det = FMat::from_rows(
            entries
                .chunks(dim)
                .map(|r| r.to_vec())
                .collect::<Vec<_>>(),
        )
        .det();
        RationalMatrix { dim, entries, det }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Rat::one())
    }

    /// `r·I`.
    pub fn scalar(dim: usize, r: Rat) -> Self {
        let mut rows = vec![vec![Rat::zero(); dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = r.clone();
        }
        Self::from_rows(rows)
    }

    pub fn scalar_int(dim: usize, n: i64) -> Self {
        Self::scalar(dim, Rat::from_integer(n.into()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.dim + c]
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }

    pub fn is_invertible(&self) -> bool {
        !self.det.is_zero()
    }

    fn to_fmat(&self) -> FMat<Rat> {
        FMat::from_rows(self.entries.chunks(self.dim).map(|r| r.to_vec()).collect())
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        let inv = self.to_fmat().inverse().ok_or(Error::SingularMatrix {
            context: "matrix inverse".into(),
        })?;
        Ok(Self::from_rows(
            (0..self.dim)
                .map(|i| (0..self.dim).map(|j| inv.get(i, j).clone()).collect())
                .collect(),
        ))
    }

    pub fn matmul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        let mut rows = vec![vec![Rat::zero(); self.dim]; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = Rat::zero();
                for k in 0..self.dim {
                    acc += self.entry(i, k) * rhs.entry(k, j);
                }
                rows[i][j] = acc;
            }
        }
        Self::from_rows(rows)
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        Self::from_rows(
            (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| self.entry(i, j) - rhs.entry(i, j))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn transpose(&self) -> RationalMatrix {
        Self::from_rows(
            (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.entry(j, i).clone()).collect())
                .collect(),
        )
    }

    /// Matrix–vector product `self·v`.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.dim {
                    acc += self.entry(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    /// `bᵗλ`, the frequency a mode picks up under `x ↦ bx`.
    pub fn transpose_apply_freq(&self, freq: &Frequency) -> Frequency {
        assert_eq!(freq.dim(), self.dim);
        Frequency(
            (0..self.dim)
                .map(|j| {
                    let mut acc = GaussianRational::zero();
                    for i in 0..self.dim {
                        let b = self.entry(i, j);
                        let l = &freq.0[i];
                        acc = &acc + &GaussianRational::new(&l.re * b, &l.im * b);
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entry(i, j).to_f64().expect("entry out of f64 range"))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entry(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Univariate polynomial `a_0 + a_1 z + ⋯ + a_n z^n` over ℚ(i), canonical
/// (leading coefficient nonzero unless zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnivariatePoly {
    coeffs: Vec<GaussianRational>,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: vec![] }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    /// `(z−1)^m` by binomial expansion.
    pub fn z_minus_one_pow(m: u32) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); m as usize + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let sign = if (m as usize - k) % 2 == 0 { 1 } else { -1 };
            *c = GaussianRational::from_rat(Rat::from_integer(
                (sign * binomial(m as i64, k as i64)).into(),
            ));
        }
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// `Some(m)` when the polynomial is a nonzero multiple of `(z−1)^m` and
    /// nothing else, i.e. exactly `c·(z−1)^deg`.
    pub fn as_z_minus_one_power(&self) -> Option<u32> {
        let deg = self.degree()?;
        let lead = self.coeffs.last().unwrap();
        let model = Self::z_minus_one_pow(deg as u32);
        let scaled: Vec<GaussianRational> =
            model.coeffs.iter().map(|c| c * lead).collect();
        if scaled == self.coeffs {
            Some(deg as u32)
        } else {
            None
        }
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact binomial coefficient for small arguments.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn check_dim(f: &ExpPolynomial, len: usize) -> Result<()> {
    if f.dim() != len {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: len,
        });
    }
    Ok(())
}

/// Exact translation `τ_y(f)(x) = f(x+y)`. Each mode `p·e^{⟨λ,x⟩}` becomes
/// `E(⟨λ,y⟩)·p(x+y)·e^{⟨λ,x⟩}`.
pub fn translate(f: &ExpPolynomial, y: &[Rat]) -> Result<ExpPolynomial> {
    check_dim(f, y.len())?;
    let mut raw = Vec::new();
    for (freq, p) in f.modes() {
        let scalar = ExpCoeff::exp(freq.dot_rat(y));
        raw.push((freq.clone(), p.translate(y).scale(&scalar)));
    }
    ExpPolynomial::normal_form(f.dim(), raw)
}

/// `Δ_y^m f = (τ_y − id)^m f` via the binomial expansion
/// `Σ_{i=0}^m (−1)^{m−i} C(m,i) τ_{iy}`.
pub fn difference_pow(f: &ExpPolynomial, y: &[Rat], m: u32) -> Result<ExpPolynomial> {
    check_dim(f, y.len())?;
    let mut acc = ExpPolynomial::zero(f.dim());
    for i in 0..=m {
        let iy: Vec<Rat> = y.iter().map(|r| r * Rat::from_integer((i as i64).into())).collect();
        let sign = if (m - i) % 2 == 0 { 1 } else { -1 };
        let coeff = sign * binomial(m as i64, i as i64);
        let term = translate(f, &iy)?.scale(&ExpCoeff::from_int(coeff));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `Δ_y f = τ_y f − f`.
pub fn difference(f: &ExpPolynomial, y: &[Rat]) -> Result<ExpPolynomial> {
    difference_pow(f, y, 1)
}

/// Dilation at function level: `x ↦ f(bx)`. Frequencies map to `bᵗλ`.
pub fn dilate(f: &ExpPolynomial, b: &RationalMatrix) -> Result<ExpPolynomial> {
    check_dim(f, b.dim())?;
    if !b.is_invertible() {
        return Err(Error::SingularMatrix {
            context: "dilate".into(),
        });
    }
    let d = f.dim();
    let subs: Vec<Polynomial> = (0..d)
        .map(|i| {
            let mut s = Polynomial::zero(d);
            for j in 0..d {
                let c = b.entry(i, j);
                if !c.is_zero() {
                    s.add_term(
                        Monomial::var(d, j),
                        ExpCoeff::scalar(GaussianRational::from_rat(c.clone())),
                    );
                }
            }
            s
        })
        .collect();
    let mut raw = Vec::new();
    for (freq, p) in f.modes() {
        raw.push((b.transpose_apply_freq(freq), p.substitute(&subs)));
    }
    ExpPolynomial::normal_form(d, raw)
}

/// `q(τ_y)(f) = Σ_k a_k·τ_{ky}(f)`.
pub fn apply_q_of_translation(
    q: &UnivariatePoly,
    y: &[Rat],
    f: &ExpPolynomial,
) -> Result<ExpPolynomial> {
    check_dim(f, y.len())?;
    let mut acc = ExpPolynomial::zero(f.dim());
    for (k, a) in q.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let ky: Vec<Rat> = y
            .iter()
            .map(|r| r * Rat::from_integer((k as i64).into()))
            .collect();
        let term = translate(f, &ky)?.scale(&ExpCoeff::scalar(a.clone()));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Shared monomial indexing for coefficient vectors of polynomials.
fn monomial_index(polys: &[&Polynomial]) -> Vec<Monomial> {
    let set: BTreeSet<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    set.into_iter().collect()
}

fn coeff_vector(p: &Polynomial, index: &[Monomial]) -> Vec<ExpFrac> {
    index
        .iter()
        .map(|m| ExpFrac::from_coeff(p.coeff(m)))
        .collect()
}

/// Decompose `p(x+α)` as a polynomial in the shift `α`: returns the
/// x-coefficient polynomials `q_β` with `p(x+α) = Σ_β α^β q_β(x)`. Their span
/// is the translate span `τ(p)`.
pub fn shift_coefficients(p: &Polynomial) -> Vec<(Monomial, Polynomial)> {
    let d = p.dim();
    // Substitute x_i ↦ x_i + α_i into p, with variables 0..d = x, d..2d = α.
    let subs: Vec<Polynomial> = (0..d)
        .map(|i| {
            let mut s = Polynomial::var(2 * d, i);
            s.add_term(Monomial::var(2 * d, d + i), ExpCoeff::one());
            s
        })
        .collect();
    let shifted = p.substitute(&subs);
    let mut buckets: std::collections::BTreeMap<Monomial, Polynomial> =
        std::collections::BTreeMap::new();
    for (m2, c) in shifted.terms() {
        let mx = Monomial(m2.0[..d].to_vec());
        let ma = Monomial(m2.0[d..].to_vec());
        buckets
            .entry(ma)
            .or_insert_with(|| Polynomial::zero(d))
            .add_term(mx, c.clone());
    }
    buckets.retain(|_, q| !q.is_zero());
    buckets.into_iter().collect()
}

/// Exact basis of `span{p(x+α) : α ∈ ℝ^d}`, computed from the shift
/// coefficients rather than by sampling shifts. The basis vectors are a
/// maximal independent subset of the `q_β`.
pub fn translate_span(p: &Polynomial) -> Vec<Polynomial> {
    let qs = shift_coefficients(p);
    let polys: Vec<&Polynomial> = qs.iter().map(|(_, q)| q).collect();
    let index = monomial_index(&polys);
    let mut tracker = SpanTracker::<ExpFrac>::new(index.len());
    let mut basis = Vec::new();
    for (_, q) in &qs {
        if tracker.insert(&coeff_vector(q, &index)) {
            basis.push(q.clone());
        }
    }
    basis
}

/// Dimension of the translate span of a full exponential polynomial:
/// `Σ_modes dim τ(p_mode)`, since distinct frequencies are independent.
pub fn translate_span_dim(f: &ExpPolynomial) -> usize {
    f.modes().map(|(_, p)| translate_span(p).len()).sum()
}

/// Minimal polynomial of `τ_h` restricted to the translate span of `p`.
///
/// Returns the polynomial together with `m(h)`; asserts the `(z−1)^{m(h)}`
/// shape (any other shape would contradict the unipotent structure of
/// translation on polynomial spans and is reported as a soundness violation).
/// `h = 0` returns `(z−1, 1)`, the minimal polynomial of the identity.
pub fn translation_min_poly(p: &Polynomial, h: &[Rat]) -> Result<(UnivariatePoly, u32)> {
    if p.is_zero() {
        return Err(Error::EmptyInput(
            "zero polynomial has no translate span".into(),
        ));
    }
    if h.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: h.len(),
        });
    }
    if h.iter().all(|r| r.is_zero()) {
        return Ok((UnivariatePoly::from_ints(&[-1, 1]), 1));
    }
    let basis = translate_span(p);
    let r = basis.len();
    let translated: Vec<Polynomial> = basis.iter().map(|q| q.translate(h)).collect();
    let all: Vec<&Polynomial> = basis.iter().chain(translated.iter()).collect();
    let index = monomial_index(&all);
    // Coordinates of τ_h(basis_j) in the basis: solve Bᵗ·coords = vec.
    let bmat_t = FMat::from_rows(
        (0..index.len())
            .map(|mi| {
                basis
                    .iter()
                    .map(|q| ExpFrac::from_coeff(q.coeff(&index[mi])))
                    .collect()
            })
            .collect(),
    );
    let mut t = FMat::<ExpFrac>::zero(r, r);
    for (j, tq) in translated.iter().enumerate() {
        let rhs: Vec<ExpFrac> = index
            .iter()
            .map(|m| ExpFrac::from_coeff(tq.coeff(m)))
            .collect();
        let coords = bmat_t.solve(&rhs).ok_or_else(|| Error::SoundnessViolation {
            theorem: "translation_min_poly".into(),
            details: "translate span is not translation invariant".into(),
        })?;
        for (i, v) in coords.into_iter().enumerate() {
            t.set(i, j, v);
        }
    }
    // τ_h is unipotent here: find the nilpotency index of N = T − I.
    let mut n = t.clone();
    for i in 0..r {
        let v = n.get(i, i).sub(&ExpFrac::from_coeff(ExpCoeff::one()));
        n.set(i, i, v);
    }
    let mut power = FMat::<ExpFrac>::identity(r);
    for m in 0..=r {
        if (0..r).all(|i| (0..r).all(|j| power.get(i, j).is_zero())) {
            return Ok((UnivariatePoly::z_minus_one_pow(m as u32), m as u32));
        }
        power = power.matmul(&n);
    }
    Err(Error::SoundnessViolation {
        theorem: "translation_min_poly".into(),
        details: "τ_h − id is not nilpotent on the translate span".into(),
    })
}
