//! Exponential polynomials on ℝ^d × ℝ^d: composition `f(bx+cy)`, tensor
//! products, block differences, separable rank with constructive witnesses,
//! separated-form membership, and the reduction cascade that strips summands
//! off `Σ f_i(x+c_iy)` one joint difference at a time.

use crate::error::{Error, Result};
use crate::exppoly::{ExpPolynomial, Frequency, Monomial, Polynomial};
use crate::linalg::FMat;
use crate::operators::RationalMatrix;
use crate::scalar::{ExpCoeff, ExpFrac, GaussianRational, Rat};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Exponential polynomial in two d-dimensional blocks `(x, y)`, stored as a
/// canonical 2d-variable exponential polynomial. Variables `0..d` are the
/// x-block, `d..2d` the y-block; mode frequencies split the same way.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiExpPolynomial {
    block_dim: usize,
    inner: ExpPolynomial,
}

impl BiExpPolynomial {
    pub fn zero(block_dim: usize) -> Self {
        BiExpPolynomial {
            block_dim,
            inner: ExpPolynomial::zero(2 * block_dim),
        }
    }

    pub fn from_inner(block_dim: usize, inner: ExpPolynomial) -> Result<Self> {
        if inner.dim() != 2 * block_dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * block_dim,
                got: inner.dim(),
            });
        }
        Ok(BiExpPolynomial { block_dim, inner })
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    /// The underlying 2d-variable exponential polynomial.
    pub fn inner(&self) -> &ExpPolynomial {
        &self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_block(rhs)?;
        Ok(BiExpPolynomial {
            block_dim: self.block_dim,
            inner: self.inner.add(&rhs.inner)?,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_block(rhs)?;
        Ok(BiExpPolynomial {
            block_dim: self.block_dim,
            inner: self.inner.sub(&rhs.inner)?,
        })
    }

    pub fn neg(&self) -> Self {
        BiExpPolynomial {
            block_dim: self.block_dim,
            inner: self.inner.neg(),
        }
    }

    pub fn scale(&self, c: &ExpCoeff) -> Self {
        BiExpPolynomial {
            block_dim: self.block_dim,
            inner: self.inner.scale(c),
        }
    }

    fn check_block(&self, rhs: &Self) -> Result<()> {
        if self.block_dim != rhs.block_dim {
            return Err(Error::DimensionMismatch {
                expected: self.block_dim,
                got: rhs.block_dim,
            });
        }
        Ok(())
    }

    /// Joint translation `F(x+h1, y+h2)`.
    pub fn translate_blocks(&self, h1: &[Rat], h2: &[Rat]) -> Result<Self> {
        let d = self.block_dim;
        if h1.len() != d || h2.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: if h1.len() != d { h1.len() } else { h2.len() },
            });
        }
        let mut joint = h1.to_vec();
        joint.extend_from_slice(h2);
        Ok(BiExpPolynomial {
            block_dim: d,
            inner: crate::operators::translate(&self.inner, &joint)?,
        })
    }

    /// `Δ_{(h1,h2)} F = F(x+h1, y+h2) − F(x,y)`.
    pub fn block_difference(&self, h1: &[Rat], h2: &[Rat]) -> Result<Self> {
        self.translate_blocks(h1, h2)?.sub(self)
    }

    pub fn evaluate(
        &self,
        x: &[num_complex::Complex64],
        y: &[num_complex::Complex64],
    ) -> num_complex::Complex64 {
        let mut p = x.to_vec();
        p.extend_from_slice(y);
        self.inner.evaluate(&p)
    }
}

fn split_freq(freq: &Frequency, d: usize) -> (Frequency, Frequency) {
    (
        Frequency(freq.0[..d].to_vec()),
        Frequency(freq.0[d..].to_vec()),
    )
}

fn split_mono(m: &Monomial, d: usize) -> (Monomial, Monomial) {
    (Monomial(m.0[..d].to_vec()), Monomial(m.0[d..].to_vec()))
}

/// Exact `f(bx+cy)`: mode `λ` acquires x-frequency `bᵗλ` and y-frequency
/// `cᵗλ`; polynomial parts are composed with the joint linear map.
pub fn compose_linear(
    f: &ExpPolynomial,
    b: &RationalMatrix,
    c: &RationalMatrix,
) -> Result<BiExpPolynomial> {
    let d = f.dim();
    if b.dim() != d || c.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: if b.dim() != d { b.dim() } else { c.dim() },
        });
    }
    for (name, m) in [("b", b), ("c", c)] {
        if !m.is_invertible() {
            return Err(Error::SingularMatrix {
                context: format!("compose_linear: matrix {name}"),
            });
        }
    }
    // Substitution x_i ↦ Σ_j b_ij X_j + Σ_j c_ij Y_j into the polynomial part.
    let subs: Vec<Polynomial> = (0..d)
        .map(|i| {
            let mut s = Polynomial::zero(2 * d);
            for j in 0..d {
                if !b.entry(i, j).is_zero() {
                    s.add_term(
                        Monomial::var(2 * d, j),
                        ExpCoeff::scalar(GaussianRational::from_rat(b.entry(i, j).clone())),
                    );
                }
                if !c.entry(i, j).is_zero() {
                    s.add_term(
                        Monomial::var(2 * d, d + j),
                        ExpCoeff::scalar(GaussianRational::from_rat(c.entry(i, j).clone())),
                    );
                }
            }
            s
        })
        .collect();
    let mut raw = Vec::new();
    for (freq, p) in f.modes() {
        let fx = b.transpose_apply_freq(freq);
        let fy = c.transpose_apply_freq(freq);
        raw.push((fx.concat(&fy), p.substitute(&subs)));
    }
    Ok(BiExpPolynomial {
        block_dim: d,
        inner: ExpPolynomial::normal_form(2 * d, raw)?,
    })
}

/// Tensor product `P(x)·Q(y)`.
pub fn tensor(p: &ExpPolynomial, q: &ExpPolynomial) -> Result<BiExpPolynomial> {
    let d = p.dim();
    if q.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: q.dim(),
        });
    }
    let lift_x: Vec<Polynomial> = (0..d).map(|i| Polynomial::var(2 * d, i)).collect();
    let lift_y: Vec<Polynomial> = (0..d).map(|i| Polynomial::var(2 * d, d + i)).collect();
    let mut raw = Vec::new();
    for (fp, pp) in p.modes() {
        let px = pp.substitute(&lift_x);
        for (fq, qq) in q.modes() {
            let qy = qq.substitute(&lift_y);
            raw.push((fp.concat(fq), &px * &qy));
        }
    }
    Ok(BiExpPolynomial {
        block_dim: d,
        inner: ExpPolynomial::normal_form(2 * d, raw)?,
    })
}

/// A rank factorization `denominator·F = Σ_k v_k(x)·u_k(y)` with exactly
/// `rank` terms, all parts exact. The denominator is `1` whenever the pivot
/// minor's determinant is a unit of the group algebra (in particular whenever
/// the coefficient matrix is Gaussian-rational); otherwise it is the scalar
/// that clears the fraction-field solve.
#[derive(Clone, Debug)]
pub struct SeparableWitness {
    pub pairs: Vec<(ExpPolynomial, ExpPolynomial)>, // (v_k(x), u_k(y))
    pub denominator: ExpCoeff,
}

impl SeparableWitness {
    /// `Σ_k v_k ⊗ u_k`, which must equal `denominator·F`.
    pub fn reconstruct(&self, block_dim: usize) -> Result<BiExpPolynomial> {
        let mut acc = BiExpPolynomial::zero(block_dim);
        for (v, u) in &self.pairs {
            acc = acc.add(&tensor(v, u)?)?;
        }
        Ok(acc)
    }
}

type BasisKey = (Frequency, Monomial);

/// Coefficient matrix of `F` in the basis {x-frequency × x-monomial} ×
/// {y-frequency × y-monomial}, with row/column key lists.
fn coefficient_matrix(
    f: &BiExpPolynomial,
) -> (Vec<BasisKey>, Vec<BasisKey>, Vec<Vec<ExpCoeff>>) {
    let d = f.block_dim;
    let mut row_keys: BTreeSet<BasisKey> = BTreeSet::new();
    let mut col_keys: BTreeSet<BasisKey> = BTreeSet::new();
    let mut entries: BTreeMap<(BasisKey, BasisKey), ExpCoeff> = BTreeMap::new();
    for (freq, p) in f.inner.modes() {
        let (fx, fy) = split_freq(freq, d);
        for (m, c) in p.terms() {
            let (mx, my) = split_mono(m, d);
            let rk = (fx.clone(), mx);
            let ck = (fy.clone(), my);
            row_keys.insert(rk.clone());
            col_keys.insert(ck.clone());
            let slot = entries.entry((rk, ck)).or_insert_with(ExpCoeff::zero);
            *slot = &*slot + c;
        }
    }
    let rows: Vec<BasisKey> = row_keys.into_iter().collect();
    let cols: Vec<BasisKey> = col_keys.into_iter().collect();
    let mut mat = vec![vec![ExpCoeff::zero(); cols.len()]; rows.len()];
    for ((rk, ck), v) in entries {
        let ri = rows.binary_search(&rk).unwrap();
        let ci = cols.binary_search(&ck).unwrap();
        mat[ri][ci] = v;
    }
    (rows, cols, mat)
}

fn basis_function(key: &BasisKey, coeff: &ExpCoeff, d: usize) -> (Frequency, Polynomial) {
    let (freq, mono) = key;
    let mut p = Polynomial::zero(d);
    p.add_term(mono.clone(), coeff.clone());
    (freq.clone(), p)
}

/// Exact separable rank: the minimal `n` with `F = Σ_{k=1}^n u_k(y)·v_k(x)`,
/// together with witness factors. Rank is taken over the fraction field of
/// the group algebra, i.e. distinct `E(z)` are treated as independent
/// transcendentals.
pub fn separable_rank(f: &BiExpPolynomial) -> Result<(usize, SeparableWitness)> {
    let d = f.block_dim;
    let (rows, cols, mat) = coefficient_matrix(f);
    if rows.is_empty() || cols.is_empty() {
        return Ok((
            0,
            SeparableWitness {
                pairs: vec![],
                denominator: ExpCoeff::one(),
            },
        ));
    }
    let lifted = FMat::from_rows(
        mat.iter()
            .map(|r| r.iter().map(|c| ExpFrac::from_coeff(c.clone())).collect())
            .collect(),
    );
    let ech = lifted.echelon();
    let r = ech.rank;
    if r == 0 {
        return Ok((
            0,
            SeparableWitness {
                pairs: vec![],
                denominator: ExpCoeff::one(),
            },
        ));
    }
    // Skeleton factorization on the pivot minor M_RC:
    //   δ·F = Σ_k v_k ⊗ u_k  with  v = M[:,C],  u = δ·M_RC⁻¹·M[R,:].
    let pivot_rows = &ech.pivot_rows;
    let pivot_cols = &ech.pivot_cols;
    let m_rc = FMat::from_rows(
        pivot_rows
            .iter()
            .map(|&ri| {
                pivot_cols
                    .iter()
                    .map(|&ci| ExpFrac::from_coeff(mat[ri][ci].clone()))
                    .collect()
            })
            .collect(),
    );
    let delta_frac = m_rc.det();
    let delta = delta_frac
        .numer()
        .try_exact_div(delta_frac.denom())
        .expect("pivot minor determinant is ring-valued");
    let inv = m_rc.inverse().expect("pivot minor is invertible");
    let m_r = FMat::from_rows(
        pivot_rows
            .iter()
            .map(|&ri| {
                (0..cols.len())
                    .map(|ci| ExpFrac::from_coeff(mat[ri][ci].clone()))
                    .collect()
            })
            .collect(),
    );
    let w = inv.matmul(&m_r);
    // With a unit pivot determinant the solve is already ring-valued and the
    // witness reconstructs F on the nose; otherwise scale u by δ and report
    // it as the denominator.
    let (u_mul, denominator) = if delta.is_unit() {
        (ExpFrac::from_coeff(ExpCoeff::one()), ExpCoeff::one())
    } else {
        (ExpFrac::from_coeff(delta.clone()), delta.clone())
    };
    let mut pairs = Vec::with_capacity(r);
    for k in 0..r {
        let ci = pivot_cols[k];
        let mut v_raw = Vec::new();
        for (ri, key) in rows.iter().enumerate() {
            if mat[ri][ci].is_zero() {
                continue;
            }
            v_raw.push(basis_function(key, &mat[ri][ci], d));
        }
        let v = ExpPolynomial::normal_form(d, v_raw)?;
        let mut u_raw = Vec::new();
        for (cj, key) in cols.iter().enumerate() {
            let x = u_mul.mul(w.get(k, cj));
            if x.is_zero() {
                continue;
            }
            let coeff = x
                .numer()
                .try_exact_div(x.denom())
                .expect("scaled solve entry is ring-valued by Cramer's rule");
            u_raw.push(basis_function(key, &coeff, d));
        }
        let u = ExpPolynomial::normal_form(d, u_raw)?;
        pairs.push((v, u));
    }
    Ok((r, SeparableWitness { pairs, denominator }))
}

/// Witness for membership in the separated form
/// `Σ_{|α|≤r} x^α·a_α(y) + Σ_{|β|≤s} b_β(x)·y^β`.
#[derive(Clone, Debug)]
pub struct SeparatedWitness {
    pub a_terms: Vec<(Monomial, ExpPolynomial)>, // (α, a_α(y)), |α| ≤ r
    pub b_terms: Vec<(Monomial, ExpPolynomial)>, // (β, b_β(x)), |β| ≤ s
}

impl SeparatedWitness {
    pub fn reconstruct(&self, block_dim: usize) -> Result<BiExpPolynomial> {
        let d = block_dim;
        let mut acc = BiExpPolynomial::zero(d);
        for (alpha, a) in &self.a_terms {
            let mut xa = Polynomial::zero(d);
            xa.add_term(alpha.clone(), ExpCoeff::one());
            acc = acc.add(&tensor(&ExpPolynomial::from_polynomial(xa), a)?)?;
        }
        for (beta, b) in &self.b_terms {
            let mut yb = Polynomial::zero(d);
            yb.add_term(beta.clone(), ExpCoeff::one());
            acc = acc.add(&tensor(b, &ExpPolynomial::from_polynomial(yb))?)?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct MembershipResult {
    pub member: bool,
    pub witness: Option<SeparatedWitness>,
}

/// Decides membership in the separated form by the per-mode structural
/// criterion: terms of modes with nonzero x-frequency can only come from the
/// B-part (which is polynomial in y, of degree ≤ s), symmetrically for the
/// A-part, and pure polynomial terms must fit one of the two degree budgets.
pub fn separated_membership(f: &BiExpPolynomial, r: u32, s: u32) -> MembershipResult {
    let d = f.block_dim;
    let mut a_parts: BTreeMap<Monomial, Vec<(Frequency, Polynomial)>> = BTreeMap::new();
    let mut b_parts: BTreeMap<Monomial, Vec<(Frequency, Polynomial)>> = BTreeMap::new();
    for (freq, p) in f.inner.modes() {
        let (fx, fy) = split_freq(freq, d);
        match (fx.is_zero(), fy.is_zero()) {
            (false, false) => {
                return MembershipResult {
                    member: false,
                    witness: None,
                }
            }
            (false, true) => {
                // B-part: b_β(x) may be exponential in x, y-degree ≤ s.
                for (m, c) in p.terms() {
                    let (mx, my) = split_mono(m, d);
                    if my.total_degree() > s {
                        return MembershipResult {
                            member: false,
                            witness: None,
                        };
                    }
                    let mut q = Polynomial::zero(d);
                    q.add_term(mx, c.clone());
                    b_parts.entry(my).or_default().push((fx.clone(), q));
                }
            }
            (true, false) => {
                for (m, c) in p.terms() {
                    let (mx, my) = split_mono(m, d);
                    if mx.total_degree() > r {
                        return MembershipResult {
                            member: false,
                            witness: None,
                        };
                    }
                    let mut q = Polynomial::zero(d);
                    q.add_term(my, c.clone());
                    a_parts.entry(mx).or_default().push((fy.clone(), q));
                }
            }
            (true, true) => {
                for (m, c) in p.terms() {
                    let (mx, my) = split_mono(m, d);
                    if mx.total_degree() <= r {
                        let mut q = Polynomial::zero(d);
                        q.add_term(my, c.clone());
                        a_parts
                            .entry(mx)
                            .or_default()
                            .push((Frequency::zero(d), q));
                    } else if my.total_degree() <= s {
                        let mut q = Polynomial::zero(d);
                        q.add_term(mx, c.clone());
                        b_parts
                            .entry(my)
                            .or_default()
                            .push((Frequency::zero(d), q));
                    } else {
                        return MembershipResult {
                            member: false,
                            witness: None,
                        };
                    }
                }
            }
        }
    }
    let collect = |parts: BTreeMap<Monomial, Vec<(Frequency, Polynomial)>>| {
        parts
            .into_iter()
            .map(|(mono, raw)| {
                let d = mono.dim();
                (mono, ExpPolynomial::normal_form(d, raw).expect("same dim"))
            })
            .filter(|(_, e)| !e.is_zero())
            .collect()
    };
    MembershipResult {
        member: true,
        witness: Some(SeparatedWitness {
            a_terms: collect(a_parts),
            b_terms: collect(b_parts),
        }),
    }
}

/// Trace of the reduction cascade: `steps[0]` is `Σ f_i(x+c_iy)` and
/// `steps[k]` is the state after the k-th joint difference
/// `Δ_{(h_k, −c_k⁻¹h_k)}`, which removes the k-th summand.
#[derive(Clone, Debug)]
pub struct Cascade {
    pub steps: Vec<BiExpPolynomial>,
}

impl Cascade {
    pub fn final_state(&self) -> &BiExpPolynomial {
        self.steps.last().expect("cascade has at least one step")
    }
}

/// Runs the reduction cascade on `Σ f_i(x + c_i y)`, checking the standing
/// hypotheses (all `c_i` and all `c_i − c_j` invertible) first.
pub fn reduction_cascade(
    fs: &[ExpPolynomial],
    cs: &[RationalMatrix],
    hs: &[Vec<Rat>],
) -> Result<Cascade> {
    let m = fs.len();
    if m == 0 {
        return Err(Error::EmptyInput("reduction_cascade needs m ≥ 1".into()));
    }
    if cs.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: cs.len(),
        });
    }
    if hs.len() + 1 != m {
        return Err(Error::DimensionMismatch {
            expected: m - 1,
            got: hs.len(),
        });
    }
    let report = crate::theorems::check_c_hypotheses(cs);
    if !report.passed {
        return Err(Error::HypothesisFailure(report));
    }
    let d = fs[0].dim();
    let identity = RationalMatrix::identity(d);
    let mut state = BiExpPolynomial::zero(d);
    for (f, c) in fs.iter().zip(cs) {
        state = state.add(&compose_linear(f, &identity, c)?)?;
    }
    let mut steps = vec![state.clone()];
    for (k, h) in hs.iter().enumerate() {
        let c_inv = cs[k].inverse()?;
        let shift2: Vec<Rat> = c_inv.apply(h).into_iter().map(|v| -v).collect();
        state = state.block_difference(h, &shift2)?;
        steps.push(state.clone());
    }
    Ok(Cascade { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{difference_pow, translate_span};
    use crate::scalar::rat;

    fn poly_x2() -> ExpPolynomial {
        ExpPolynomial::from_polynomial(Polynomial::var(1, 0).pow(2))
    }

    fn exp_mode(l: i64) -> ExpPolynomial {
        ExpPolynomial::mode(
            Frequency(vec![GaussianRational::from_int(l)]),
            Polynomial::one(1),
        )
        .unwrap()
    }

    fn cos_like() -> ExpPolynomial {
        // ½(e^{ix} + e^{−ix})
        let half = ExpCoeff::from_ratio(1, 2);
        let up = ExpPolynomial::mode(
            Frequency(vec![GaussianRational::i()]),
            Polynomial::constant(1, half.clone()),
        )
        .unwrap();
        let dn = ExpPolynomial::mode(
            Frequency(vec![-&GaussianRational::i()]),
            Polynomial::constant(1, half),
        )
        .unwrap();
        up.add(&dn).unwrap()
    }

    #[test]
    fn compose_linear_expansion() {
        // f = x², b = 1, c = 2 → x² + 4xy + 4y²
        let b = RationalMatrix::identity(1);
        let c = RationalMatrix::scalar_int(1, 2);
        let f = compose_linear(&poly_x2(), &b, &c).unwrap();
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let expect = &(&x.pow(2) + &(&x * &y).scale(&ExpCoeff::from_int(4)))
            + &y.pow(2).scale(&ExpCoeff::from_int(4));
        assert_eq!(f.inner(), &ExpPolynomial::from_polynomial(expect));
        // f = 0 → 0
        let z = compose_linear(&ExpPolynomial::zero(1), &b, &c).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn compose_linear_frequency_split() {
        // e^{λx} with b=3, c=2 → x-freq 3λ, y-freq 2λ
        let b = RationalMatrix::scalar_int(1, 3);
        let c = RationalMatrix::scalar_int(1, 2);
        let f = compose_linear(&exp_mode(1), &b, &c).unwrap();
        let expect = ExpPolynomial::mode(
            Frequency(vec![
                GaussianRational::from_int(3),
                GaussianRational::from_int(2),
            ]),
            Polynomial::one(2),
        )
        .unwrap();
        assert_eq!(f.inner(), &expect);
    }

    #[test]
    fn tensor_basics() {
        let one = ExpPolynomial::one(1);
        let t = tensor(&poly_x2(), &one).unwrap();
        let expect = ExpPolynomial::from_polynomial(Polynomial::var(2, 0).pow(2));
        assert_eq!(t.inner(), &expect);
        let t2 = tensor(&one, &exp_mode(1)).unwrap();
        let expect2 = ExpPolynomial::mode(
            Frequency(vec![GaussianRational::zero(), GaussianRational::from_int(1)]),
            Polynomial::one(2),
        )
        .unwrap();
        assert_eq!(t2.inner(), &expect2);
        assert!(tensor(&ExpPolynomial::zero(1), &poly_x2()).unwrap().is_zero());
    }

    #[test]
    fn block_difference_on_tensors() {
        // On P(x)·1(y) with shifts (h, −c⁻¹h): Δ_h P ⊗ 1.
        let p = poly_x2();
        let one = ExpPolynomial::one(1);
        let f = tensor(&p, &one).unwrap();
        let h = vec![rat(1, 1)];
        let c_inv_h = vec![rat(-1, 2)]; // c = 2
        let d = f.block_difference(&h, &c_inv_h).unwrap();
        let expect = tensor(&difference_pow(&p, &h, 1).unwrap(), &one).unwrap();
        assert_eq!(d, expect);
        // On 1(x)·Q(y): 1 ⊗ Δ_{−c⁻¹h} Q.
        let f2 = tensor(&one, &p).unwrap();
        let d2 = f2.block_difference(&h, &c_inv_h).unwrap();
        let expect2 = tensor(&one, &difference_pow(&p, &c_inv_h, 1).unwrap()).unwrap();
        assert_eq!(d2, expect2);
        // x + cy is invariant under (h, −c⁻¹h).
        let c = RationalMatrix::scalar_int(1, 2);
        let comp = compose_linear(&p, &RationalMatrix::identity(1), &c).unwrap();
        assert!(comp.block_difference(&h, &c_inv_h).unwrap().is_zero());
    }

    #[test]
    fn separable_rank_examples() {
        let i1 = RationalMatrix::identity(1);
        // e^{x+y} has rank 1
        let (r, w) = separable_rank(&compose_linear(&exp_mode(1), &i1, &i1).unwrap()).unwrap();
        assert_eq!(r, 1);
        assert!(w.denominator.is_one());
        // cosine addition law: rank 2
        let f = compose_linear(&cos_like(), &i1, &i1).unwrap();
        let (r, _) = separable_rank(&f).unwrap();
        assert_eq!(r, 2);
        // x² → rank 3
        let f = compose_linear(&poly_x2(), &i1, &i1).unwrap();
        let (r, w) = separable_rank(&f).unwrap();
        assert_eq!(r, 3);
        // witness reconstructs δ·F exactly
        let recon = w.reconstruct(1).unwrap();
        assert_eq!(recon, f.scale(&w.denominator));
    }

    #[test]
    fn separable_rank_matches_translate_span_dim() {
        let i1 = RationalMatrix::identity(1);
        let p = &Polynomial::var(1, 0).pow(3) + &Polynomial::var(1, 0);
        let f = ExpPolynomial::from_polynomial(p.clone());
        let (r, _) = separable_rank(&compose_linear(&f, &i1, &i1).unwrap()).unwrap();
        assert_eq!(r, translate_span(&p).len());
    }

    #[test]
    fn membership_examples() {
        let i1 = RationalMatrix::identity(1);
        // x²y³: member with r = 2
        let x2y3 = {
            let p = Polynomial::var(1, 0).pow(2);
            let q = Polynomial::var(1, 0).pow(3);
            tensor(
                &ExpPolynomial::from_polynomial(p),
                &ExpPolynomial::from_polynomial(q),
            )
            .unwrap()
        };
        let res = separated_membership(&x2y3, 2, 0);
        assert!(res.member);
        let w = res.witness.unwrap();
        assert_eq!(w.reconstruct(1).unwrap(), x2y3);
        // e^{x+y}: never a member
        let exy = compose_linear(&exp_mode(1), &i1, &i1).unwrap();
        assert!(!separated_membership(&exy, 4, 4).member);
        // xy + x³ with r=1, s=0: xy goes to A, x³ to B
        let xy_x3 = {
            let x = Polynomial::var(2, 0);
            let y = Polynomial::var(2, 1);
            let p = &(&x * &y) + &x.pow(3);
            BiExpPolynomial::from_inner(1, ExpPolynomial::from_polynomial(p)).unwrap()
        };
        let res = separated_membership(&xy_x3, 1, 0);
        assert!(res.member);
        assert_eq!(res.witness.unwrap().reconstruct(1).unwrap(), xy_x3);
        // monotone in (r, s)
        assert!(separated_membership(&xy_x3, 3, 1).member);
        assert!(!separated_membership(&xy_x3, 0, 0).member);
    }

    #[test]
    fn cascade_small_cases() {
        // m=1: unchanged compose
        let c1 = RationalMatrix::identity(1);
        let f1 = poly_x2();
        let cas = reduction_cascade(&[f1.clone()], &[c1.clone()], &[]).unwrap();
        assert_eq!(cas.steps.len(), 1);
        assert_eq!(
            cas.final_state(),
            &compose_linear(&f1, &RationalMatrix::identity(1), &c1).unwrap()
        );

        // m=2, c₁=I, c₂=2I, f₂=x², h₁=1: survivor is (Δ_{−1}x²)(x+2y)
        let c2 = RationalMatrix::scalar_int(1, 2);
        let f_any = ExpPolynomial::from_polynomial(Polynomial::var(1, 0));
        let cas = reduction_cascade(
            &[f_any, poly_x2()],
            &[c1.clone(), c2.clone()],
            &[vec![rat(1, 1)]],
        )
        .unwrap();
        let g2 = difference_pow(&poly_x2(), &[rat(-1, 1)], 1).unwrap();
        let expect = compose_linear(&g2, &RationalMatrix::identity(1), &c2).unwrap();
        assert_eq!(cas.final_state(), &expect);
    }

    #[test]
    fn cascade_hypothesis_failure() {
        let c1 = RationalMatrix::identity(1);
        let fs = [poly_x2(), poly_x2()];
        let r = reduction_cascade(&fs, &[c1.clone(), c1], &[vec![rat(1, 1)]]);
        assert!(matches!(r, Err(Error::HypothesisFailure(_))));
    }
}
