//! Equation checkers: given concrete exponential-polynomial data, verify the
//! standing invertibility hypotheses, test the functional equation exactly,
//! and confirm the predicted conclusion.
//!
//! Every checker returns a [`Verdict`]. An instance where the hypotheses pass
//! and the equation holds but the conclusion fails cannot exist unless the
//! implementation is wrong, so that combination is reported as
//! [`Error::SoundnessViolation`] rather than as data.

use crate::bivar::{
    compose_linear, separable_rank, separated_membership, tensor, BiExpPolynomial,
    SeparableWitness,
};
use crate::error::{Error, Result};
use crate::exppoly::{ExpPolynomial, Frequency, Monomial};
use crate::linalg::SpanTracker;
use crate::operators::{
    apply_q_of_translation, binomial, dilate, translate, translate_span_dim, RationalMatrix,
    UnivariatePoly,
};
use crate::scalar::{ExpCoeff, ExpFrac, GaussianRational, Rat};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Fill ratio at which the numeric density diagnostic is treated as evidence
/// that the supplied shift points generate a dense subgroup.
pub const DENSITY_THRESHOLD: f64 = 0.99;

/// Outcome of an exact invertibility hypothesis check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub condition: String,
    pub pairs_checked: Vec<(usize, usize)>,
    /// Pairs whose determinant vanished, with the exact determinant value.
    /// `(i, i)` entries record a singular input matrix itself.
    pub offending: Vec<OffendingPair>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffendingPair {
    pub pair: (usize, usize),
    pub which: String,
    pub det: String,
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "{}: passed", self.condition)
        } else {
            let pairs: Vec<String> = self
                .offending
                .iter()
                .map(|o| format!("{:?} ({}, det={})", o.pair, o.which, o.det))
                .collect();
            write!(f, "{}: failed at {}", self.condition, pairs.join(", "))
        }
    }
}

/// Which pairwise condition to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisForm {
    /// `b_i⁻¹c_i − b_j⁻¹c_j` invertible for i ≠ j.
    InverseDifference,
    /// `b_jc_i − b_ic_j` invertible for i ≠ j.
    CrossProduct,
}

/// Exact determinant tests for the chosen pairwise form, plus invertibility
/// of every `b_i` and `c_i` individually.
pub fn check_hypotheses(
    bs: &[RationalMatrix],
    cs: &[RationalMatrix],
    form: HypothesisForm,
) -> HypothesisReport {
    assert_eq!(bs.len(), cs.len(), "need equally many b and c matrices");
    let condition = match form {
        HypothesisForm::InverseDifference => "inverse-difference",
        HypothesisForm::CrossProduct => "cross-product",
    };
    let mut report = HypothesisReport {
        condition: condition.into(),
        pairs_checked: Vec::new(),
        offending: Vec::new(),
        passed: true,
    };
    for (i, (b, c)) in bs.iter().zip(cs).enumerate() {
        if !b.is_invertible() {
            report.offending.push(OffendingPair {
                pair: (i, i),
                which: format!("b_{}", i + 1),
                det: b.det().to_string(),
            });
        }
        if !c.is_invertible() {
            report.offending.push(OffendingPair {
                pair: (i, i),
                which: format!("c_{}", i + 1),
                det: c.det().to_string(),
            });
        }
    }
    if report.offending.is_empty() {
        for i in 0..bs.len() {
            for j in (i + 1)..bs.len() {
                report.pairs_checked.push((i, j));
                let (diff, which) = match form {
                    HypothesisForm::InverseDifference => {
                        let bi_inv = bs[i].inverse().expect("checked invertible");
                        let bj_inv = bs[j].inverse().expect("checked invertible");
                        (
                            bi_inv.matmul(&cs[i]).sub(&bj_inv.matmul(&cs[j])),
                            format!("b_{}⁻¹c_{} − b_{}⁻¹c_{}", i + 1, i + 1, j + 1, j + 1),
                        )
                    }
                    HypothesisForm::CrossProduct => (
                        bs[j].matmul(&cs[i]).sub(&bs[i].matmul(&cs[j])),
                        format!("b_{}c_{} − b_{}c_{}", j + 1, i + 1, i + 1, j + 1),
                    ),
                };
                if !diff.is_invertible() {
                    report.offending.push(OffendingPair {
                        pair: (i, j),
                        which,
                        det: diff.det().to_string(),
                    });
                }
            }
        }
    }
    report.passed = report.offending.is_empty();
    report
}

/// Hypotheses for the `b_i = I` reductions: all `c_i` and all `c_i − c_j`
/// invertible.
pub fn check_c_hypotheses(cs: &[RationalMatrix]) -> HypothesisReport {
    let mut report = HypothesisReport {
        condition: "c-difference".into(),
        pairs_checked: Vec::new(),
        offending: Vec::new(),
        passed: true,
    };
    for (i, c) in cs.iter().enumerate() {
        if !c.is_invertible() {
            report.offending.push(OffendingPair {
                pair: (i, i),
                which: format!("c_{}", i + 1),
                det: c.det().to_string(),
            });
        }
    }
    for i in 0..cs.len() {
        for j in (i + 1)..cs.len() {
            report.pairs_checked.push((i, j));
            let diff = cs[i].sub(&cs[j]);
            if !diff.is_invertible() {
                report.offending.push(OffendingPair {
                    pair: (i, j),
                    which: format!("c_{} − c_{}", i + 1, j + 1),
                    det: diff.det().to_string(),
                });
            }
        }
    }
    report.passed = report.offending.is_empty();
    report
}

/// Joint verdict of an equation test and the conclusion it should force.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict<D> {
    pub equation_holds: bool,
    pub conclusion_holds: bool,
    pub details: D,
}

fn enforce<D: fmt::Debug>(theorem: &str, v: Verdict<D>, exempt: bool) -> Result<Verdict<D>> {
    if v.equation_holds && !v.conclusion_holds && !exempt {
        return Err(Error::SoundnessViolation {
            theorem: theorem.into(),
            details: format!("{:?}", v.details),
        });
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrechetDetails {
    pub m: u32,
    pub is_polynomial: bool,
    pub degree: Option<u32>,
}

/// Tests the order-`m` difference equation read as a single identity in
/// `(x, y)`: `Σ_{i=0}^m C(m,i)(−1)^{m−i} f(x+iy) = 0`, the i = 0 term being
/// `(−1)^m·f(x)·1(y)`. The conclusion is that `f` is a polynomial of total
/// degree ≤ m−1, and for the continuous class tested here the equation holds
/// exactly for those.
pub fn frechet_check(f: &ExpPolynomial, m: u32) -> Result<Verdict<FrechetDetails>> {
    assert!(m >= 1, "difference order must be positive");
    let d = f.dim();
    let identity = RationalMatrix::identity(d);
    let zero_sign = if m % 2 == 0 { 1 } else { -1 };
    let mut acc = tensor(f, &ExpPolynomial::one(d))?.scale(&ExpCoeff::from_int(zero_sign));
    for i in 1..=m {
        let ci = RationalMatrix::scalar_int(d, i as i64);
        let sign = if (m - i) % 2 == 0 { 1 } else { -1 };
        let coeff = ExpCoeff::from_int(sign * binomial(m as i64, i as i64));
        acc = acc.add(&compose_linear(f, &identity, &ci)?.scale(&coeff))?;
    }
    let class = f.classify();
    let conclusion = class.is_polynomial && class.degree.map_or(true, |deg| deg < m);
    let v = Verdict {
        equation_holds: acc.is_zero(),
        conclusion_holds: conclusion,
        details: FrechetDetails {
            m,
            is_polynomial: class.is_polynomial,
            degree: class.degree,
        },
    };
    enforce("frechet", v, false)
}

/// Minimal separable decomposition of `f(x+y)`.
pub struct LeviCivitaAnalysis {
    /// Minimal number of summands in `f(x+y) = Σ a_k(y)·v_k(x)`.
    pub n: usize,
    /// Witness pairs `(v_k(x), a_k(y))` with the scalar denominator.
    pub witness: SeparableWitness,
}

pub fn levi_civita_analyze(f: &ExpPolynomial) -> Result<LeviCivitaAnalysis> {
    let identity = RationalMatrix::identity(f.dim());
    let composed = compose_linear(f, &identity, &identity)?;
    let (n, witness) = separable_rank(&composed)?;
    Ok(LeviCivitaAnalysis { n, witness })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanFamilyReport {
    /// Exact dimension of `span{Σ_i τ_{c_iy}(f_i) : y ∈ samples}`.
    pub dim: usize,
    /// `Σ_i dim τ(f_i)`, the structural upper bound.
    pub structural_bound: usize,
}

/// Dimension of the span of the translated-sum family over the supplied
/// sample shifts. For exponential-polynomial data this stabilizes at or below
/// the structural bound; hypotheses are the `c`-difference conditions.
pub fn delcp1_check(
    fs: &[ExpPolynomial],
    cs: &[RationalMatrix],
    sample_ys: &[Vec<Rat>],
) -> Result<SpanFamilyReport> {
    if fs.is_empty() {
        return Err(Error::EmptyInput("need at least one function".into()));
    }
    if fs.len() != cs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            got: cs.len(),
        });
    }
    let report = check_c_hypotheses(cs);
    if !report.passed {
        return Err(Error::HypothesisFailure(report));
    }
    let d = fs[0].dim();
    let mut members = Vec::new();
    for y in sample_ys {
        let mut sum = ExpPolynomial::zero(d);
        for (f, c) in fs.iter().zip(cs) {
            sum = sum.add(&translate(f, &c.apply(y))?)?;
        }
        members.push(sum);
    }
    // Coefficient vectors over the joint (frequency, monomial) basis.
    let keys: BTreeSet<(Frequency, Monomial)> = members
        .iter()
        .flat_map(|g| {
            g.modes().flat_map(|(freq, p)| {
                p.terms()
                    .map(move |(mono, _)| (freq.clone(), mono.clone()))
            })
        })
        .collect();
    let keys: Vec<_> = keys.into_iter().collect();
    let mut tracker = SpanTracker::<ExpFrac>::new(keys.len());
    for g in &members {
        let vector: Vec<ExpFrac> = keys
            .iter()
            .map(|(freq, mono)| {
                let coeff = g
                    .modes()
                    .find(|(fr, _)| *fr == freq)
                    .map(|(_, p)| p.coeff(mono))
                    .unwrap_or_else(ExpCoeff::zero);
                ExpFrac::from_coeff(coeff)
            })
            .collect();
        tracker.insert(&vector);
    }
    let bound = fs.iter().map(translate_span_dim).sum();
    let dim = tracker.dim();
    // The span of sums sits inside the sum of translate spans; exceeding the
    // bound is impossible for correct arithmetic.
    if dim > bound {
        return Err(Error::SoundnessViolation {
            theorem: "delcp1".into(),
            details: format!("span dimension {dim} exceeds structural bound {bound}"),
        });
    }
    Ok(SpanFamilyReport {
        dim,
        structural_bound: bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GotDetails {
    pub r: u32,
    pub s: u32,
    pub all_polynomial: bool,
    pub degrees: Vec<Option<u32>>,
}

/// Separated-form test for `Σ f_i(b_ix+c_iy)`: the equation holds when the
/// composed sum splits as `Σ_{|α|≤r} x^α a_α(y) + Σ_{|β|≤s} b_β(x) y^β`, and
/// then every `f_i` must be an ordinary polynomial.
pub fn got_classify(
    fs: &[ExpPolynomial],
    bs: &[RationalMatrix],
    cs: &[RationalMatrix],
    r: u32,
    s: u32,
) -> Result<Verdict<GotDetails>> {
    if fs.is_empty() {
        return Err(Error::EmptyInput("need at least one function".into()));
    }
    if fs.len() != bs.len() || fs.len() != cs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            got: bs.len().min(cs.len()),
        });
    }
    let report = check_hypotheses(bs, cs, HypothesisForm::InverseDifference);
    if !report.passed {
        return Err(Error::HypothesisFailure(report));
    }
    let d = fs[0].dim();
    let mut lhs = BiExpPolynomial::zero(d);
    for ((f, b), c) in fs.iter().zip(bs).zip(cs) {
        lhs = lhs.add(&compose_linear(f, b, c)?)?;
    }
    let membership = separated_membership(&lhs, r, s);
    let classes: Vec<_> = fs.iter().map(|f| f.classify()).collect();
    let all_polynomial = classes.iter().all(|c| c.is_polynomial);
    let v = Verdict {
        equation_holds: membership.member,
        conclusion_holds: all_polynomial,
        details: GotDetails {
            r,
            s,
            all_polynomial,
            degrees: classes.iter().map(|c| c.degree).collect(),
        },
    };
    enforce("got", v, false)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkitovichDetails {
    pub m: usize,
    pub p_is_polynomial: bool,
    pub q_is_polynomial: bool,
    pub p_degree: Option<u32>,
    pub q_degree: Option<u32>,
}

/// Tensor-sum test: `Σ f_i(b_ix+c_iy) = P(x)·1(y) + 1(x)·Q(y)` with
/// `P = Σ f_i(b_ix)` and `Q = Σ f_i(c_iy)`. When the equation holds, `P` and
/// `Q` must be polynomials of degree ≤ m (≤ m−1 when the other side is zero).
pub fn skitovich_symbolic_check(
    fs: &[ExpPolynomial],
    bs: &[RationalMatrix],
    cs: &[RationalMatrix],
) -> Result<Verdict<SkitovichDetails>> {
    if fs.is_empty() {
        return Err(Error::EmptyInput("need at least one function".into()));
    }
    if fs.len() != bs.len() || fs.len() != cs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            got: bs.len().min(cs.len()),
        });
    }
    let report = check_hypotheses(bs, cs, HypothesisForm::InverseDifference);
    if !report.passed {
        return Err(Error::HypothesisFailure(report));
    }
    let d = fs[0].dim();
    let m = fs.len() as u32;
    let mut lhs = BiExpPolynomial::zero(d);
    let mut p = ExpPolynomial::zero(d);
    let mut q = ExpPolynomial::zero(d);
    for ((f, b), c) in fs.iter().zip(bs).zip(cs) {
        lhs = lhs.add(&compose_linear(f, b, c)?)?;
        p = p.add(&dilate(f, b)?)?;
        q = q.add(&dilate(f, c)?)?;
    }
    let one = ExpPolynomial::one(d);
    let residual = lhs.sub(&tensor(&p, &one)?)?.sub(&tensor(&one, &q)?)?;
    let pc = p.classify();
    let qc = q.classify();
    let p_bound = if q.is_zero() { m - 1 } else { m };
    let q_bound = if p.is_zero() { m - 1 } else { m };
    let conclusion = pc.is_polynomial
        && qc.is_polynomial
        && pc.degree.map_or(true, |deg| deg <= p_bound)
        && qc.degree.map_or(true, |deg| deg <= q_bound);
    let v = Verdict {
        equation_holds: residual.is_zero(),
        conclusion_holds: conclusion,
        details: SkitovichDetails {
            m: fs.len(),
            p_is_polynomial: pc.is_polynomial,
            q_is_polynomial: qc.is_polynomial,
            p_degree: pc.degree,
            q_degree: qc.degree,
        },
    };
    enforce("skitovich", v, false)
}

/// Right-hand side convention for the N-fold rotation mean. The printed
/// zero form admits only `f = 0` among continuous functions once `h = 0` is
/// substituted; the classical mean-value form compares against `f(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnwRhs {
    Zero,
    FOfZ,
}

/// Exact residual of the rotation-mean equation on ℝ²:
/// `(1/N)·Σ_{k=0}^{N−1} f(z + w^k h) − RHS`, as a two-block object in
/// `(z, h)`. Exact rotations exist only for N ∈ {1, 2, 4}; other orders are
/// handled by the numeric module.
pub fn knw_residual(f: &ExpPolynomial, n: u32, rhs: KnwRhs) -> Result<BiExpPolynomial> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: f.dim(),
        });
    }
    let rotation = match n {
        1 => RationalMatrix::identity(2),
        2 => RationalMatrix::scalar_int(2, -1),
        4 => RationalMatrix::from_rows(vec![
            vec![Rat::zero(), -crate::scalar::rat_int(1)],
            vec![crate::scalar::rat_int(1), Rat::zero()],
        ]),
        other => return Err(Error::UnsupportedRootOrder { n: other }),
    };
    let identity = RationalMatrix::identity(2);
    let mut acc = BiExpPolynomial::zero(2);
    let mut power = identity.clone();
    for _ in 0..n {
        acc = acc.add(&compose_linear(f, &identity, &power)?)?;
        power = power.matmul(&rotation);
    }
    let inv_n = ExpCoeff::from_ratio(1, n as i64);
    acc = acc.scale(&inv_n);
    match rhs {
        KnwRhs::Zero => Ok(acc),
        KnwRhs::FOfZ => acc.sub(&tensor(f, &ExpPolynomial::one(2))?),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereDetails {
    pub points_checked: usize,
    pub is_polynomial: bool,
    pub degree: Option<u32>,
    /// Set for d = 1 inputs, where the conclusion is not claimed.
    pub d1_exemption: bool,
    /// Whether the numeric density diagnostic certified the shift set.
    pub density_certified: bool,
}

/// Tests `q(τ_y)(f) = 0` over the supplied sphere points (`Σ y_i² = δ²`
/// exactly). The polynomial conclusion is enforced only for `d > 1` with a
/// density-certified point set; `d = 1` is allowed but flagged, since two
/// points never pin the conclusion down.
pub fn sphere_annihilator_check(
    f: &ExpPolynomial,
    q: &UnivariatePoly,
    ys: &[Vec<Rat>],
    radius_sq: &Rat,
    density_fill_ratio: Option<f64>,
) -> Result<Verdict<SphereDetails>> {
    if ys.is_empty() {
        return Err(Error::EmptyInput("need at least one sphere point".into()));
    }
    for (i, y) in ys.iter().enumerate() {
        if y.len() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: y.len(),
            });
        }
        let norm_sq: Rat = y.iter().map(|c| c * c).sum();
        if &norm_sq != radius_sq {
            return Err(Error::NotOnSphere {
                index: i,
                radius_sq: radius_sq.to_string(),
            });
        }
    }
    let mut equation_holds = true;
    for y in ys {
        if !apply_q_of_translation(q, y, f)?.is_zero() {
            equation_holds = false;
            break;
        }
    }
    let class = f.classify();
    let d1_exemption = f.dim() == 1;
    let density_certified =
        density_fill_ratio.is_some_and(|ratio| ratio >= DENSITY_THRESHOLD);
    let v = Verdict {
        equation_holds,
        conclusion_holds: class.is_polynomial,
        details: SphereDetails {
            points_checked: ys.len(),
            is_polynomial: class.is_polynomial,
            degree: class.degree,
            d1_exemption,
            density_certified,
        },
    };
    let exempt = d1_exemption || !density_certified;
    enforce("sphere-annihilator", v, exempt)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeReport {
    pub kernel_dim: usize,
    /// Canonical basis of the kernel of the (n+1)×(n+1) power matrix.
    pub kernel_basis: Vec<Vec<GaussianRational>>,
}

/// Exact kernel of the Vandermonde system `V·a = 0`, `V[t][k] = ρ_t^k`.
/// The kernel is trivial exactly when the `ρ_t` are pairwise distinct.
pub fn vandermonde_annihilation(rhos: &[GaussianRational]) -> VandermondeReport {
    let n = rhos.len();
    let mut rows = Vec::with_capacity(n);
    for rho in rhos {
        let mut row = Vec::with_capacity(n);
        let mut power = GaussianRational::one();
        for _ in 0..n {
            row.push(power.clone());
            power = &power * rho;
        }
        rows.push(row);
    }
    let mat = crate::linalg::FMat::from_rows(rows);
    let kernel_basis = mat.nullspace();
    VandermondeReport {
        kernel_dim: kernel_basis.len(),
        kernel_basis,
    }
}
