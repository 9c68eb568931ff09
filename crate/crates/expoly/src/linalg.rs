//! Exact Gaussian elimination over an abstract field.
//!
//! Rank, reduced echelon form, nullspace, solving and determinants, shared by
//! the translate-span, separable-rank and Vandermonde computations. Fields in
//! use: `Rat`, [`GaussianRational`], and [`ExpFrac`] (the fraction field of
//! the exponent group algebra, which stands in for "treat distinct E(z) as
//! independent transcendentals").

use crate::scalar::{ExpFrac, GaussianRational, Rat};
use num_traits::{One, Zero};

/// Exact field operations. `inv` may panic on zero.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Self;

    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl Field for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "division by zero rational");
        self.recip()
    }
}

impl Field for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        GaussianRational::inv(self)
    }
}

impl Field for ExpFrac {
    fn zero() -> Self {
        ExpFrac::from_coeff(crate::scalar::ExpCoeff::zero())
    }
    fn one() -> Self {
        ExpFrac::from_coeff(crate::scalar::ExpCoeff::one())
    }
    fn is_zero(&self) -> bool {
        ExpFrac::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        ExpFrac::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        ExpFrac::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ExpFrac::mul(self, rhs)
    }
    fn inv(&self) -> Self {
        ExpFrac::inv(self)
    }
}

/// Dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct FMat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<F>,
}

/// Result of reduction to reduced row echelon form.
pub struct Echelon<F: Field> {
    pub rref: FMat<F>,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Original row index that supplied each pivot, in pivot order.
    pub pivot_rows: Vec<usize>,
}

impl<F: Field> FMat<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        FMat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        FMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn matmul(&self, rhs: &FMat<F>) -> FMat<F> {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).add(&a.mul(rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form with full pivot bookkeeping.
    pub fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut origin: Vec<usize> = (0..m.rows).collect();
        let mut pivot_cols = Vec::new();
        let mut pivot_rows = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            origin.swap(r, p);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&factor.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivot_cols.push(c);
            pivot_rows.push(origin[r]);
            r += 1;
        }
        Echelon {
            rref: m,
            rank: r,
            pivot_cols,
            pivot_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let ech = self.echelon();
        let pivot_set: std::collections::BTreeSet<usize> =
            ech.pivot_cols.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (k, &pc) in ech.pivot_cols.iter().enumerate() {
                v[pc] = ech.rref.get(k, fc).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self · x = b` for one consistent right-hand side, if possible.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FMat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let ech = aug.echelon();
        if ech.pivot_cols.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![F::zero(); self.cols];
        for (k, &pc) in ech.pivot_cols.iter().enumerate() {
            x[pc] = ech.rref.get(k, self.cols).clone();
        }
        Some(x)
    }

    /// Determinant of a square matrix by elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = det.neg();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&factor.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<FMat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let ech = aug.echelon();
        if ech.rank < n || ech.pivot_cols[..n].iter().enumerate().any(|(k, &c)| k != c) {
            return None;
        }
        let mut inv = FMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, ech.rref.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Incremental row-space tracker: feeds vectors one at a time and reports
/// whether each enlarged the span. Used to pick greedy independent subsets
/// while keeping the caller's original vectors as the basis.
pub struct SpanTracker<F: Field> {
    // Rows kept in (non-reduced) echelon form: each has a leading column
    // strictly greater than the previous row's.
    rows: Vec<Vec<F>>,
    cols: usize,
}

impl<F: Field> SpanTracker<F> {
    pub fn new(cols: usize) -> Self {
        SpanTracker {
            rows: Vec::new(),
            cols,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Returns true when `v` was independent of the current span.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for row in &self.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if v[lead].is_zero() {
                continue;
            }
            let factor = v[lead].mul(&row[lead].inv());
            for j in lead..self.cols {
                v[j] = v[j].sub(&factor.mul(&row[j]));
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            return false;
        }
        let lead = v.iter().position(|x| !x.is_zero()).unwrap();
        let pos = self
            .rows
            .iter()
            .position(|row| row.iter().position(|x| !x.is_zero()).unwrap() > lead)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, v);
        true
    }
}
