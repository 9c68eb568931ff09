//! Floating-point grid evaluation of functional-equation residuals for
//! arbitrary callables. Validates the symbolic layer on bounded grids and
//! exhibits the behavior that only exists outside the exact class, such as
//! the periodic d = 1 annihilation example.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Callable used on grids: real input point, complex value.
pub type RealFn = Box<dyn Fn(&[f64]) -> Complex64>;

/// Rectangular evaluation grid with a comparison tolerance.
#[derive(Clone, Debug)]
pub struct Grid {
    axes: Vec<Vec<f64>>,
    pub tolerance: f64,
}

impl Grid {
    pub fn new(axes: Vec<Vec<f64>>, tolerance: f64) -> Result<Self> {
        if axes.iter().any(|a| a.len() < 2) {
            return Err(Error::EmptyInput(
                "each grid axis needs at least 2 samples".into(),
            ));
        }
        if !tolerance.is_finite() || tolerance <= 0.0 {
            return Err(Error::OutOfRange {
                what: "tolerance".into(),
                value: tolerance,
                limit: 0.0,
            });
        }
        Ok(Grid { axes, tolerance })
    }

    /// `n` uniform samples per axis on `[lo, hi]^d`.
    pub fn uniform(d: usize, lo: f64, hi: f64, n: usize, tolerance: f64) -> Result<Self> {
        let axis: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        Self::new(vec![axis; d], tolerance)
    }

    /// Default: 21 points per axis on [−2, 2], tolerance 1e−8.
    pub fn default_grid(d: usize) -> Self {
        Self::uniform(d, -2.0, 2.0, 21, 1e-8).expect("valid default grid")
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn points(&self) -> GridIter<'_> {
        GridIter {
            axes: &self.axes,
            index: vec![0; self.axes.len()],
            done: self.axes.is_empty(),
        }
    }
}

pub struct GridIter<'a> {
    axes: &'a [Vec<f64>],
    index: Vec<usize>,
    done: bool,
}

impl Iterator for GridIter<'_> {
    type Item = Vec<f64>;
    fn next(&mut self) -> Option<Vec<f64>> {
        if self.done {
            return None;
        }
        let point: Vec<f64> = self
            .index
            .iter()
            .zip(self.axes)
            .map(|(&i, axis)| axis[i])
            .collect();
        let mut carry = 0;
        while carry < self.axes.len() {
            self.index[carry] += 1;
            if self.index[carry] < self.axes[carry].len() {
                break;
            }
            self.index[carry] = 0;
            carry += 1;
        }
        if carry == self.axes.len() {
            self.done = true;
        }
        Some(point)
    }
}

/// One left-hand-side summand `f(bx + cy)`.
pub struct Summand {
    pub fn_id: String,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
}

/// Right-hand side of an equation spec.
pub enum Rhs {
    Zero,
    /// `f(x)·1(y)` for the named function.
    FOfZ { fn_id: String },
    /// `Σ_i f_i(b_ix)·1(y) + 1(x)·Σ_i f_i(c_iy)` built from the summands.
    TensorSum,
    /// `Σ x^α·a_α(y) + Σ b_β(x)·y^β` with named coefficient functions.
    Separated {
        a_terms: Vec<(Vec<u32>, String)>,
        b_terms: Vec<(Vec<u32>, String)>,
    },
}

/// Symbolic description of an LHS/RHS pair, evaluated pointwise on grids.
pub struct EquationSpec {
    pub summands: Vec<Summand>,
    pub rhs: Rhs,
}

fn apply_mat(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mono_eval(alpha: &[u32], v: &[f64]) -> f64 {
    alpha
        .iter()
        .zip(v)
        .map(|(&e, &x)| x.powi(e as i32))
        .product()
}

fn lookup<'a>(fns: &'a BTreeMap<String, RealFn>, id: &str) -> Result<&'a RealFn> {
    fns.get(id)
        .ok_or_else(|| Error::EmptyInput(format!("unknown function id {id}")))
}

/// Max over grid pairs of `|LHS(x,y) − RHS(x,y)|`.
pub fn residual_max(
    spec: &EquationSpec,
    fns: &BTreeMap<String, RealFn>,
    x_grid: &Grid,
    y_grid: &Grid,
) -> Result<f64> {
    let mut max = 0.0f64;
    let mut index = 0usize;
    for x in x_grid.points() {
        for y in y_grid.points() {
            let mut lhs = Complex64::new(0.0, 0.0);
            for s in &spec.summands {
                let f = lookup(fns, &s.fn_id)?;
                let arg: Vec<f64> = apply_mat(&s.b, &x)
                    .iter()
                    .zip(apply_mat(&s.c, &y))
                    .map(|(a, b)| a + b)
                    .collect();
                lhs += f(&arg);
            }
            let rhs = match &spec.rhs {
                Rhs::Zero => Complex64::new(0.0, 0.0),
                Rhs::FOfZ { fn_id } => lookup(fns, fn_id)?(&x),
                Rhs::TensorSum => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in &spec.summands {
                        let f = lookup(fns, &s.fn_id)?;
                        acc += f(&apply_mat(&s.b, &x));
                        acc += f(&apply_mat(&s.c, &y));
                    }
                    acc
                }
                Rhs::Separated { a_terms, b_terms } => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (alpha, id) in a_terms {
                        acc += mono_eval(alpha, &x) * lookup(fns, id)?(&y);
                    }
                    for (beta, id) in b_terms {
                        acc += mono_eval(beta, &y) * lookup(fns, id)?(&x);
                    }
                    acc
                }
            };
            let r = (lhs - rhs).norm();
            if !r.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
            max = max.max(r);
            index += 1;
        }
    }
    Ok(max)
}

/// Numeric rotation-mean residual on ℝ²: max over the grid (used for both
/// `z` and `h`) of `|(1/N)Σ_k f(z + R_k h) − RHS|`, with float rotations by
/// `2πk/N`.
pub fn knw_residual_numeric(
    f: &RealFn,
    n: u32,
    rhs: crate::theorems::KnwRhs,
    grid: &Grid,
) -> Result<f64> {
    assert!(n >= 1, "need at least one rotation");
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    let rotations: Vec<[f64; 4]> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            [a.cos(), -a.sin(), a.sin(), a.cos()]
        })
        .collect();
    let mut max = 0.0f64;
    let mut index = 0usize;
    for z in grid.points() {
        for h in grid.points() {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in &rotations {
                let arg = [
                    z[0] + r[0] * h[0] + r[1] * h[1],
                    z[1] + r[2] * h[0] + r[3] * h[1],
                ];
                acc += f(&arg);
            }
            acc /= n as f64;
            if let crate::theorems::KnwRhs::FOfZ = rhs {
                acc -= f(&z);
            }
            let v = acc.norm();
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
            max = max.max(v);
            index += 1;
        }
    }
    Ok(max)
}

/// What the one-dimensional exhibit produced.
#[derive(Clone, Debug)]
pub struct D1Exhibit {
    /// `max_x |f(x+δ) − f(x)|` on the sample grid.
    pub residual_plus: f64,
    /// `max_x |f(x−δ) − f(x)|` on the sample grid.
    pub residual_minus: f64,
    /// Max error of the best degree-10 least-squares polynomial fit.
    pub poly_fit_error: f64,
    /// True when the shifts annihilate while no low-degree polynomial fits:
    /// the configuration no exact-class function can produce.
    pub is_counterexample: bool,
}

const D1_GRID_POINTS: usize = 1000;
const D1_FIT_DEGREE: usize = 10;
const D1_RESIDUAL_TOL: f64 = 1e-10;
const D1_FIT_FLOOR: f64 = 0.5;

/// Runs the exhibit for an arbitrary scalar function on `[0, 5δ]`.
pub fn d1_exhibit(f: impl Fn(f64) -> f64, delta: f64) -> D1Exhibit {
    assert!(delta > 0.0);
    let xs: Vec<f64> = (0..D1_GRID_POINTS)
        .map(|i| 5.0 * delta * i as f64 / (D1_GRID_POINTS - 1) as f64)
        .collect();
    let mut residual_plus = 0.0f64;
    let mut residual_minus = 0.0f64;
    for &x in &xs {
        residual_plus = residual_plus.max((f(x + delta) - f(x)).abs());
        residual_minus = residual_minus.max((f(x - delta) - f(x)).abs());
    }
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let fit = polyfit_max_error(&xs, &ys, D1_FIT_DEGREE);
    D1Exhibit {
        residual_plus,
        residual_minus,
        poly_fit_error: fit,
        is_counterexample: residual_plus <= D1_RESIDUAL_TOL
            && residual_minus <= D1_RESIDUAL_TOL
            && fit >= D1_FIT_FLOOR,
    }
}

/// The periodic exhibit `f(x) = cos(2πx/δ)`: both shifts by ±δ annihilate
/// the difference while no degree-10 polynomial comes close.
pub fn d1_counterexample(delta: f64) -> D1Exhibit {
    d1_exhibit(
        move |x: f64| (2.0 * std::f64::consts::PI * x / delta).cos(),
        delta,
    )
}

/// Least-squares polynomial fit via normal equations with column scaling;
/// returns the max absolute error over the sample points.
pub fn polyfit_max_error(xs: &[f64], ys: &[f64], degree: usize) -> f64 {
    let m = degree + 1;
    // Column scaling keeps the normal equations tame on wide ranges.
    let scales: Vec<f64> = (0..m)
        .map(|j| {
            xs.iter()
                .map(|&x| x.powi(j as i32).abs())
                .fold(0.0f64, f64::max)
                .max(1e-300)
        })
        .collect();
    let design: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| (0..m).map(|j| x.powi(j as i32) / scales[j]).collect())
        .collect();
    let mut ata = vec![vec![0.0f64; m]; m];
    let mut aty = vec![0.0f64; m];
    for (row, &y) in design.iter().zip(ys) {
        for j in 0..m {
            aty[j] += row[j] * y;
            for k in 0..m {
                ata[j][k] += row[j] * row[k];
            }
        }
    }
    let theta = solve_dense(&mut ata, &mut aty);
    let mut max_err = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let fit: f64 = (0..m).map(|j| theta[j] * x.powi(j as i32) / scales[j]).sum();
        max_err = max_err.max((fit - ys[i]).abs());
    }
    max_err
}

fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())
            .unwrap();
        a.swap(c, p);
        b.swap(c, p);
        let pivot = a[c][c];
        if pivot.abs() < 1e-300 {
            continue;
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = a[i][c] / pivot;
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
            b[i] -= f * b[c];
        }
    }
    (0..n)
        .map(|i| {
            if a[i][i].abs() < 1e-300 {
                0.0
            } else {
                b[i] / a[i][i]
            }
        })
        .collect()
}
