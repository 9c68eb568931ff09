//! Numeric/symbolic agreement on bounded grids, residual invariance under
//! reordering, and a Chebyshev-basis oracle for the least-squares fit.

mod support;

use expoly::exppoly::ExpPolynomial;
use expoly::numeric::{polyfit_max_error, residual_max, EquationSpec, Grid, RealFn, Rhs, Summand};
use expoly::operators::{binomial, RationalMatrix};
use expoly::theorems::{frechet_check, skitovich_symbolic_check};
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeMap;
use support::*;

fn as_fn(f: &ExpPolynomial) -> RealFn {
    let f = f.clone();
    Box::new(move |x: &[f64]| {
        let pt: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        f.evaluate(&pt)
    })
}

fn frechet_spec_and_fns(f: &ExpPolynomial, m: u32, d: usize) -> (EquationSpec, BTreeMap<String, RealFn>) {
    let mut fns: BTreeMap<String, RealFn> = BTreeMap::new();
    let mut summands = Vec::new();
    let eye: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for i in 1..=m {
        let sign = if (m - i) % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * binomial(m as i64, i as i64) as f64;
        let base = f.clone();
        fns.insert(
            format!("s{i}"),
            Box::new(move |x: &[f64]| {
                let pt: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                base.evaluate(&pt) * coeff
            }) as RealFn,
        );
        let ci: Vec<Vec<f64>> = (0..d)
            .map(|r| (0..d).map(|c| if r == c { i as f64 } else { 0.0 }).collect())
            .collect();
        summands.push(Summand {
            fn_id: format!("s{i}"),
            b: eye.clone(),
            c: ci,
        });
    }
    let rhs_sign = if m % 2 == 0 { -1.0 } else { 1.0 };
    let base = f.clone();
    fns.insert(
        "rhs".into(),
        Box::new(move |x: &[f64]| {
            let pt: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            base.evaluate(&pt) * rhs_sign
        }) as RealFn,
    );
    (
        EquationSpec {
            summands,
            rhs: Rhs::FOfZ {
                fn_id: "rhs".into(),
            },
        },
        fns,
    )
}

#[test]
fn accepted_frechet_instances_agree_numerically() {
    let mut r = rng(41);
    let mut accepted = 0;
    for _ in 0..200 {
        let d = r.gen_range(1..=2usize);
        let f = rand_exppoly(&mut r, d, 2, 3, 3);
        let m = r.gen_range(1..=4u32);
        let v = frechet_check(&f, m).unwrap();
        if !v.equation_holds {
            continue;
        }
        accepted += 1;
        let (spec, fns) = frechet_spec_and_fns(&f, m, d);
        let grid = Grid::default_grid(d);
        let res = residual_max(&spec, &fns, &grid, &grid).unwrap();
        assert!(res <= 1e-8, "residual {res} for accepted instance");
    }
    assert!(accepted >= 5, "too few accepted instances: {accepted}");
}

#[test]
fn accepted_skitovich_instances_agree_numerically() {
    let mut r = rng(42);
    let mut accepted = 0;
    for _ in 0..100 {
        let d = 1;
        let m = r.gen_range(1..=2usize);
        let fs: Vec<ExpPolynomial> = (0..m)
            .map(|_| ExpPolynomial::from_polynomial(rand_polynomial(&mut r, d, 1, 2)))
            .collect();
        let bs: Vec<RationalMatrix> = (0..m).map(|_| RationalMatrix::identity(d)).collect();
        let cs: Vec<RationalMatrix> = (1..=m)
            .map(|i| RationalMatrix::scalar_int(d, i as i64))
            .collect();
        let v = skitovich_symbolic_check(&fs, &bs, &cs).unwrap();
        if !v.equation_holds {
            continue;
        }
        accepted += 1;
        let mut fns: BTreeMap<String, RealFn> = BTreeMap::new();
        let mut summands = Vec::new();
        for (i, f) in fs.iter().enumerate() {
            fns.insert(format!("f{i}"), as_fn(f));
            summands.push(Summand {
                fn_id: format!("f{i}"),
                b: bs[i].to_f64(),
                c: cs[i].to_f64(),
            });
        }
        let spec = EquationSpec {
            summands,
            rhs: Rhs::TensorSum,
        };
        let grid = Grid::default_grid(d);
        let res = residual_max(&spec, &fns, &grid, &grid).unwrap();
        assert!(res <= 1e-8, "residual {res} for accepted instance");
    }
    assert!(accepted >= 5, "too few accepted instances: {accepted}");
}

#[test]
fn residual_invariant_under_reordering() {
    let mut r = rng(43);
    let f = rand_exppoly(&mut r, 1, 2, 2, 3);
    let g = rand_exppoly(&mut r, 1, 2, 2, 3);
    let mut fns: BTreeMap<String, RealFn> = BTreeMap::new();
    fns.insert("a".into(), as_fn(&f));
    fns.insert("b".into(), as_fn(&g));
    let s1 = Summand {
        fn_id: "a".into(),
        b: vec![vec![1.0]],
        c: vec![vec![2.0]],
    };
    let s2 = Summand {
        fn_id: "b".into(),
        b: vec![vec![1.0]],
        c: vec![vec![-1.0]],
    };
    let fwd = EquationSpec {
        summands: vec![
            Summand { fn_id: "a".into(), b: vec![vec![1.0]], c: vec![vec![2.0]] },
            Summand { fn_id: "b".into(), b: vec![vec![1.0]], c: vec![vec![-1.0]] },
        ],
        rhs: Rhs::Zero,
    };
    let rev = EquationSpec {
        summands: vec![s2, s1],
        rhs: Rhs::Zero,
    };
    let grid = Grid::default_grid(1);
    let mut reversed_axis: Vec<f64> = grid.points().map(|p| p[0]).collect();
    reversed_axis.reverse();
    let grid_rev = Grid::new(vec![reversed_axis], 1e-8).unwrap();
    let a = residual_max(&fwd, &fns, &grid, &grid).unwrap();
    let b = residual_max(&rev, &fns, &grid, &grid).unwrap();
    let c = residual_max(&fwd, &fns, &grid_rev, &grid_rev).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

/// Chebyshev least-squares oracle: same minimization in an orthogonal basis.
fn chebyshev_fit_max_error(xs: &[f64], ys: &[f64], degree: usize) -> f64 {
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let map = |x: f64| 2.0 * (x - lo) / (hi - lo) - 1.0;
    let m = degree + 1;
    let design: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            let t = map(x);
            let mut row = vec![1.0, t];
            for k in 2..m {
                let v = 2.0 * t * row[k - 1] - row[k - 2];
                row.push(v);
            }
            row.truncate(m);
            row
        })
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
    // plain Gauss-Jordan
    let n = m;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| ata[i][c].abs().partial_cmp(&ata[j][c].abs()).unwrap())
            .unwrap();
        ata.swap(c, p);
        aty.swap(c, p);
        let pv = ata[c][c];
        for i in 0..n {
            if i == c || pv.abs() < 1e-300 {
                continue;
            }
            let f = ata[i][c] / pv;
            for j in 0..n {
                ata[i][j] -= f * ata[c][j];
            }
            aty[i] -= f * aty[c];
        }
    }
    let theta: Vec<f64> = (0..n)
        .map(|i| if ata[i][i].abs() < 1e-300 { 0.0 } else { aty[i] / ata[i][i] })
        .collect();
    let mut max_err = 0.0f64;
    for (row, &y) in design.iter().zip(ys) {
        let fit: f64 = row.iter().zip(&theta).map(|(a, b)| a * b).sum();
        max_err = max_err.max((fit - y).abs());
    }
    max_err
}

#[test]
fn polyfit_adequate_against_chebyshev_oracle() {
    let xs: Vec<f64> = (0..1000).map(|i| 5.0 * i as f64 / 999.0).collect();
    for (name, f) in [
        ("cosine", Box::new(|x: f64| (2.0 * std::f64::consts::PI * x).cos()) as Box<dyn Fn(f64) -> f64>),
        ("exp", Box::new(|x: f64| (0.8 * x).exp())),
        ("cubic", Box::new(|x: f64| 1.0 - x + 0.25 * x * x * x)),
    ] {
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let a = polyfit_max_error(&xs, &ys, 10);
        let b = chebyshev_fit_max_error(&xs, &ys, 10);
        // same minimization, different numerics: errors agree to a few
        // percent of scale or both are tiny.
        let scale = ys.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(
            (a - b).abs() <= 0.02 * scale + 1e-6,
            "{name}: normal-eq {a} vs chebyshev {b}"
        );
    }
}

#[test]
fn d1_exhibit_thresholds_scale_with_delta() {
    for delta in [0.25, 1.0, 2.0] {
        let e = expoly::numeric::d1_counterexample(delta);
        assert!(e.is_counterexample, "delta {delta}");
    }
}

#[test]
fn accepted_separated_instances_agree_numerically() {
    // Instances accepted by the separated-form checker, compared on the grid
    // against the witness coefficients a_α(y), b_β(x).
    let mut r = rng(44);
    let mut accepted = 0;
    for _ in 0..80 {
        let d = 1;
        let m = r.gen_range(1..=2usize);
        let fs: Vec<ExpPolynomial> = (0..m)
            .map(|_| ExpPolynomial::from_polynomial(rand_polynomial(&mut r, d, 2, 2)))
            .collect();
        let bs: Vec<RationalMatrix> = (0..m).map(|_| RationalMatrix::identity(d)).collect();
        let cs: Vec<RationalMatrix> = (1..=m)
            .map(|i| RationalMatrix::scalar_int(d, i as i64))
            .collect();
        let (rr, ss) = (2u32, 2u32);
        let v = expoly::theorems::got_classify(&fs, &bs, &cs, rr, ss).unwrap();
        if !v.equation_holds {
            continue;
        }
        accepted += 1;
        // rebuild the witness to get the coefficient functions
        let mut lhs = expoly::bivar::BiExpPolynomial::zero(d);
        for ((f, b), c) in fs.iter().zip(&bs).zip(&cs) {
            lhs = lhs
                .add(&expoly::bivar::compose_linear(f, b, c).unwrap())
                .unwrap();
        }
        let membership = expoly::bivar::separated_membership(&lhs, rr, ss);
        let witness = membership.witness.expect("accepted instance has a witness");
        let mut fns: BTreeMap<String, RealFn> = BTreeMap::new();
        let mut a_terms = Vec::new();
        let mut b_terms = Vec::new();
        for (k, (alpha, a)) in witness.a_terms.iter().enumerate() {
            fns.insert(format!("a{k}"), as_fn(a));
            a_terms.push((alpha.0.clone(), format!("a{k}")));
        }
        for (k, (beta, b)) in witness.b_terms.iter().enumerate() {
            fns.insert(format!("b{k}"), as_fn(b));
            b_terms.push((beta.0.clone(), format!("b{k}")));
        }
        let mut summands = Vec::new();
        for (k, f) in fs.iter().enumerate() {
            fns.insert(format!("f{k}"), as_fn(f));
            summands.push(Summand {
                fn_id: format!("f{k}"),
                b: bs[k].to_f64(),
                c: cs[k].to_f64(),
            });
        }
        let spec = EquationSpec {
            summands,
            rhs: Rhs::Separated { a_terms, b_terms },
        };
        let grid = Grid::default_grid(d);
        let res = residual_max(&spec, &fns, &grid, &grid).unwrap();
        assert!(res <= 1e-8, "separated residual {res}");
    }
    assert!(accepted >= 10, "too few accepted instances: {accepted}");
}
