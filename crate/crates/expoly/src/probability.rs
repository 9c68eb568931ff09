//! Monte Carlo side: simulate independent random vectors, build the two
//! linear forms, estimate characteristic functions, test the product
//! identity they must satisfy when the forms are independent, and run the
//! quadratic-log-fit diagnostic that separates Gaussians from everything
//! else.
//!
//! Sampling is counter-based: every row draws from its own ChaCha stream
//! derived from the seed in its [`RandomVectorSpec`], so results are
//! reproducible bit-exactly and independent of any parallel partitioning by
//! row.

use crate::error::{Error, Result};
use crate::operators::RationalMatrix;
use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::BTreeMap;
use std::io;

/// Distribution family of one independent d-dimensional random vector.
#[derive(Clone, Debug)]
pub enum Family {
    Gaussian { mean: Vec<f64>, cov: Vec<Vec<f64>> },
    UniformBox { lows: Vec<f64>, highs: Vec<f64> },
    Laplace { location: Vec<f64>, scale: f64 },
    /// Named external sampler, resolved through a [`SamplerRegistry`].
    Custom(String),
}

/// External samplers for [`Family::Custom`]: draw one d-vector from the rng.
pub type SamplerRegistry = BTreeMap<String, Box<dyn Fn(&mut ChaCha8Rng) -> Vec<f64>>>;

#[derive(Clone, Debug)]
pub struct RandomVectorSpec {
    pub dim: usize,
    pub family: Family,
    pub seed: u64,
}

impl RandomVectorSpec {
    pub fn gaussian_std(dim: usize, seed: u64) -> Self {
        let cov = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        RandomVectorSpec {
            dim,
            family: Family::Gaussian {
                mean: vec![0.0; dim],
                cov,
            },
            seed,
        }
    }

    pub fn uniform_symmetric(dim: usize, half_width: f64, seed: u64) -> Self {
        RandomVectorSpec {
            dim,
            family: Family::UniformBox {
                lows: vec![-half_width; dim],
                highs: vec![half_width; dim],
            },
            seed,
        }
    }

    pub fn laplace_std(dim: usize, seed: u64) -> Self {
        RandomVectorSpec {
            dim,
            family: Family::Laplace {
                location: vec![0.0; dim],
                scale: 1.0,
            },
            seed,
        }
    }

    /// Validates shapes and, for Gaussians, symmetry and positive
    /// semidefiniteness of the covariance. Returns the Cholesky-type factor
    /// used for sampling.
    fn prepare(&self) -> Result<Prepared> {
        match &self.family {
            Family::Gaussian { mean, cov } => {
                if mean.len() != self.dim || cov.len() != self.dim {
                    return Err(Error::InvalidSpec("gaussian shape mismatch".into()));
                }
                for (i, row) in cov.iter().enumerate() {
                    if row.len() != self.dim {
                        return Err(Error::InvalidSpec("covariance not square".into()));
                    }
                    for j in 0..self.dim {
                        if (cov[i][j] - cov[j][i]).abs() > 1e-12 {
                            return Err(Error::InvalidSpec("covariance not symmetric".into()));
                        }
                    }
                }
                let factor = psd_cholesky(cov)
                    .ok_or_else(|| Error::InvalidSpec("covariance not PSD".into()))?;
                Ok(Prepared::Gaussian {
                    mean: mean.clone(),
                    factor,
                })
            }
            Family::UniformBox { lows, highs } => {
                if lows.len() != self.dim || highs.len() != self.dim {
                    return Err(Error::InvalidSpec("uniform box shape mismatch".into()));
                }
                if lows.iter().zip(highs).any(|(l, h)| l >= h) {
                    return Err(Error::InvalidSpec("uniform box has empty side".into()));
                }
                Ok(Prepared::Uniform {
                    lows: lows.clone(),
                    highs: highs.clone(),
                })
            }
            Family::Laplace { location, scale } => {
                if location.len() != self.dim || *scale <= 0.0 {
                    return Err(Error::InvalidSpec("laplace shape mismatch".into()));
                }
                Ok(Prepared::Laplace {
                    location: location.clone(),
                    scale: *scale,
                })
            }
            Family::Custom(id) => Ok(Prepared::Custom(id.clone())),
        }
    }
}

enum Prepared {
    Gaussian { mean: Vec<f64>, factor: Vec<Vec<f64>> },
    Uniform { lows: Vec<f64>, highs: Vec<f64> },
    Laplace { location: Vec<f64>, scale: f64 },
    Custom(String),
}

/// Cholesky with zero-pivot tolerance so semidefinite matrices factor too.
fn psd_cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1.0);
    let tol = 1e-10 * scale;
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s < -tol {
                    return None;
                }
                l[i][j] = s.max(0.0).sqrt();
            } else if l[j][j] > tol {
                l[i][j] = s / l[j][j];
            } else {
                l[i][j] = 0.0;
            }
        }
    }
    Some(l)
}

/// n×d sample matrix with provenance.
#[derive(Clone, Debug)]
pub struct SampleMatrix {
    n: usize,
    d: usize,
    data: Vec<f64>,
    pub provenance: String,
}

impl SampleMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>, provenance: String) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidSpec("ragged sample rows".into()));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index: 0 });
        }
        Ok(SampleMatrix {
            n,
            d,
            data,
            provenance,
        })
    }

    /// CSV with a header row of column names, one float row per sample.
    pub fn from_csv<R: io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::InvalidSpec(format!("csv: {e}")))?;
            let row: std::result::Result<Vec<f64>, _> =
                record.iter().map(|s| s.trim().parse::<f64>()).collect();
            rows.push(row.map_err(|e| Error::InvalidSpec(format!("csv: {e}")))?);
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput("csv has no data rows".into()));
        }
        Self::from_rows(rows, "csv".into())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }
}

fn draw(prepared: &Prepared, dim: usize, rng: &mut ChaCha8Rng, registry: Option<&SamplerRegistry>) -> Result<Vec<f64>> {
    match prepared {
        Prepared::Gaussian { mean, factor } => {
            let z: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            Ok((0..dim)
                .map(|i| {
                    let mut s = mean[i];
                    for k in 0..=i {
                        s += factor[i][k] * z[k];
                    }
                    s
                })
                .collect())
        }
        Prepared::Uniform { lows, highs } => Ok((0..dim)
            .map(|i| Uniform::new_inclusive(lows[i], highs[i]).sample(rng))
            .collect()),
        Prepared::Laplace { location, scale } => Ok((0..dim)
            .map(|i| {
                let u: f64 = rng.gen_range(-0.5..0.5);
                location[i] - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            })
            .collect()),
        Prepared::Custom(id) => {
            let sampler = registry
                .and_then(|r| r.get(id))
                .ok_or_else(|| Error::InvalidSpec(format!("unknown sampler id {id}")))?;
            let v = sampler(rng);
            if v.len() != dim {
                return Err(Error::InvalidSpec("custom sampler dimension".into()));
            }
            Ok(v)
        }
    }
}

fn row_rng(seed: u64, row: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row as u64);
    rng
}

/// i.i.d. draws of each `X_i`, one sample matrix per random-vector spec.
pub fn simulate_vectors(
    specs: &[RandomVectorSpec],
    n: usize,
    registry: Option<&SamplerRegistry>,
) -> Result<Vec<SampleMatrix>> {
    if n == 0 {
        return Err(Error::SampleTooSmall { n: 0, min: 1 });
    }
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let prepared = spec.prepare()?;
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let mut rng = row_rng(spec.seed, r);
            rows.push(draw(&prepared, spec.dim, &mut rng, registry)?);
        }
        out.push(SampleMatrix::from_rows(
            rows,
            format!("seeded(seed={}, n={n})", spec.seed),
        )?);
    }
    Ok(out)
}

fn transpose_apply(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let d = v.len();
    (0..d)
        .map(|j| (0..d).map(|i| m[i][j] * v[i]).sum())
        .collect()
}

/// Rows of `(L1, L2) = (Σ b_iᵗX_i, Σ c_iᵗX_i)` over i.i.d. draws of the
/// independent `X_i`. Deterministic under the per-vector seeds.
pub fn simulate_linear_forms(
    specs: &[RandomVectorSpec],
    bs: &[RationalMatrix],
    cs: &[RationalMatrix],
    n: usize,
) -> Result<(SampleMatrix, SampleMatrix)> {
    if specs.len() != bs.len() || specs.len() != cs.len() {
        return Err(Error::InvalidSpec(
            "need one b and one c matrix per random vector".into(),
        ));
    }
    if specs.is_empty() {
        return Err(Error::EmptyInput("no random vector specs".into()));
    }
    let d = specs[0].dim;
    let samples = simulate_vectors(specs, n, None)?;
    let bf: Vec<Vec<Vec<f64>>> = bs.iter().map(|m| m.to_f64()).collect();
    let cf: Vec<Vec<Vec<f64>>> = cs.iter().map(|m| m.to_f64()).collect();
    let mut l1 = Vec::with_capacity(n);
    let mut l2 = Vec::with_capacity(n);
    for r in 0..n {
        let mut row1 = vec![0.0; d];
        let mut row2 = vec![0.0; d];
        for (i, s) in samples.iter().enumerate() {
            let x = s.row(r);
            for (j, v) in transpose_apply(&bf[i], x).into_iter().enumerate() {
                row1[j] += v;
            }
            for (j, v) in transpose_apply(&cf[i], x).into_iter().enumerate() {
                row2[j] += v;
            }
        }
        l1.push(row1);
        l2.push(row2);
    }
    let prov = format!("linear-forms(m={}, n={n})", specs.len());
    Ok((
        SampleMatrix::from_rows(l1, prov.clone())?,
        SampleMatrix::from_rows(l2, prov)?,
    ))
}

/// Empirical characteristic function values at the given points.
#[derive(Clone, Debug)]
pub struct CfEstimate {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Complex64>,
    pub n: usize,
}

impl CfEstimate {
    /// The estimate at `t = 0` is 1 exactly and no magnitude can exceed
    /// `1 + 3/√n`.
    pub fn validate(&self) -> Result<()> {
        let bound = 1.0 + 3.0 / (self.n as f64).sqrt();
        for (i, (t, v)) in self.points.iter().zip(&self.values).enumerate() {
            if t.iter().all(|&c| c == 0.0) && *v != Complex64::new(1.0, 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "cf at origin is {v}, expected exactly 1"
                )));
            }
            if v.norm() > bound {
                return Err(Error::OutOfRange {
                    what: format!("cf magnitude at point {i}"),
                    value: v.norm(),
                    limit: bound,
                });
            }
        }
        Ok(())
    }
}

/// `(1/n)·Σ_rows e^{i⟨t, row⟩}` per evaluation point.
pub fn empirical_cf(samples: &SampleMatrix, points: &[Vec<f64>]) -> Result<CfEstimate> {
    if samples.n() == 0 {
        return Err(Error::EmptyInput("empty sample matrix".into()));
    }
    let n = samples.n();
    let mut values = Vec::with_capacity(points.len());
    for t in points {
        if t.len() != samples.dim() {
            return Err(Error::DimensionMismatch {
                expected: samples.dim(),
                got: t.len(),
            });
        }
        if t.iter().all(|&c| c == 0.0) {
            values.push(Complex64::new(1.0, 0.0));
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..n {
            let dot: f64 = t.iter().zip(samples.row(r)).map(|(a, b)| a * b).sum();
            acc += Complex64::new(0.0, dot).exp();
        }
        values.push(acc / n as f64);
    }
    let est = CfEstimate {
        points: points.to_vec(),
        values,
        n,
    };
    est.validate()?;
    Ok(est)
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Max deviation of the product identity
/// `∏ μ̂_i(b_ix+c_iy) − ∏ μ̂_i(b_ix)·∏ μ̂_i(c_iy)` over the point pairs,
/// using per-distribution empirical characteristic functions. Errors when
/// any evaluated magnitude falls below the trusted floor 0.1.
pub fn skitovich_residual(
    specs: &[RandomVectorSpec],
    bs: &[RationalMatrix],
    cs: &[RationalMatrix],
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    n: usize,
) -> Result<f64> {
    if specs.len() != bs.len() || specs.len() != cs.len() {
        return Err(Error::InvalidSpec(
            "need one b and one c matrix per random vector".into(),
        ));
    }
    let samples = simulate_vectors(specs, n, None)?;
    let bf: Vec<Vec<Vec<f64>>> = bs.iter().map(|m| m.to_f64()).collect();
    let cf: Vec<Vec<Vec<f64>>> = cs.iter().map(|m| m.to_f64()).collect();
    // Per distribution: evaluation points b_ix+c_iy, b_ix, c_iy for all pairs.
    let mut residual = 0.0f64;
    let mut per_dist: Vec<CfEstimate> = Vec::with_capacity(specs.len());
    let mut layout = Vec::new(); // (x_idx, y_idx) order of the triple blocks
    for xi in 0..xs.len() {
        for yi in 0..ys.len() {
            layout.push((xi, yi));
        }
    }
    for (i, s) in samples.iter().enumerate() {
        let mut pts = Vec::with_capacity(3 * layout.len());
        for &(xi, yi) in &layout {
            let bx = mat_vec(&bf[i], &xs[xi]);
            let cy = mat_vec(&cf[i], &ys[yi]);
            let joint: Vec<f64> = bx.iter().zip(&cy).map(|(a, b)| a + b).collect();
            pts.push(joint);
            pts.push(bx);
            pts.push(cy);
        }
        let est = empirical_cf(s, &pts)?;
        for (k, v) in est.values.iter().enumerate() {
            if v.norm() < 0.1 {
                return Err(Error::MagnitudeFloor {
                    index: k,
                    magnitude: v.norm(),
                });
            }
        }
        per_dist.push(est);
    }
    for (pair_idx, _) in layout.iter().enumerate() {
        let mut joint = Complex64::new(1.0, 0.0);
        let mut split = Complex64::new(1.0, 0.0);
        for est in &per_dist {
            joint *= est.values[3 * pair_idx];
            split *= est.values[3 * pair_idx + 1] * est.values[3 * pair_idx + 2];
        }
        residual = residual.max((joint - split).norm());
    }
    Ok(residual)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceReport {
    pub statistic: f64,
    pub p_value: f64,
}

const PERMUTATIONS: usize = 199;
const PERMUTATION_SEED: u64 = 0x5eed_d157;
const SUBSAMPLE_CAP: usize = 2000;

/// Bias-corrected (U-centered) distance-correlation independence test with a
/// seeded permutation p-value (199 permutations). The statistic is centered
/// at zero under independence and consistent against every dependence
/// alternative. Rows beyond an internal cap are subsampled evenly to keep
/// the pairwise-distance work bounded.
pub fn independence_test(l1: &SampleMatrix, l2: &SampleMatrix) -> Result<IndependenceReport> {
    if l1.n() != l2.n() {
        return Err(Error::DimensionMismatch {
            expected: l1.n(),
            got: l2.n(),
        });
    }
    let n_full = l1.n();
    if n_full < 20 {
        return Err(Error::SampleTooSmall {
            n: n_full,
            min: 20,
        });
    }
    let idx: Vec<usize> = if n_full > SUBSAMPLE_CAP {
        (0..SUBSAMPLE_CAP)
            .map(|k| k * n_full / SUBSAMPLE_CAP)
            .collect()
    } else {
        (0..n_full).collect()
    };
    let n = idx.len();
    let a = ucentered_distance_matrix(l1, &idx);
    let b = ucentered_distance_matrix(l2, &idx);
    let scale = (n * (n - 3)) as f64;
    let dvar_a = frob_sum(&a, &a) / scale;
    let dvar_b = frob_sum(&b, &b) / scale;
    let dcov_obs = frob_sum(&a, &b) / scale;
    let statistic = if dvar_a > 0.0 && dvar_b > 0.0 {
        (dcov_obs / (dvar_a * dvar_b).sqrt()).max(0.0).sqrt()
    } else {
        0.0
    };
    let mut rng = ChaCha8Rng::seed_from_u64(PERMUTATION_SEED);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut exceed = 0usize;
    for _ in 0..PERMUTATIONS {
        // Fisher-Yates on the row labels of the second block; U-centering
        // commutes with simultaneous row/column permutation.
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let mut acc = 0.0f64;
        for i in 0..n {
            let pi = perm[i] * n;
            let ii = i * n;
            for j in 0..n {
                acc += a[ii + j] * b[pi + perm[j]];
            }
        }
        if acc / scale >= dcov_obs {
            exceed += 1;
        }
    }
    Ok(IndependenceReport {
        statistic,
        p_value: (1 + exceed) as f64 / (1 + PERMUTATIONS) as f64,
    })
}

fn pair_dist(m: &SampleMatrix, i: usize, j: usize) -> f64 {
    m.row(i)
        .iter()
        .zip(m.row(j))
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// U-centered pairwise Euclidean distance matrix (zero diagonal).
fn ucentered_distance_matrix(m: &SampleMatrix, idx: &[usize]) -> Vec<f64> {
    let n = idx.len();
    let mut d = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = pair_dist(m, idx[i], idx[j]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    let mut row_sum = vec![0.0f64; n];
    for i in 0..n {
        row_sum[i] = d[i * n..(i + 1) * n].iter().sum::<f64>();
    }
    let grand = row_sum.iter().sum::<f64>() / ((n - 1) * (n - 2)) as f64;
    let denom = (n - 2) as f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                d[i * n + j] = 0.0;
            } else {
                d[i * n + j] += grand - row_sum[i] / denom - row_sum[j] / denom;
            }
        }
    }
    d
}

fn frob_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}

/// Quadratic-log-fit diagnostic of a characteristic function.
#[derive(Clone, Debug)]
pub struct LogCfFit {
    /// Monomial/coefficient pairs of the degree-2 fit of `−log cf`.
    pub coefficients: Vec<(Vec<u32>, Complex64)>,
    /// RMS residual of the degree-2 fit minus that of the degree-max fit;
    /// near zero exactly when `−log cf` is quadratic, i.e. Gaussian.
    pub quadratic_excess: f64,
}

/// Least-squares fit of `−log cf` by polynomials in `t` of degree 2 and of
/// degree `max_degree`. All magnitudes must sit above the trusted floor 0.1
/// so the principal logarithm is well defined.
pub fn marcinkiewicz_fit(cf: &CfEstimate, max_degree: u32) -> Result<LogCfFit> {
    assert!(max_degree >= 2, "need degree ≥ 2 for the comparison");
    for (i, v) in cf.values.iter().enumerate() {
        if v.norm() < 0.1 {
            return Err(Error::MagnitudeFloor {
                index: i,
                magnitude: v.norm(),
            });
        }
    }
    let d = cf.points.first().map_or(0, |p| p.len());
    let ys: Vec<Complex64> = cf.values.iter().map(|v| -v.ln()).collect();
    let (res2, coeffs2) = poly_ls_residual(&cf.points, &ys, d, 2);
    let (res_max, _) = poly_ls_residual(&cf.points, &ys, d, max_degree);
    Ok(LogCfFit {
        coefficients: coeffs2,
        quadratic_excess: (res2 - res_max).max(0.0),
    })
}

fn monomials_up_to(d: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; d]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for m in &out {
            for i in 0..d {
                let mut m2 = m.clone();
                m2[i] += 1;
                next.push(m2);
            }
        }
        out.extend(next);
        out.sort();
        out.dedup();
    }
    out.sort();
    out.dedup();
    out
}

fn poly_ls_residual(
    points: &[Vec<f64>],
    ys: &[Complex64],
    d: usize,
    degree: u32,
) -> (f64, Vec<(Vec<u32>, Complex64)>) {
    let basis = monomials_up_to(d, degree);
    let m = basis.len();
    let npts = points.len();
    let design: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            basis
                .iter()
                .map(|mono| {
                    mono.iter()
                        .zip(p)
                        .map(|(&e, &x)| x.powi(e as i32))
                        .product()
                })
                .collect()
        })
        .collect();
    // Column scaling, then complex normal equations.
    let scales: Vec<f64> = (0..m)
        .map(|j| {
            design
                .iter()
                .map(|r| r[j].abs())
                .fold(0.0f64, f64::max)
                .max(1e-300)
        })
        .collect();
    let mut ata = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    let mut aty = vec![Complex64::new(0.0, 0.0); m];
    for (row, &y) in design.iter().zip(ys) {
        for j in 0..m {
            let rj = row[j] / scales[j];
            aty[j] += rj * y;
            for k in 0..m {
                ata[j][k] += Complex64::new(rj * row[k] / scales[k], 0.0);
            }
        }
    }
    let theta = solve_complex(&mut ata, &mut aty);
    let mut ss = 0.0f64;
    for (row, &y) in design.iter().zip(ys) {
        let fit: Complex64 = (0..m)
            .map(|j| theta[j] * (row[j] / scales[j]))
            .sum();
        ss += (fit - y).norm_sqr();
    }
    let coeffs = basis
        .into_iter()
        .zip(theta.iter().zip(&scales).map(|(t, s)| t / s))
        .collect();
    ((ss / npts as f64).sqrt(), coeffs)
}

fn solve_complex(a: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Vec<Complex64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].norm().partial_cmp(&a[j][c].norm()).unwrap())
            .unwrap();
        a.swap(c, p);
        b.swap(c, p);
        if a[c][c].norm() < 1e-300 {
            continue;
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = a[i][c] / a[c][c];
            for j in c..n {
                let v = a[c][j];
                a[i][j] -= f * v;
            }
            let v = b[c];
            b[i] -= f * v;
        }
    }
    (0..n)
        .map(|i| {
            if a[i][i].norm() < 1e-300 {
                Complex64::new(0.0, 0.0)
            } else {
                b[i] / a[i][i]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id1() -> RationalMatrix {
        RationalMatrix::identity(1)
    }

    fn neg1() -> RationalMatrix {
        RationalMatrix::scalar_int(1, -1)
    }

    #[test]
    fn seeded_determinism_is_bit_exact() {
        let spec = RandomVectorSpec::gaussian_std(2, 99);
        let a = simulate_vectors(&[spec.clone()], 50, None).unwrap();
        let b = simulate_vectors(&[spec], 50, None).unwrap();
        for r in 0..50 {
            assert_eq!(a[0].row(r), b[0].row(r));
        }
    }

    #[test]
    fn linear_form_shapes_and_rotation() {
        let specs = vec![
            RandomVectorSpec::gaussian_std(1, 1),
            RandomVectorSpec::gaussian_std(1, 2),
        ];
        let (l1, l2) =
            simulate_linear_forms(&specs, &[id1(), id1()], &[id1(), neg1()], 1).unwrap();
        assert_eq!((l1.n(), l1.dim()), (1, 1));
        assert_eq!((l2.n(), l2.dim()), (1, 1));
        // L1 = X1+X2 and L2 = X1−X2 are uncorrelated for standard Gaussians:
        // the sample correlation sits inside the 3/√n CLT budget.
        let n = 20000;
        let (l1, l2) =
            simulate_linear_forms(&specs, &[id1(), id1()], &[id1(), neg1()], n).unwrap();
        let (mut cov, mut v1, mut v2) = (0.0, 0.0, 0.0);
        for r in 0..n {
            let (a, b) = (l1.row(r)[0], l2.row(r)[0]);
            cov += a * b;
            v1 += a * a;
            v2 += b * b;
        }
        let rho = cov / (v1 * v2).sqrt();
        assert!(rho.abs() <= 3.0 / (n as f64).sqrt(), "correlation {rho}");
    }

    #[test]
    fn single_form_residual_vanishes_at_zero_shift() {
        // m=1, b=c=1, y=0: the product identity degenerates to cf(x)·1.
        let spec = vec![RandomVectorSpec::laplace_std(1, 9)];
        let xs = vec![vec![0.5], vec![1.0]];
        let ys = vec![vec![0.0]];
        let r = skitovich_residual(&spec, &[id1()], &[id1()], &xs, &ys, 500).unwrap();
        assert!(r <= 2.0 / (500f64).sqrt(), "residual {r}");
    }

    #[test]
    fn degenerate_point_mass_has_unit_cf_and_zero_fit() {
        // zero-covariance Gaussian: every sample is exactly the mean 0.
        let spec = RandomVectorSpec {
            dim: 1,
            family: Family::Gaussian {
                mean: vec![0.0],
                cov: vec![vec![0.0]],
            },
            seed: 3,
        };
        let samples = simulate_vectors(&[spec], 200, None).unwrap();
        assert!((0..200).all(|r| samples[0].row(r) == [0.0]));
        let ts: Vec<Vec<f64>> = (0..5).map(|i| vec![-1.0 + 0.5 * i as f64]).collect();
        let cf = empirical_cf(&samples[0], &ts).unwrap();
        assert!(cf.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        let fit = marcinkiewicz_fit(&cf, 6).unwrap();
        assert_eq!(fit.quadratic_excess, 0.0);
        assert!(fit.coefficients.iter().all(|(_, c)| c.norm() < 1e-12));
    }

    #[test]
    fn gaussian_log_cf_coefficients_recovered() {
        // N(μ=1, σ²=4): −log cf = −it + 2t².
        let spec = RandomVectorSpec {
            dim: 1,
            family: Family::Gaussian {
                mean: vec![1.0],
                cov: vec![vec![4.0]],
            },
            seed: 13,
        };
        let n = 200000;
        let samples = simulate_vectors(&[spec], n, None).unwrap();
        // keep |cf| = e^{−2t²} above the 0.1 floor: need |t| ≤ 1.07
        let ts: Vec<Vec<f64>> = (0..9).map(|i| vec![-0.8 + 0.2 * i as f64]).collect();
        let cf = empirical_cf(&samples[0], &ts).unwrap();
        let fit = marcinkiewicz_fit(&cf, 6).unwrap();
        let tol = 5.0 / (n as f64).sqrt() * 4.0;
        for (mono, c) in &fit.coefficients {
            match mono.as_slice() {
                [0] => assert!(c.norm() <= tol, "constant {c}"),
                [1] => assert!((c + Complex64::new(0.0, 1.0)).norm() <= tol, "linear {c}"),
                [2] => assert!((c - Complex64::new(2.0, 0.0)).norm() <= tol, "quadratic {c}"),
                _ => unreachable!("degree-2 basis"),
            }
        }
        assert!(fit.quadratic_excess <= 5.0 / (n as f64).sqrt());
    }

    #[test]
    fn empirical_cf_known_values() {
        let n = 40000;
        let tol = 3.0 / (n as f64).sqrt();
        let samples = simulate_vectors(&[RandomVectorSpec::gaussian_std(1, 7)], n, None).unwrap();
        let est = empirical_cf(&samples[0], &[vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(est.values[0], Complex64::new(1.0, 0.0));
        assert!((est.values[1].re - (-0.5f64).exp()).abs() <= tol);
        // uniform(−1,1): cf(t) = sin t / t
        let samples =
            simulate_vectors(&[RandomVectorSpec::uniform_symmetric(1, 1.0, 8)], n, None).unwrap();
        let est = empirical_cf(&samples[0], &[vec![1.0]]).unwrap();
        assert!((est.values[0].re - 1.0f64.sin()).abs() <= tol);
        est.validate().unwrap();
    }

    #[test]
    fn skitovich_residual_gaussian_vs_uniform() {
        let pts = |k: usize| -> Vec<Vec<f64>> {
            (0..=k).map(|i| vec![-1.0 + 2.0 * i as f64 / k as f64]).collect()
        };
        let xs = pts(4);
        let n = 20000;
        let bs = [id1(), id1()];
        let cs = [id1(), neg1()];
        let gauss = vec![
            RandomVectorSpec::gaussian_std(1, 11),
            RandomVectorSpec::gaussian_std(1, 12),
        ];
        let r = skitovich_residual(&gauss, &bs, &cs, &xs, &xs, n).unwrap();
        assert!(r <= 5.0 / (n as f64).sqrt(), "gaussian residual {r}");
        let unif = vec![
            RandomVectorSpec::uniform_symmetric(1, 1.0, 11),
            RandomVectorSpec::uniform_symmetric(1, 1.0, 12),
        ];
        let r = skitovich_residual(&unif, &bs, &cs, &xs, &xs, n).unwrap();
        assert!(r >= 0.01, "uniform residual {r}");
    }

    #[test]
    fn independence_test_detects_dependence() {
        let specs = vec![
            RandomVectorSpec::gaussian_std(1, 21),
            RandomVectorSpec::gaussian_std(1, 22),
        ];
        let n = 600;
        let (l1, l2) = simulate_linear_forms(&specs, &[id1(), id1()], &[id1(), neg1()], n).unwrap();
        let rep = independence_test(&l1, &l2).unwrap();
        assert!(rep.p_value > 0.01, "independent case p={}", rep.p_value);
        // maximal dependence: L2 = L1
        let rep = independence_test(&l1, &l1).unwrap();
        assert!(rep.p_value <= 0.005);
        // shifted dependence
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|r| vec![l2.row(r)[0] + 0.5 * l1.row(r)[0]])
            .collect();
        let mixed = SampleMatrix::from_rows(rows, "mixed".into()).unwrap();
        let rep = independence_test(&l1, &mixed).unwrap();
        assert!(rep.p_value <= 0.005, "power case p={}", rep.p_value);
    }

    #[test]
    fn independence_test_small_sample_rejected() {
        let m = SampleMatrix::from_rows(vec![vec![0.0]; 10], "x".into()).unwrap();
        assert!(matches!(
            independence_test(&m, &m),
            Err(Error::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn marcinkiewicz_gaussian_vs_laplace() {
        let n = 40000;
        let ts: Vec<Vec<f64>> = (0..9).map(|i| vec![-1.0 + 0.25 * i as f64]).collect();
        let tol = 5.0 / (n as f64).sqrt();
        let g = simulate_vectors(&[RandomVectorSpec::gaussian_std(1, 31)], n, None).unwrap();
        let cf = empirical_cf(&g[0], &ts).unwrap();
        let fit = marcinkiewicz_fit(&cf, 6).unwrap();
        assert!(fit.quadratic_excess <= tol, "excess {}", fit.quadratic_excess);
        let l = simulate_vectors(&[RandomVectorSpec::laplace_std(1, 32)], n, None).unwrap();
        let cf = empirical_cf(&l[0], &ts).unwrap();
        let fit = marcinkiewicz_fit(&cf, 6).unwrap();
        assert!(fit.quadratic_excess >= 0.01, "excess {}", fit.quadratic_excess);
    }

    #[test]
    fn csv_roundtrip() {
        let csv = "a,b\n1.0,2.0\n3.5,-4.25\n";
        let m = SampleMatrix::from_csv(csv.as_bytes()).unwrap();
        assert_eq!((m.n(), m.dim()), (2, 2));
        assert_eq!(m.row(1), &[3.5, -4.25]);
        assert!(SampleMatrix::from_csv("a\nnot_a_number\n".as_bytes()).is_err());
    }

    #[test]
    fn psd_validation() {
        let bad = RandomVectorSpec {
            dim: 2,
            family: Family::Gaussian {
                mean: vec![0.0; 2],
                cov: vec![vec![1.0, 2.0], vec![2.0, 1.0]],
            },
            seed: 0,
        };
        assert!(matches!(
            simulate_vectors(&[bad], 10, None),
            Err(Error::InvalidSpec(_))
        ));
    }
}
