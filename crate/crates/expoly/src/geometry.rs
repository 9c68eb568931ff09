//! Constructive sphere geometry: writing any vector of the ball `B_d(2δ)` as
//! a difference of two points on the sphere `S_d(δ)`, generator sets whose
//! integer combinations are dense, and a numeric fill-ratio diagnostic for
//! that density.
//!
//! This is the one place where exactness is abandoned: dense subgroups need
//! irrational coordinates, so everything here is floating point and feeds
//! only diagnostics, never the exact checkers.

use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

const SPHERE_REL_TOL: f64 = 1e-12;

/// Point on the sphere of radius `radius`, validated to 1e−12 relative.
#[derive(Clone, Debug)]
pub struct SpherePoint {
    pub coords: Vec<f64>,
    pub radius: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl SpherePoint {
    pub fn new(coords: Vec<f64>, radius: f64) -> Result<Self> {
        let n = norm(&coords);
        if (n - radius).abs() > SPHERE_REL_TOL * radius {
            return Err(Error::OutOfRange {
                what: "sphere point norm".into(),
                value: n,
                limit: radius,
            });
        }
        Ok(SpherePoint { coords, radius })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Writes `x ∈ B_d(2δ)` as `Q − P` with `P, Q ∈ S_d(δ)`: the two legs of an
/// isoceles triangle with base `x`, erected in a plane through the origin
/// containing `x`. Requires `d > 1`.
pub fn sphere_difference_decompose(x: &[f64], delta: f64) -> Result<(SpherePoint, SpherePoint)> {
    let d = x.len();
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 1, got: d });
    }
    assert!(delta > 0.0, "radius must be positive");
    let nx = norm(x);
    if nx > 2.0 * delta * (1.0 + 1e-12) {
        return Err(Error::OutOfRange {
            what: "‖x‖".into(),
            value: nx,
            limit: 2.0 * delta,
        });
    }
    if nx == 0.0 {
        let mut p = vec![0.0; d];
        p[0] = delta;
        let point = SpherePoint::new(p, delta)?;
        return Ok((point.clone(), point));
    }
    let u: Vec<f64> = x.iter().map(|c| c / nx).collect();
    // Unit vector orthogonal to u: Gram-Schmidt against the axis vector
    // least aligned with u.
    let k = (0..d)
        .min_by(|&a, &b| u[a].abs().partial_cmp(&u[b].abs()).unwrap())
        .unwrap();
    let mut v: Vec<f64> = (0..d).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
    for i in 0..d {
        v[i] -= u[k] * u[i];
    }
    let nv = norm(&v);
    for c in &mut v {
        *c /= nv;
    }
    // Apex height of the isoceles triangle with legs δ over base x.
    let t = (delta * delta - nx * nx / 4.0).max(0.0).sqrt();
    let p: Vec<f64> = (0..d).map(|i| -x[i] / 2.0 + t * v[i]).collect();
    let q: Vec<f64> = (0..d).map(|i| x[i] / 2.0 + t * v[i]).collect();
    Ok((SpherePoint::new(p, delta)?, SpherePoint::new(q, delta)?))
}

const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131,
];

/// Sphere points whose integer combinations are dense in ℝ^d.
///
/// Builds `t` small vectors inside `B_d(2δ)` — a scaled lattice basis plus
/// irrational directions with fractional parts of square roots of distinct
/// primes, so their coordinates are rationally independent of the basis —
/// and lifts each to a difference `h_{2i} − h_{2i−1}` of sphere points.
/// Returns the `2t` points. Requires `d > 1` and `t ≥ d`.
pub fn kronecker_generators(d: usize, delta: f64, t: usize) -> Result<Vec<SpherePoint>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 1, got: d });
    }
    if t < d {
        return Err(Error::TooFewGenerators {
            required: d,
            got: t,
        });
    }
    let step = delta / 25.0;
    let mut small: Vec<Vec<f64>> = Vec::with_capacity(t);
    for i in 0..d {
        let mut y = vec![0.0; d];
        y[i] = step;
        small.push(y);
    }
    for j in 0..t - d {
        let y: Vec<f64> = (0..d)
            .map(|k| {
                let p = PRIMES[(j * d + k) % PRIMES.len()];
                step * (p as f64).sqrt().fract()
            })
            .collect();
        small.push(y);
    }
    let mut out = Vec::with_capacity(2 * t);
    for y in &small {
        let (p, q) = sphere_difference_decompose(y, delta)?;
        out.push(p);
        out.push(q);
    }
    Ok(out)
}

/// Fraction of an ε-grid of `[−w, w]^d` that lies within ε of some integer
/// combination `Σ n_i h_i` with `|n_i| ≤ coeff_bound`.
///
/// Combinations are enumerated by breadth-first closure over ±h_i steps with
/// per-generator budgets, deduplicated on a fine grid and clipped to a box
/// slightly larger than the target. The result is a lower bound on the true
/// coverage and is monotone nondecreasing in `coeff_bound`.
pub fn density_diagnostic(
    points: &[Vec<f64>],
    box_half_width: f64,
    eps: f64,
    coeff_bound: u32,
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyInput("density_diagnostic needs points".into()));
    }
    let d = points[0].len();
    assert!(points.iter().all(|p| p.len() == d), "mixed dimensions");
    assert!(eps > 0.0 && box_half_width > 0.0);
    let max_norm = points.iter().map(|p| norm(p)).fold(0.0f64, f64::max);
    let clip = box_half_width + max_norm + 2.0 * eps;
    let cell = eps / 2.0;
    let key = |p: &[f64]| -> Vec<i64> { p.iter().map(|&c| (c / cell).round() as i64).collect() };

    let mut visited: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut reached: Vec<Vec<f64>> = Vec::new();
    let mut queue: VecDeque<(Vec<f64>, Vec<i32>)> = VecDeque::new();
    let origin = vec![0.0; d];
    visited.insert(key(&origin), ());
    reached.push(origin.clone());
    queue.push_back((origin, vec![0; points.len()]));
    while let Some((p, coeffs)) = queue.pop_front() {
        for (i, h) in points.iter().enumerate() {
            for sign in [1i32, -1] {
                let c = coeffs[i] + sign;
                if c.unsigned_abs() > coeff_bound {
                    continue;
                }
                let q: Vec<f64> = p
                    .iter()
                    .zip(h)
                    .map(|(a, b)| a + sign as f64 * b)
                    .collect();
                if q.iter().any(|&c| c.abs() > clip) {
                    continue;
                }
                let k = key(&q);
                if visited.contains_key(&k) {
                    continue;
                }
                visited.insert(k, ());
                reached.push(q.clone());
                let mut nc = coeffs.clone();
                nc[i] = c;
                queue.push_back((q, nc));
            }
        }
    }

    // Spatial hash of reached points at resolution ε for the coverage query.
    let qcell = eps;
    let qkey = |p: &[f64]| -> Vec<i64> { p.iter().map(|&c| (c / qcell).floor() as i64).collect() };
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (idx, p) in reached.iter().enumerate() {
        buckets.entry(qkey(p)).or_default().push(idx);
    }
    let steps_per_axis = (2.0 * box_half_width / eps).floor() as i64 + 1;
    let mut covered = 0usize;
    let mut total = 0usize;
    let mut grid_point = vec![0i64; d];
    let mut neighbor = vec![0i64; d];
    loop {
        let g: Vec<f64> = grid_point
            .iter()
            .map(|&i| -box_half_width + i as f64 * eps)
            .collect();
        total += 1;
        let center = qkey(&g);
        // Scan the 3^d neighborhood of the query cell.
        'search: {
            let mut offsets = vec![-1i64; d];
            loop {
                for (i, o) in offsets.iter().enumerate() {
                    neighbor[i] = center[i] + o;
                }
                if let Some(idxs) = buckets.get(&neighbor) {
                    for &idx in idxs {
                        let dist2: f64 = reached[idx]
                            .iter()
                            .zip(&g)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        if dist2 <= eps * eps {
                            covered += 1;
                            break 'search;
                        }
                    }
                }
                let mut carry = 0;
                while carry < d {
                    offsets[carry] += 1;
                    if offsets[carry] <= 1 {
                        break;
                    }
                    offsets[carry] = -1;
                    carry += 1;
                }
                if carry == d {
                    break;
                }
            }
        }
        let mut carry = 0;
        while carry < d {
            grid_point[carry] += 1;
            if grid_point[carry] < steps_per_axis {
                break;
            }
            grid_point[carry] = 0;
            carry += 1;
        }
        if carry == d {
            break;
        }
    }
    Ok(covered as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_extreme_and_zero() {
        // ‖x‖ = 2δ: P = −x/2, Q = x/2.
        let (p, q) = sphere_difference_decompose(&[2.0, 0.0], 1.0).unwrap();
        assert!((p.coords[0] + 1.0).abs() < 1e-12 && p.coords[1].abs() < 1e-12);
        assert!((q.coords[0] - 1.0).abs() < 1e-12 && q.coords[1].abs() < 1e-12);
        // x = 0: any common point.
        let (p, q) = sphere_difference_decompose(&[0.0, 0.0], 2.5).unwrap();
        assert_eq!(p.coords, q.coords);
    }

    #[test]
    fn decompose_unit_example() {
        let (p, q) = sphere_difference_decompose(&[1.0, 0.0], 1.0).unwrap();
        let s3 = (3.0f64).sqrt() / 2.0;
        assert!((p.coords[0] + 0.5).abs() < 1e-12);
        assert!((p.coords[1].abs() - s3).abs() < 1e-12);
        for i in 0..2 {
            assert!((q.coords[i] - p.coords[i] - [1.0, 0.0][i]).abs() < 1e-10);
        }
    }

    #[test]
    fn decompose_rejects_d1_and_outside() {
        assert!(matches!(
            sphere_difference_decompose(&[1.0], 1.0),
            Err(Error::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            sphere_difference_decompose(&[3.0, 0.0], 1.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn decompose_random_residuals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let d = rng.gen_range(2..=4);
            let delta = rng.gen_range(0.1..5.0);
            let dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = norm(&dir);
            if n < 1e-6 {
                continue;
            }
            let scale = rng.gen_range(0.0..2.0 * delta) / n;
            let x: Vec<f64> = dir.iter().map(|c| c * scale).collect();
            let (p, q) = sphere_difference_decompose(&x, delta).unwrap();
            for i in 0..d {
                assert!((q.coords[i] - p.coords[i] - x[i]).abs() <= 1e-10 * delta);
            }
        }
    }

    #[test]
    fn kronecker_generators_shape() {
        let pts = kronecker_generators(2, 1.0, 3).unwrap();
        assert_eq!(pts.len(), 6);
        for p in &pts {
            assert!((norm(&p.coords) - 1.0).abs() <= 1e-12);
        }
        assert!(matches!(
            kronecker_generators(1, 1.0, 3),
            Err(Error::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            kronecker_generators(2, 1.0, 1),
            Err(Error::TooFewGenerators { .. })
        ));
    }

    #[test]
    fn density_single_point_is_sparse() {
        let fill = density_diagnostic(&[vec![0.3, 0.0]], 1.0, 0.05, 20).unwrap();
        assert!(fill < 1.0);
        assert!(fill > 0.0);
    }

    #[test]
    fn density_coarse_lattice_plateaus() {
        let pts = vec![vec![0.5, 0.0], vec![0.0, 0.5]];
        let f1 = density_diagnostic(&pts, 1.0, 0.05, 20).unwrap();
        let f2 = density_diagnostic(&pts, 1.0, 0.05, 50).unwrap();
        assert!(f2 <= 0.5, "coarse lattice fill {f2}");
        assert!(f2 >= f1);
    }
}
