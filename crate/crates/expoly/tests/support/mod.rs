//! Shared test support: seeded random generators for exact values and
//! independent oracles (dense Gaussian-rational elimination, fraction-free
//! rank over the group algebra). The oracles deliberately avoid the library's
//! elimination code paths.

#![allow(dead_code)]

use expoly::exppoly::{ExpPolynomial, Frequency, Monomial, Polynomial};
use expoly::scalar::{rat, ExpCoeff, GaussianRational, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rat(r: &mut ChaCha8Rng) -> Rat {
    rat(r.gen_range(-3..=3), r.gen_range(1..=3))
}

pub fn rand_nonzero_rat(r: &mut ChaCha8Rng) -> Rat {
    loop {
        let v = rand_rat(r);
        if !num_traits::Zero::is_zero(&v) {
            return v;
        }
    }
}

pub fn rand_gauss(r: &mut ChaCha8Rng) -> GaussianRational {
    let re = rand_rat(r);
    let im = if r.gen_bool(0.3) {
        rand_rat(r)
    } else {
        Rat::from_integer(0.into())
    };
    GaussianRational::new(re, im)
}

pub fn rand_nonzero_gauss(r: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let g = rand_gauss(r);
        if !g.is_zero() {
            return g;
        }
    }
}

pub fn rand_expcoeff(r: &mut ChaCha8Rng, max_terms: usize) -> ExpCoeff {
    let mut acc = ExpCoeff::zero();
    for _ in 0..r.gen_range(0..=max_terms) {
        acc = &acc + &ExpCoeff::term(rand_gauss(r), rand_gauss(r));
    }
    acc
}

pub fn rand_monomial(r: &mut ChaCha8Rng, dim: usize, max_deg: u32) -> Monomial {
    let mut left = max_deg;
    let mut exps = vec![0u32; dim];
    for e in exps.iter_mut() {
        let take = r.gen_range(0..=left);
        *e = take;
        left -= take;
    }
    Monomial(exps)
}

pub fn rand_polynomial(r: &mut ChaCha8Rng, dim: usize, max_deg: u32, max_terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for _ in 0..r.gen_range(1..=max_terms) {
        p.add_term(
            rand_monomial(r, dim, max_deg),
            ExpCoeff::scalar(rand_gauss(r)),
        );
    }
    p
}

pub fn rand_nonzero_polynomial(
    r: &mut ChaCha8Rng,
    dim: usize,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    loop {
        let p = rand_polynomial(r, dim, max_deg, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_frequency(r: &mut ChaCha8Rng, dim: usize) -> Frequency {
    Frequency((0..dim).map(|_| rand_gauss(r)).collect())
}

/// Random canonical exponential polynomial; roughly half the draws are pure
/// polynomials (zero frequency only).
pub fn rand_exppoly(
    r: &mut ChaCha8Rng,
    dim: usize,
    max_modes: usize,
    max_deg: u32,
    max_terms: usize,
) -> ExpPolynomial {
    let mut raw = Vec::new();
    let modes = r.gen_range(0..=max_modes);
    for _ in 0..modes {
        let freq = if r.gen_bool(0.5) {
            Frequency::zero(dim)
        } else {
            rand_frequency(r, dim)
        };
        raw.push((freq, rand_polynomial(r, dim, max_deg, max_terms)));
    }
    ExpPolynomial::normal_form(dim, raw).expect("consistent dims")
}

pub fn rand_shift(r: &mut ChaCha8Rng, dim: usize) -> Vec<Rat> {
    (0..dim).map(|_| rand_rat(r)).collect()
}

pub fn rand_nonzero_shift(r: &mut ChaCha8Rng, dim: usize) -> Vec<Rat> {
    loop {
        let v = rand_shift(r, dim);
        if v.iter().any(|c| !num_traits::Zero::is_zero(c)) {
            return v;
        }
    }
}

/// Harmonic polynomial on ℝ² with exact complex coefficients:
/// `Σ a_j z^j + Σ b_j z̄^j` for `z = x + iy`.
pub fn harmonic(z_coeffs: &[GaussianRational], zbar_coeffs: &[GaussianRational]) -> ExpPolynomial {
    let d = 2;
    let i = GaussianRational::i();
    let mut z = Polynomial::var(d, 0);
    z.add_term(Monomial::var(d, 1), ExpCoeff::scalar(i.clone()));
    let mut zbar = Polynomial::var(d, 0);
    zbar.add_term(Monomial::var(d, 1), ExpCoeff::scalar(-&i));
    let mut acc = Polynomial::zero(d);
    for (j, a) in z_coeffs.iter().enumerate() {
        if !a.is_zero() {
            acc = &acc + &z.pow(j as u32).scale(&ExpCoeff::scalar(a.clone()));
        }
    }
    for (j, b) in zbar_coeffs.iter().enumerate() {
        if !b.is_zero() {
            acc = &acc + &zbar.pow(j as u32).scale(&ExpCoeff::scalar(b.clone()));
        }
    }
    ExpPolynomial::from_polynomial(acc)
}

/// `Re(z^k)` and `Im(z^k)` as exact harmonic polynomials.
pub fn re_z_pow(k: usize) -> ExpPolynomial {
    let half = GaussianRational::new(rat(1, 2), rat(0, 1));
    let mut zc = vec![GaussianRational::zero(); k + 1];
    zc[k] = half.clone();
    let mut bc = vec![GaussianRational::zero(); k + 1];
    bc[k] = half;
    harmonic(&zc, &bc)
}

pub fn im_z_pow(k: usize) -> ExpPolynomial {
    // (z^k − z̄^k)/(2i) = −(i/2)z^k + (i/2)z̄^k
    let half_i = GaussianRational::new(rat(0, 1), rat(1, 2));
    let mut zc = vec![GaussianRational::zero(); k + 1];
    zc[k] = -&half_i;
    let mut bc = vec![GaussianRational::zero(); k + 1];
    bc[k] = half_i;
    harmonic(&zc, &bc)
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Plain Gaussian elimination rank over ℚ(i), self-contained.
pub fn gauss_rank_oracle(mut rows: Vec<Vec<GaussianRational>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv();
        for j in c..cols {
            rows[rank][j] = &rows[rank][j] * &inv;
        }
        for i in 0..rows.len() {
            if i == rank || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..cols {
                let s = &rows[rank][j] * &f;
                rows[i][j] = &rows[i][j] - &s;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Fraction-free (Bareiss) rank over the group algebra: works entirely in
/// the ring, dividing only by previous pivots (exact by construction).
pub fn bareiss_rank_oracle(mut m: Vec<Vec<ExpCoeff>>) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut prev = ExpCoeff::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in (rank + 1)..rows {
            for j in (c + 1)..cols {
                let num = &(&m[i][j] * &pivot) - &(&m[i][c] * &m[rank][j]);
                m[i][j] = num
                    .try_exact_div(&prev)
                    .expect("Bareiss division is exact");
            }
            m[i][c] = ExpCoeff::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Dense coefficient matrix of `F(x,y)` over the (x-basis) × (y-basis),
/// built directly from the modes. Entries must be plain Gaussian rationals
/// (panics otherwise); use `bivar_coeff_matrix_ring` for the general case.
pub fn bivar_coeff_matrix_rational(
    f: &expoly::bivar::BiExpPolynomial,
) -> Vec<Vec<GaussianRational>> {
    ring_matrix(f)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| {
                    if c.is_zero() {
                        GaussianRational::zero()
                    } else {
                        c.as_scalar().expect("rational coefficient").clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Same matrix with group-algebra entries.
pub fn ring_matrix(f: &expoly::bivar::BiExpPolynomial) -> Vec<Vec<ExpCoeff>> {
    use std::collections::BTreeMap;
    let d = f.block_dim();
    let mut entries: BTreeMap<(Frequency, Monomial), BTreeMap<(Frequency, Monomial), ExpCoeff>> =
        BTreeMap::new();
    let mut col_keys: std::collections::BTreeSet<(Frequency, Monomial)> =
        std::collections::BTreeSet::new();
    for (freq, p) in f.inner().modes() {
        let fx = Frequency(freq.0[..d].to_vec());
        let fy = Frequency(freq.0[d..].to_vec());
        for (m, c) in p.terms() {
            let mx = Monomial(m.0[..d].to_vec());
            let my = Monomial(m.0[d..].to_vec());
            col_keys.insert((fy.clone(), my.clone()));
            let slot = entries
                .entry((fx.clone(), mx))
                .or_default()
                .entry((fy.clone(), my))
                .or_insert_with(ExpCoeff::zero);
            *slot = &*slot + c;
        }
    }
    let cols: Vec<_> = col_keys.into_iter().collect();
    entries
        .into_values()
        .map(|row| {
            cols.iter()
                .map(|k| row.get(k).cloned().unwrap_or_else(ExpCoeff::zero))
                .collect()
        })
        .collect()
}
