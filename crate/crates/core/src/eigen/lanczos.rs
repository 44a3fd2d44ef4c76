//! Restarted Lanczos iteration for the lowest eigenpairs of a large sparse
//! Hermitian operator.
//!
//! Every new Krylov vector is orthogonalized against the whole basis twice
//! (full reorthogonalization), and the projected matrix is formed explicitly
//! from the stored products `H v`, which keeps the Rayleigh–Ritz step valid
//! after thick restarts. When the Krylov space closes (an invariant subspace
//! or a missing member of a degenerate multiplet) a fresh seeded random
//! direction is injected.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::DenseEigen;
use super::EigenConfig;
use crate::error::{Error, Result};
use crate::hamiltonian::HermitianOperator;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub(crate) struct KrylovPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Orthogonalizes `w` against `basis` (two classical Gram–Schmidt passes)
/// and returns the remaining norm relative to the initial one.
fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) -> f64 {
    let before = norm(w);
    if before == 0.0 {
        return 0.0;
    }
    for _ in 0..2 {
        let coeffs: Vec<Complex64> = basis.iter().map(|v| dot(v, w)).collect();
        for (v, c) in basis.iter().zip(coeffs) {
            for (x, y) in w.iter_mut().zip(v) {
                *x -= c * y;
            }
        }
    }
    norm(w) / before
}

/// Combines `vectors` with the coefficients in column `col` of the
/// column-major `m x m` matrix `s`.
fn combine(vectors: &[Vec<Complex64>], s: &[Complex64], m: usize, col: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; vectors[0].len()];
    for (j, v) in vectors.iter().enumerate() {
        let c = s[col * m + j];
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

pub(crate) fn lowest_pairs(op: &HermitianOperator, k: usize, config: &EigenConfig) -> Result<KrylovPairs> {
    let dim = op.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let max_basis = config
        .krylov_dimension
        .unwrap_or_else(|| (2 * k + 30).max(60))
        .max(k + 2)
        .min(dim);
    let keep = (k + 10).min(max_basis.saturating_sub(4)).max(k).min(max_basis);

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(max_basis);
    let mut images: Vec<Vec<Complex64>> = Vec::with_capacity(max_basis);
    let mut next = random_vector(dim, &mut rng);
    let mut worst = f64::INFINITY;
    let mut converged = 0;

    for _restart in 0..=config.max_restarts {
        while basis.len() < max_basis {
            let mut w = std::mem::take(&mut next);
            let mut remaining = orthogonalize(&mut w, &basis);
            let mut attempts = 0;
            while remaining < 1e-8 && attempts < 5 {
                w = random_vector(dim, &mut rng);
                remaining = orthogonalize(&mut w, &basis);
                attempts += 1;
            }
            if remaining < 1e-8 {
                break;
            }
            let n = norm(&w);
            w.iter_mut().for_each(|x| *x /= n);
            let hw = op.apply(&w)?;
            next = hw.clone();
            basis.push(w);
            images.push(hw);
        }

        let m = basis.len();
        let mut projected = vec![ZERO; m * m];
        for j in 0..m {
            for i in j..m {
                let h = 0.5 * (dot(&basis[i], &images[j]) + dot(&images[i], &basis[j]));
                projected[j * m + i] = h;
                projected[i * m + j] = h.conj();
            }
        }
        let ritz = DenseEigen::new(projected, m, config.seed)?;
        let take = keep.min(m);
        let coeffs: Vec<Complex64> = ritz.vectors(0..take).into_iter().flatten().collect();
        let theta: Vec<f64> = ritz.values()[..take].to_vec();

        let mut ritz_vectors = Vec::with_capacity(take);
        let mut ritz_images = Vec::with_capacity(take);
        let mut residuals = Vec::with_capacity(take);
        for (col, &value) in theta.iter().enumerate() {
            let x = combine(&basis, &coeffs, m, col);
            let hx = combine(&images, &coeffs, m, col);
            let r: Vec<Complex64> = hx.iter().zip(&x).map(|(a, b)| a - b * value).collect();
            residuals.push(r);
            ritz_vectors.push(x);
            ritz_images.push(hx);
        }
        let ok = |i: usize| norm(&residuals[i]) <= config.tol * theta[i].abs().max(1.0);
        converged = (0..k.min(take)).take_while(|&i| ok(i)).count();
        worst = (0..k.min(take)).map(|i| norm(&residuals[i])).fold(0.0, f64::max);
        if converged == k || m == dim {
            return Ok(KrylovPairs {
                values: theta[..k].to_vec(),
                vectors: ritz_vectors.into_iter().take(k).collect(),
            });
        }

        // Thick restart: keep the lowest Ritz pairs, continue from the
        // residual of the first unconverged one.
        next = residuals.swap_remove(converged);
        basis = ritz_vectors;
        images = ritz_images;
    }
    Err(Error::NoConvergence {
        restarts: config.max_restarts,
        converged,
        requested: k,
        worst_residual: worst,
    })
}
