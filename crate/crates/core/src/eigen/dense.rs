//! Dense complex Hermitian eigensolver.
//!
//! The matrix is reduced to a real symmetric tridiagonal `T = Q^H A Q` by
//! Householder reflections, all eigenvalues of `T` are found by the implicit
//! QL iteration with Wilkinson shifts, and eigenvectors are computed only for
//! the requested eigenvalues by inverse iteration on `T` followed by the back
//! transformation with `Q`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Maximum QL sweeps spent on one eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 60;

/// Inverse-iteration solves per eigenvector.
const INVERSE_ITERATIONS: usize = 4;

/// One Householder reflector `I - τ v v^H` acting on rows `offset..n`,
/// with `v[0] = 1`.
struct Reflector {
    offset: usize,
    tau: Complex64,
    v: Vec<Complex64>,
}

/// Tridiagonal reduction and spectrum of a Hermitian matrix.
pub struct DenseEigen {
    n: usize,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    reflectors: Vec<Reflector>,
    values: Vec<f64>,
    norm: f64,
    seed: u64,
}

impl DenseEigen {
    /// Factorizes the Hermitian matrix given column-major in `a`. Only the
    /// lower triangle is read.
    pub fn new(mut a: Vec<Complex64>, n: usize, seed: u64) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::Length {
                expected: n * n,
                found: a.len(),
            });
        }
        if n == 0 {
            return Err(Error::domain("dimension", "matrix must be non-empty"));
        }
        let norm = (0..n)
            .map(|j| (j..n).map(|i| a[j * n + i].norm()).sum::<f64>())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let (diag, offdiag, reflectors) = tridiagonalize(&mut a, n);
        drop(a);
        let values = ql_eigenvalues(&diag, &offdiag)?;
        Ok(Self {
            n,
            diag,
            offdiag,
            reflectors,
            values,
            norm,
            seed,
        })
    }

    /// All eigenvalues, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors of the eigenvalues `values()[range]`.
    pub fn vectors(&self, range: std::ops::Range<usize>) -> Vec<Vec<Complex64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let cluster_gap = 1e-3 * self.norm;
        let mut tri_vectors: Vec<Vec<f64>> = Vec::with_capacity(range.len());
        // Inverse iteration must orthogonalize within a cluster, including
        // members below `range.start` that are not returned.
        let mut start = range.start;
        while start > 0 && self.values[start] - self.values[start - 1] < cluster_gap {
            start -= 1;
        }
        let mut cluster_begin = 0;
        for idx in start..range.end {
            if idx > start && self.values[idx] - self.values[idx - 1] >= cluster_gap {
                cluster_begin = tri_vectors.len();
            }
            let z = self.inverse_iteration(self.values[idx], &tri_vectors[cluster_begin..], &mut rng);
            tri_vectors.push(z);
        }
        tri_vectors
            .split_off(range.start - start)
            .into_iter()
            .map(|z| self.back_transform(&z))
            .collect()
    }

    fn inverse_iteration(&self, lambda: f64, cluster: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Vec<f64> {
        let n = self.n;
        if n == 1 {
            return vec![1.0];
        }
        let lu = TridiagonalLu::factor(&self.diag, &self.offdiag, lambda, self.norm);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..INVERSE_ITERATIONS {
            orthogonalize_real(&mut x, cluster);
            normalize_real(&mut x);
            lu.solve(&mut x);
            orthogonalize_real(&mut x, cluster);
            normalize_real(&mut x);
        }
        x
    }

    fn back_transform(&self, z: &[f64]) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        for r in self.reflectors.iter().rev() {
            let tail = &mut v[r.offset..];
            let dot: Complex64 = r.v.iter().zip(tail.iter()).map(|(a, b)| a.conj() * b).sum();
            let scale = r.tau * dot;
            for (t, vi) in tail.iter_mut().zip(&r.v) {
                *t -= scale * vi;
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= norm);
        v
    }
}

/// Householder reduction of the lower triangle of `a` (column-major).
fn tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<Reflector>) {
    let mut diag = vec![0.0; n];
    let mut offdiag = vec![0.0; n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    let mut w = vec![ZERO; n];

    for i in 0..n.saturating_sub(1) {
        let m = n - i - 1;
        let col = i * n + i + 1;
        let alpha = a[col];
        let xnorm = a[col + 1..col + m].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();

        let tau;
        let beta;
        if xnorm == 0.0 && alpha.im == 0.0 {
            tau = ZERO;
            beta = alpha.re;
        } else {
            let mag = (alpha.norm_sqr() + xnorm * xnorm).sqrt();
            beta = if alpha.re >= 0.0 { -mag } else { mag };
            tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
            let scale = (alpha - beta).inv();
            for c in &mut a[col + 1..col + m] {
                *c *= scale;
            }
        }
        offdiag[i] = beta;
        diag[i] = a[i * n + i].re;

        let mut v = Vec::with_capacity(m);
        v.push(Complex64::new(1.0, 0.0));
        v.extend_from_slice(&a[col + 1..col + m]);

        if tau != ZERO {
            let off = i + 1;
            // w = τ A22 v, reading only the lower triangle of A22.
            let w = &mut w[..m];
            w.fill(ZERO);
            for jj in 0..m {
                let column = &a[(off + jj) * n + off + jj..(off + jj) * n + n];
                let vj = v[jj];
                w[jj] += column[0].re * vj;
                let mut acc = ZERO;
                for (rr, &arj) in column.iter().enumerate().skip(1) {
                    w[jj + rr] += arj * vj;
                    acc += arj.conj() * v[jj + rr];
                }
                w[jj] += acc;
            }
            for x in w.iter_mut() {
                *x *= tau;
            }
            let wv: Complex64 = w.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            let shift = -0.5 * tau * wv;
            for (x, vi) in w.iter_mut().zip(&v) {
                *x += shift * vi;
            }
            // A22 -= v w^H + w v^H on the lower triangle.
            for jj in 0..m {
                let (wj, vj) = (w[jj].conj(), v[jj].conj());
                let column = &mut a[(off + jj) * n + off + jj..(off + jj) * n + n];
                for (rr, c) in column.iter_mut().enumerate() {
                    *c -= v[jj + rr] * wj + w[jj + rr] * vj;
                }
            }
        }
        reflectors.push(Reflector {
            offset: i + 1,
            tau,
            v,
        });
    }
    diag[n - 1] = a[n * n - 1].re;
    (diag, offdiag, reflectors)
}

/// Eigenvalues of the symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. `offdiag[i]` couples rows `i` and `i + 1`.
pub(crate) fn ql_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.resize(n, 0.0);
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    restarts: iterations,
                    converged: l,
                    requested: n,
                    worst_residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// LU factorization with partial pivoting of `T - λ I`.
struct TridiagonalLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(diag: &[f64], offdiag: &[f64], lambda: f64, norm: f64) -> Self {
        let n = diag.len();
        let mut dl: Vec<f64> = offdiag[..n - 1].to_vec();
        let mut du: Vec<f64> = offdiag[..n - 1].to_vec();
        let mut dd: Vec<f64> = diag.iter().map(|x| x - lambda).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if dd[i].abs() >= dl[i].abs() {
                if dd[i] != 0.0 {
                    let fact = dl[i] / dd[i];
                    dl[i] = fact;
                    dd[i + 1] -= fact * du[i];
                } else {
                    dl[i] = 0.0;
                }
            } else {
                let fact = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = temp - fact * dd[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // Exactly singular pivots are expected at converged eigenvalues.
        let floor = f64::EPSILON * norm;
        for x in dd.iter_mut() {
            if x.abs() < floor {
                *x = if *x < 0.0 { -floor } else { floor };
            }
        }
        Self {
            lower: dl,
            diag: dd,
            upper: du,
            upper2: du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.lower[i] * b[i];
        }
        b[n - 1] /= self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
        // Guard against overflow before the caller normalizes.
        let max = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if max > 1e150 || !max.is_finite() {
            let scale = if max.is_finite() { max } else { f64::MAX };
            b.iter_mut().for_each(|x| *x /= scale);
        }
    }
}

fn orthogonalize_real(x: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for y in against {
            let d: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(y).for_each(|(a, b)| *a -= d * b);
        }
    }
}

fn normalize_real(x: &mut [f64]) {
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        x.iter_mut().for_each(|a| *a /= norm);
    } else {
        // Degenerate start: fall back to a unit vector.
        x.iter_mut().for_each(|a| *a = 0.0);
        x[0] = 1.0;
    }
}
