//! Lowest eigenpairs of a [`HermitianOperator`].
//!
//! Small operators are diagonalized densely; above
//! [`EigenConfig::dense_threshold`] a restarted Lanczos iteration is used.
//! Both paths report residuals `‖Hv - λv‖` measured on the original sparse
//! operator.

pub mod dense;
mod lanczos;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::HermitianOperator;

/// Solver knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenConfig {
    /// Largest dimension handled by the dense path.
    pub dense_threshold: usize,
    /// Residual bound: `‖Hv - λv‖ ≤ tol · max(1, |λ|)`.
    pub tol: f64,
    /// Eigenvalues closer than this are grouped as degenerate.
    pub degeneracy_tol: f64,
    pub max_restarts: usize,
    /// Krylov basis size before a restart; chosen from `k` when unset.
    pub krylov_dimension: Option<usize>,
    /// Seed of the random start and injection vectors.
    pub seed: u64,
}

/// Seed used when none is configured.
pub const DEFAULT_SEED: u64 = 0x005E_ED0F_2A7E;

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            dense_threshold: 4096,
            tol: 1e-10,
            degeneracy_tol: 1e-8,
            max_restarts: 300,
            krylov_dimension: None,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one per value.
    pub vectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
    /// Indices into `values`, grouped where neighbours differ by less than
    /// the degeneracy tolerance.
    pub degeneracy_groups: Vec<Vec<usize>>,
}

/// Ground level with every eigenvector spanning it.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub vectors: Vec<Vec<Complex64>>,
    pub degenerate: bool,
    /// `E_1 - E_0` counting multiplicity, so zero at a degeneracy; `None`
    /// for a one-dimensional space.
    pub gap: Option<f64>,
    pub residuals: Vec<f64>,
}

fn residual(op: &HermitianOperator, value: f64, v: &[Complex64]) -> Result<f64> {
    let hv = op.apply(v)?;
    Ok(hv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b * value).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

fn group_degenerate(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if v - values[*g.last().unwrap()] < tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn check_args(op: &HermitianOperator, k: usize, config: &EigenConfig) -> Result<()> {
    if k == 0 || k > op.dimension() {
        return Err(Error::domain(
            "k",
            format!("need 1..={} eigenpairs, got {k}", op.dimension()),
        ));
    }
    if !(config.tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {}", config.tol)));
    }
    Ok(())
}

/// The `k` lowest eigenpairs of `op`.
pub fn lowest_k(op: &HermitianOperator, k: usize, config: &EigenConfig) -> Result<EigenResult> {
    check_args(op, k, config)?;
    let (values, vectors) = if op.dimension() <= config.dense_threshold {
        let eig = dense::DenseEigen::new(op.to_dense(), op.dimension(), config.seed)?;
        (eig.values()[..k].to_vec(), eig.vectors(0..k))
    } else {
        let pairs = lanczos::lowest_pairs(op, k, config)?;
        (pairs.values, pairs.vectors)
    };
    finish(op, values, vectors, config)
}

fn finish(
    op: &HermitianOperator,
    values: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
    config: &EigenConfig,
) -> Result<EigenResult> {
    let residuals = values
        .iter()
        .zip(&vectors)
        .map(|(&l, v)| residual(op, l, v))
        .collect::<Result<Vec<_>>>()?;
    if let Some((i, &r)) = residuals
        .iter()
        .enumerate()
        .find(|&(i, &r)| r > config.tol * values[i].abs().max(1.0))
    {
        return Err(Error::NoConvergence {
            restarts: 0,
            converged: i,
            requested: values.len(),
            worst_residual: r,
        });
    }
    let degeneracy_groups = group_degenerate(&values, config.degeneracy_tol);
    Ok(EigenResult {
        values,
        vectors,
        residuals,
        degeneracy_groups,
    })
}

/// Ground energy and the full ground eigenspace.
pub fn ground_state(op: &HermitianOperator, config: &EigenConfig) -> Result<GroundState> {
    let dim = op.dimension();
    let result = if dim <= config.dense_threshold {
        check_args(op, 1, config)?;
        let eig = dense::DenseEigen::new(op.to_dense(), dim, config.seed)?;
        let values = eig.values();
        let multiplicity = values
            .iter()
            .take_while(|&&v| v - values[0] < config.degeneracy_tol)
            .count();
        let k = (multiplicity + 1).min(dim);
        let vectors = eig.vectors(0..multiplicity);
        let mut result = finish(op, values[..multiplicity].to_vec(), vectors, config)?;
        result.values = values[..k].to_vec();
        result
    } else {
        let mut k = 2.min(dim);
        loop {
            let r = lowest_k(op, k, config)?;
            let multiplicity = r.degeneracy_groups[0].len();
            if multiplicity < k || k == dim {
                break r;
            }
            k = (2 * k).min(dim);
        }
    };
    let multiplicity = result
        .values
        .iter()
        .take_while(|&&v| v - result.values[0] < config.degeneracy_tol)
        .count();
    Ok(GroundState {
        energy: result.values[0],
        gap: result.values.get(1).map(|e1| e1 - result.values[0]),
        degenerate: multiplicity > 1,
        vectors: result.vectors.into_iter().take(multiplicity).collect(),
        residuals: result.residuals.into_iter().take(multiplicity).collect(),
    })
}
