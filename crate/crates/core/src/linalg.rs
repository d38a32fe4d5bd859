//! Dense eigendecomposition helpers for certified-unitary and hermitian
//! matrices.
//!
//! Unitary matrices are normal, so their complex Schur form is diagonal up
//! to roundoff and the Schur basis is an orthonormal eigenbasis. Numerical
//! eigenvalues drift off the circle at machine-epsilon scale; they are
//! radially projected back before reporting.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Max-entry norm.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-entry norm of `M† M − I`.
pub fn unitarity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let d = m.adjoint() * m - DMatrix::<C64>::identity(n, n);
    max_abs(&d)
}

/// Eigendecomposition of a unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    /// Eigenvalues, radially projected onto the unit circle.
    pub values: Vec<C64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: DMatrix<C64>,
    /// Max over columns of ‖M v − λ v‖₂.
    pub residual: f64,
}

fn schur_eigen(m: &DMatrix<C64>) -> Result<(Vec<C64>, DMatrix<C64>)> {
    // bounded iteration count: exactly structured inputs can stall the QR
    // sweep, and the caller has a similarity fallback for that case
    let max_iter = 100 * m.nrows().max(16);
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, max_iter)
        .ok_or(Error::EigenFailed)?;
    let (q, t) = schur.unpack();
    let values = (0..m.nrows()).map(|i| t[(i, i)]).collect();
    Ok((values, q))
}

/// Diagonalize a matrix certified unitary to `tol`.
///
/// Exactly structured inputs (permutations, cyclic shifts) can stall the
/// plain QR iteration; a fixed random unitary similarity is applied as a
/// fallback before giving up.
pub fn unitary_eigen(m: &DMatrix<C64>, tol: f64) -> Result<UnitaryEigen> {
    let defect = unitarity_defect(m);
    if defect > tol {
        return Err(Error::NotUnitary { defect, tol });
    }
    let n = m.nrows();
    let (values, vectors) = match schur_eigen(m) {
        Ok(pair) => pair,
        Err(_) => {
            let g = random_unitary(n, 0x5ca7_7e2e);
            let rotated = g.adjoint() * m * &g;
            let (vals, vecs) = schur_eigen(&rotated)?;
            (vals, g * vecs)
        }
    };
    let values: Vec<C64> = values
        .into_iter()
        .map(|z| if z.norm() == 0.0 { z } else { z / z.norm() })
        .collect();
    let mut residual: f64 = 0.0;
    for (i, lambda) in values.iter().enumerate() {
        let v = vectors.column(i);
        let r = m * v - v * *lambda;
        residual = residual.max(r.norm());
    }
    Ok(UnitaryEigen {
        values,
        vectors,
        residual,
    })
}

/// Eigendecomposition of a hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

pub fn hermitian_eigen(m: &DMatrix<C64>) -> HermitianEigen {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    HermitianEigen { values, vectors }
}

/// Greedy matching distance between two eigenvalue multisets: max over the
/// pairing of nearest remaining partners. Zero-cost exact for the
/// well-separated spectra it is used on.
pub fn spectral_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra of different sizes");
    let mut remaining: Vec<C64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for lambda in a {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, mu)| (i, (lambda - mu).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty");
        worst = worst.max(dist);
        remaining.swap_remove(idx);
    }
    worst
}

/// Deterministic pseudo-random unitary (Gram–Schmidt on a seeded gaussian
/// matrix); used for similarity fallbacks and in tests.
pub fn random_unitary(n: usize, seed: u64) -> DMatrix<C64> {
    let mut stream = crate::rng::SplitMix64::new(seed);
    let a = DMatrix::from_fn(n, n, |_, _| {
        let (re, im) = stream.next_gaussian_pair();
        C64::new(re, im)
    });
    let mut q = a;
    for j in 0..n {
        for i in 0..j {
            let proj: C64 = q
                .column(i)
                .iter()
                .zip(q.column(j).iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let col_i = q.column(i).clone_owned();
            let mut col_j = q.column_mut(j);
            col_j -= col_i * proj;
        }
        let norm = q.column(j).norm();
        q.column_mut(j).scale_mut(1.0 / norm);
    }
    q
}
