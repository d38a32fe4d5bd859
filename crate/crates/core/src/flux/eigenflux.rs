//! Per-eigenvector flux: every eigenvector of a finite unitary carries zero
//! flux, which is what forces a nonvanishing total flux into the continuous
//! subspace on the infinite strip.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::flux::HalfSpaceProjection;
use crate::operator::DenseUnitary;
use crate::C64;

const RESIDUAL_TOL: f64 = 1e-8;

/// `U† Q U − Q` on the basis of a dense truncation.
pub fn dense_flux_matrix(dense: &DenseUnitary, cut: i64) -> DMatrix<C64> {
    let q = HalfSpaceProjection::new(cut).dense(&dense.basis);
    dense.matrix.adjoint() * &q * &dense.matrix - &q
}

/// max_i |⟨φ_i, Φ φ_i⟩| over a certified eigenbasis {φ_i} of the unitary.
pub fn eigenvector_flux(dense: &DenseUnitary, flux: &DMatrix<C64>) -> Result<f64> {
    let eig = dense.eigen()?;
    if eig.residual > RESIDUAL_TOL {
        return Err(Error::EigenResidual {
            residual: eig.residual,
            tol: RESIDUAL_TOL,
        });
    }
    let mut worst: f64 = 0.0;
    for i in 0..dense.dim() {
        let v = eig.vectors.column(i);
        let expectation: C64 = (v.adjoint() * flux * v)[(0, 0)];
        worst = worst.max(expectation.norm());
    }
    Ok(worst)
}
