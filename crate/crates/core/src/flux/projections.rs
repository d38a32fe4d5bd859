//! Relative index of a pair of projections.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::LatticeSite;
use crate::linalg::hermitian_eigen;
use crate::C64;

/// Multiplication by χ(k ≥ cut): idempotent and self-adjoint by construction.
#[derive(Debug, Clone, Copy)]
pub struct HalfSpaceProjection {
    pub cut: i64,
}

impl HalfSpaceProjection {
    pub fn new(cut: i64) -> Self {
        Self { cut }
    }

    pub fn contains(&self, site: LatticeSite) -> bool {
        site.k >= self.cut
    }

    /// Diagonal matrix over an ordered site basis.
    pub fn dense(&self, basis: &[LatticeSite]) -> DMatrix<C64> {
        DMatrix::from_fn(basis.len(), basis.len(), |r, c| {
            if r == c && self.contains(basis[r]) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

/// Index together with the diagnostics used to extract it.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub index: i64,
    /// Eigenvalues of P − Q, ascending.
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    /// Set when some eigenvalue sits near the ±1 counting threshold.
    pub conditioning_warning: bool,
    pub tolerance_used: f64,
}

const PROJECTION_TOL: f64 = 1e-10;
const KERNEL_TOL: f64 = 1e-6;

fn check_projection(m: &DMatrix<C64>, name: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotAProjection(format!("{name} is not square")));
    }
    let herm = crate::linalg::max_abs(&(m - m.adjoint()));
    if herm > PROJECTION_TOL {
        return Err(Error::NotAProjection(format!(
            "{name} is not hermitian (defect {herm:.3e})"
        )));
    }
    let idem = crate::linalg::max_abs(&(m * m - m));
    if idem > PROJECTION_TOL {
        return Err(Error::NotAProjection(format!(
            "{name} is not idempotent (defect {idem:.3e})"
        )));
    }
    Ok(())
}

/// dim ker(P − Q − 1) − dim ker(P − Q + 1), counting eigenvalues of P − Q
/// within 1e-6 of ±1.
pub fn relative_index(p: &DMatrix<C64>, q: &DMatrix<C64>) -> Result<i64> {
    Ok(relative_index_report(p, q)?.index)
}

pub fn relative_index_report(p: &DMatrix<C64>, q: &DMatrix<C64>) -> Result<IndexReport> {
    check_projection(p, "P")?;
    check_projection(q, "Q")?;
    if p.nrows() != q.nrows() {
        return Err(Error::NotAProjection(
            "P and Q act on different spaces".into(),
        ));
    }
    let diff = p - q;
    let trace = diff.diagonal().iter().map(|z| z.re).sum();
    let eig = hermitian_eigen(&diff);
    let plus = eig
        .values
        .iter()
        .filter(|&&x| (x - 1.0).abs() <= KERNEL_TOL)
        .count() as i64;
    let minus = eig
        .values
        .iter()
        .filter(|&&x| (x + 1.0).abs() <= KERNEL_TOL)
        .count() as i64;
    // eigenvalues close to (but not at) the counting threshold are suspect
    let conditioning_warning = eig.values.iter().any(|&x| {
        let d = (x.abs() - 1.0).abs();
        d > KERNEL_TOL && d <= 2e-3
    });
    Ok(IndexReport {
        index: plus - minus,
        eigenvalues: eig.values,
        trace,
        conditioning_warning,
        tolerance_used: KERNEL_TOL,
    })
}
