//! Invariant 4-dimensional plaquette blocks and their pure-phase spectra.
//!
//! With diagonal matrices the motion is clockwise on
//! span{|2j,2k⟩, |2j,2k-1⟩, |2j-1,2k-1⟩, |2j-1,2k⟩}; with off-diagonal
//! matrices anti-clockwise on span{|2j,2k⟩, |2j+1,2k⟩, |2j+1,2k+1⟩,
//! |2j,2k+1⟩}. Either way the block is a 4-cycle with phases and spectrum
//! e^α·{1, i, -1, -i}, e^{4α} the accumulated phase product.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSite, SField, ScatterMatrix};
use crate::C64;

/// Rotation sense of the plaquette.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    /// Clockwise; requires the four participating matrices diagonal.
    Right,
    /// Anti-clockwise; requires them off-diagonal.
    Left,
}

/// The 4×4 block in its stated basis, with its exact spectrum.
#[derive(Debug, Clone)]
pub struct PlaquetteBlock {
    pub basis: [LatticeSite; 4],
    pub matrix: Matrix4<C64>,
    /// e^α·{1, i, −1, −i} with e^{4α} the entry product.
    pub eigenvalues: [C64; 4],
    /// The accumulated phase e^{4α}.
    pub phase_product: C64,
}

const CHIRALITY_TOL: f64 = 1e-12;

fn require_diagonal(field: &SField, j: i64, kcell: i64) -> Result<ScatterMatrix> {
    let s = field.scatter_at(j, kcell);
    if !s.is_diagonal(CHIRALITY_TOL) {
        return Err(Error::PlaquettePrecondition {
            j,
            k2: 2 * kcell,
            expected: "diagonal",
        });
    }
    Ok(s)
}

fn require_off_diagonal(field: &SField, j: i64, kcell: i64) -> Result<ScatterMatrix> {
    let s = field.scatter_at(j, kcell);
    if !s.is_off_diagonal(CHIRALITY_TOL) {
        return Err(Error::PlaquettePrecondition {
            j,
            k2: 2 * kcell,
            expected: "off-diagonal",
        });
    }
    Ok(s)
}

/// Build the plaquette block H^{j,k} of the given chirality.
pub fn plaquette_block(
    field: &SField,
    j: i64,
    k: i64,
    chirality: Chirality,
) -> Result<PlaquetteBlock> {
    let (basis, cycle) = match chirality {
        Chirality::Right => {
            let s_a = require_diagonal(field, 2 * j, k)?; //     S_{2j,2k}
            let s_b = require_diagonal(field, 2 * j - 1, k - 1)?; // S_{2j-1,2k-2}
            let s_c = require_diagonal(field, 2 * j - 2, k)?; //  S_{2j-2,2k}
            let s_d = require_diagonal(field, 2 * j - 1, k)?; //  S_{2j-1,2k}
            let basis = [
                LatticeSite::new(2 * j, 2 * k),
                LatticeSite::new(2 * j, 2 * k - 1),
                LatticeSite::new(2 * j - 1, 2 * k - 1),
                LatticeSite::new(2 * j - 1, 2 * k),
            ];
            let cycle = [
                s_a.q() * s_a.r(),
                s_b.q() * s_b.r().conj(),
                s_c.q() * s_c.r().conj(),
                s_d.q() * s_d.r(),
            ];
            (basis, cycle)
        }
        Chirality::Left => {
            let s_a = require_off_diagonal(field, 2 * j, k)?; //     S_{2j,2k}
            let s_b = require_off_diagonal(field, 2 * j + 1, k)?; // S_{2j+1,2k}
            let s_c = require_off_diagonal(field, 2 * j, k + 1)?; // S_{2j,2k+2}
            let s_d = require_off_diagonal(field, 2 * j - 1, k)?; // S_{2j-1,2k}
            let basis = [
                LatticeSite::new(2 * j, 2 * k),
                LatticeSite::new(2 * j + 1, 2 * k),
                LatticeSite::new(2 * j + 1, 2 * k + 1),
                LatticeSite::new(2 * j, 2 * k + 1),
            ];
            let cycle = [
                -s_a.q() * s_a.t(),
                -s_b.q() * s_b.t(),
                s_c.q() * s_c.t().conj(),
                s_d.q() * s_d.t().conj(),
            ];
            (basis, cycle)
        }
    };

    // 4-cycle: basis[m] -> basis[m+1] with coefficient cycle[m]
    let mut matrix = Matrix4::<C64>::zeros();
    matrix[(1, 0)] = cycle[0];
    matrix[(2, 1)] = cycle[1];
    matrix[(3, 2)] = cycle[2];
    matrix[(0, 3)] = cycle[3];

    let phase_product = cycle[0] * cycle[1] * cycle[2] * cycle[3];
    let root = C64::from_polar(phase_product.norm().powf(0.25), phase_product.arg() / 4.0);
    let i = C64::new(0.0, 1.0);
    let eigenvalues = [root, root * i, -root, -root * i];

    Ok(PlaquetteBlock {
        basis,
        matrix,
        eigenvalues,
        phase_product,
    })
}

impl PlaquetteBlock {
    /// An exact eigenvector for `eigenvalues[m]`, normalized.
    pub fn eigenvector(&self, m: usize) -> [C64; 4] {
        let lambda = self.eigenvalues[m];
        let a1 = self.matrix[(1, 0)];
        let a2 = self.matrix[(2, 1)];
        let a3 = self.matrix[(3, 2)];
        let v = [
            C64::new(1.0, 0.0),
            a1 / lambda,
            a1 * a2 / (lambda * lambda),
            a1 * a2 * a3 / (lambda * lambda * lambda),
        ];
        let half = C64::new(0.5, 0.0);
        [v[0] * half, v[1] * half, v[2] * half, v[3] * half]
    }
}
