//! Wandering-orbit witness for the bilateral shift inside the strip model.
//!
//! Replacing the odd scattering matrices on row 0 strictly between the
//! strip edges by the identity is a finite-rank perturbation U′ of the
//! model. In U′ the only transfer from the upper half strip to the lower is
//! the single unit-modulus hop at the left edge, and nothing returns, so
//! the orbit of |lo, 1⟩ is pairwise orthonormal: its Gram matrix is the
//! identity, certifying a bilateral-shift summand modulo finite rank.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSite, SField, ScatterMatrix, StripSpec};
use crate::operator::{apply_u, apply_u_adjoint, Closure, StateVector, Window};
use crate::C64;

/// Orbit Gram matrix plus the finite-rank modification record.
#[derive(Debug, Clone)]
pub struct ShiftWitness {
    pub depth: usize,
    pub seed_site: LatticeSite,
    /// ⟨U′^m φ, U′^n φ⟩ for m, n ∈ [-depth, depth].
    pub gram: DMatrix<C64>,
    /// Sites (column j, row 0) whose matrices were actually changed.
    pub modified_sites: Vec<(i64, i64)>,
    /// The perturbation U − U′ has rank at most 2 · |modified_sites|.
    pub rank_bound: usize,
    /// max |Gram − I|.
    pub gram_residual: f64,
}

/// Build U′, iterate the seed |lo, 1⟩ over [-depth, depth], and return the
/// orbit's Gram matrix.
pub fn shift_witness(field: &SField, strip: &StripSpec, depth: usize) -> Result<ShiftWitness> {
    let mut modified_sites = Vec::new();
    let mut overrides = Vec::new();
    let mut j = strip.lo() + 1;
    while j < strip.hi() {
        if field.scatter_at(j, 0) != ScatterMatrix::identity() {
            modified_sites.push((j, 0));
            overrides.push(((j, 0), ScatterMatrix::identity()));
        }
        j += 2;
    }
    // literal row-0 replacements: on periodic fields only this row changes
    let modified = field.with_overrides_at_rows(overrides)?;

    let margin = depth as i64 + 2;
    let window = Window::new(strip.lo(), strip.hi(), 1 - margin, 1 + margin)?;
    let seed_site = LatticeSite::new(strip.lo(), 1);
    let seed = StateVector::basis_state(window, Closure::Open, seed_site)?;

    let n = 2 * depth + 1;
    let mut orbit: Vec<Option<StateVector>> = vec![None; n];
    orbit[depth] = Some(seed.clone());
    let mut forward = seed.clone();
    for step in 1..=depth {
        forward = apply_u(&modified, &forward).map_err(|e| match e {
            Error::TruncationLeakage { .. } => Error::OrbitEscaped { depth },
            other => other,
        })?;
        orbit[depth + step] = Some(forward.clone());
    }
    let mut backward = seed;
    for step in 1..=depth {
        backward = apply_u_adjoint(&modified, &backward).map_err(|e| match e {
            Error::TruncationLeakage { .. } => Error::OrbitEscaped { depth },
            other => other,
        })?;
        orbit[depth - step] = Some(backward.clone());
    }
    let orbit: Vec<StateVector> = orbit
        .into_iter()
        .map(|s| s.expect("orbit filled"))
        .collect();

    let mut gram = DMatrix::<C64>::zeros(n, n);
    let mut gram_residual: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let g = orbit[a].inner(&orbit[b])?;
            gram[(a, b)] = g;
            let target = if a == b { 1.0 } else { 0.0 };
            gram_residual = gram_residual.max((g - C64::new(target, 0.0)).norm());
        }
    }

    Ok(ShiftWitness {
        depth,
        seed_site,
        gram,
        rank_bound: 2 * modified_sites.len(),
        modified_sites,
        gram_residual,
    })
}
