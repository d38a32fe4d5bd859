//! Matrix-free application of the network unitary and its adjoint.
//!
//! Every input site is routed through exactly one scattering matrix; the
//! four parity classes of (j, k) determine which one and with which entries:
//!
//! ```text
//!   U|2j,2k⟩     =  q r |2j,2k-1⟩   - q t |2j+1,2k⟩      (S at (2j,2k))
//!   U|2j+1,2k-1⟩ =  q t̄ |2j,2k-1⟩   + q r̄ |2j+1,2k⟩      (S at (2j,2k))
//!   U|2j+1,2k⟩   =  q r |2j+2,2k⟩   - q t |2j+1,2k+1⟩    (S at (2j+1,2k))
//!   U|2j+2,2k+1⟩ =  q t̄ |2j+2,2k⟩   + q r̄ |2j+1,2k+1⟩    (S at (2j+1,2k))
//! ```
//!
//! Amplitude moves at most one site in each coordinate.

use crate::error::{Error, Result};
use crate::lattice::SField;
use crate::operator::{Closure, StateVector};
use crate::C64;

/// One output term: target site and coefficient.
pub(crate) type Term = ((i64, i64), C64);

#[inline]
pub(crate) fn forward_terms(field: &SField, x: i64, y: i64) -> [Term; 2] {
    match (x.rem_euclid(2), y.rem_euclid(2)) {
        (0, 0) => {
            let s = field.scatter_at(x, y.div_euclid(2));
            [((x, y - 1), s.q() * s.r()), ((x + 1, y), -s.q() * s.t())]
        }
        (1, 1) => {
            let s = field.scatter_at(x - 1, (y + 1).div_euclid(2));
            [
                ((x - 1, y), s.q() * s.t().conj()),
                ((x, y + 1), s.q() * s.r().conj()),
            ]
        }
        (1, 0) => {
            let s = field.scatter_at(x, y.div_euclid(2));
            [((x + 1, y), s.q() * s.r()), ((x, y + 1), -s.q() * s.t())]
        }
        (0, 1) => {
            let s = field.scatter_at(x - 1, (y - 1).div_euclid(2));
            [
                ((x, y - 1), s.q() * s.t().conj()),
                ((x - 1, y), s.q() * s.r().conj()),
            ]
        }
        _ => unreachable!(),
    }
}

#[inline]
fn adjoint_terms(field: &SField, x: i64, y: i64) -> [Term; 2] {
    match (x.rem_euclid(2), y.rem_euclid(2)) {
        (0, 1) => {
            let s = field.scatter_at(x, (y + 1).div_euclid(2));
            [
                ((x, y + 1), s.q().conj() * s.r().conj()),
                ((x + 1, y), s.q().conj() * s.t()),
            ]
        }
        (1, 0) => {
            let s = field.scatter_at(x - 1, y.div_euclid(2));
            [
                ((x - 1, y), -s.q().conj() * s.t().conj()),
                ((x, y - 1), s.q().conj() * s.r()),
            ]
        }
        (0, 0) => {
            let s = field.scatter_at(x - 1, y.div_euclid(2));
            [
                ((x - 1, y), s.q().conj() * s.r().conj()),
                ((x, y + 1), s.q().conj() * s.t()),
            ]
        }
        (1, 1) => {
            let s = field.scatter_at(x, (y - 1).div_euclid(2));
            [
                ((x, y - 1), -s.q().conj() * s.t().conj()),
                ((x + 1, y), s.q().conj() * s.r()),
            ]
        }
        _ => unreachable!(),
    }
}

fn check_torus_compat(field: &SField, height: usize) -> Result<()> {
    match field.period_cells() {
        None => Err(Error::IncompatibleClosure(
            "torus closure needs a vertically periodic field".into(),
        )),
        Some(p) => {
            let rows = 2 * p as usize;
            if !height.is_multiple_of(rows) {
                Err(Error::IncompatibleClosure(format!(
                    "torus height {height} is not a multiple of the field period {rows} rows"
                )))
            } else {
                Ok(())
            }
        }
    }
}

fn apply_with(
    field: &SField,
    psi: &StateVector,
    terms: fn(&SField, i64, i64) -> [Term; 2],
) -> Result<StateVector> {
    let window = psi.window();
    let closure = psi.closure();
    if closure == Closure::TorusVertical {
        check_torus_compat(field, window.rows())?;
    }
    let height = window.rows() as i64;
    let mut out = StateVector::zero(window, closure)?;
    for (site, amp) in psi.support() {
        for ((tj, tk), coeff) in terms(field, site.j, site.k) {
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let value = amp * coeff;
            let tk = match closure {
                Closure::Open => tk,
                Closure::TorusVertical => window.k0 + (tk - window.k0).rem_euclid(height),
            };
            match window.index_of(tj, tk) {
                Some(idx) => out.add_at_index(idx, value),
                None => return Err(Error::TruncationLeakage { j: tj, k: tk }),
            }
        }
    }
    Ok(out)
}

/// Apply the network unitary to a windowed state.
///
/// On an open window any amplitude transfer across the boundary is an error;
/// on a vertical torus the rows wrap (the field must be periodic with a
/// period dividing the window height).
pub fn apply_u(field: &SField, psi: &StateVector) -> Result<StateVector> {
    apply_with(field, psi, forward_terms)
}

/// Apply the adjoint of the network unitary.
pub fn apply_u_adjoint(field: &SField, psi: &StateVector) -> Result<StateVector> {
    apply_with(field, psi, adjoint_terms)
}

/// The involutive parity operator: amplitudes scaled by (-1)^(j+k).
pub fn parity_apply(psi: &StateVector) -> StateVector {
    let mut out = psi.clone();
    let window = psi.window();
    for k in window.k0..=window.k1 {
        for j in window.j0..=window.j1 {
            if (j + k).rem_euclid(2) == 1 {
                let v = out.get(j, k);
                out.set(j, k, -v).expect("site is inside the window");
            }
        }
    }
    out
}
