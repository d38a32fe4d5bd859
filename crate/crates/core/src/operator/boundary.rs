//! Verification of the chiral boundary conditions on the strip edges.
//!
//! On the invariant strip the edge columns move strictly along the boundary:
//! the left edge carries the image of odd rows one step down, the right edge
//! carries even rows one step down, each with a unit-modulus site-dependent
//! phase. For odd interface bounds four extra single-site relations hold one
//! column inside the edge.

use crate::error::{Error, Result};
use crate::lattice::{LatticeSite, SField, StripSpec};
use crate::operator::{apply_u, Closure, StateVector, Window};
use crate::C64;

const PHASE_TOL: f64 = 1e-12;

/// Which boundary relation a phase was extracted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// U|lo, 2k+1⟩ = p |lo, 2k⟩
    LeftEdgeDown,
    /// U|hi, 2k⟩ = p |hi, 2k-1⟩
    RightEdgeDown,
    /// n_left odd: U|lo, 2k⟩ = p |lo+1, 2k⟩
    OddLeftOutward,
    /// n_left odd: U|lo+1, 2k+1⟩ = p |lo, 2k+1⟩
    OddLeftInward,
    /// n_right odd: U|hi, 2k+1⟩ = p |hi-1, 2k+1⟩
    OddRightInward,
    /// n_right odd: U|hi-1, 2k⟩ = p |hi, 2k⟩
    OddRightOutward,
}

/// One verified single-site boundary relation U|from⟩ = p|to⟩.
#[derive(Debug, Clone)]
pub struct BoundaryPhase {
    pub kind: BoundaryKind,
    pub from: LatticeSite,
    pub to: LatticeSite,
    pub phase: C64,
}

fn extract_phase(
    field: &SField,
    kind: BoundaryKind,
    from: LatticeSite,
    to: LatticeSite,
) -> Result<BoundaryPhase> {
    // a window around the pair is enough: both sites are 1-neighbours
    let j0 = from.j.min(to.j) - 2;
    let j1 = from.j.max(to.j) + 2;
    let k0 = from.k.min(to.k) - 2;
    let k1 = from.k.max(to.k) + 2;
    let window = Window::new(j0, j1, k0, k1)?;
    let e = StateVector::basis_state(window, Closure::Open, from)?;
    let image = apply_u(field, &e)?;
    let phase = image.get(to.j, to.k);
    let off_weight = (image.norm_sqr() - phase.norm_sqr()).max(0.0).sqrt();
    if off_weight > PHASE_TOL || (phase.norm() - 1.0).abs() > PHASE_TOL {
        return Err(Error::BoundaryLeak {
            j: from.j,
            k: from.k,
            weight: off_weight.max((phase.norm() - 1.0).abs()),
        });
    }
    Ok(BoundaryPhase {
        kind,
        from,
        to,
        phase,
    })
}

/// Verify every boundary relation for k in `k_range` and return the
/// extracted unit-modulus phases.
pub fn boundary_phase_check(
    field: &SField,
    strip: &StripSpec,
    k_range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<BoundaryPhase>> {
    let lo = strip.lo();
    let hi = strip.hi();
    let mut phases = Vec::new();
    for k in k_range {
        phases.push(extract_phase(
            field,
            BoundaryKind::LeftEdgeDown,
            LatticeSite::new(lo, 2 * k + 1),
            LatticeSite::new(lo, 2 * k),
        )?);
        phases.push(extract_phase(
            field,
            BoundaryKind::RightEdgeDown,
            LatticeSite::new(hi, 2 * k),
            LatticeSite::new(hi, 2 * k - 1),
        )?);
        if strip.n_left().rem_euclid(2) == 1 {
            phases.push(extract_phase(
                field,
                BoundaryKind::OddLeftOutward,
                LatticeSite::new(lo, 2 * k),
                LatticeSite::new(lo + 1, 2 * k),
            )?);
            phases.push(extract_phase(
                field,
                BoundaryKind::OddLeftInward,
                LatticeSite::new(lo + 1, 2 * k + 1),
                LatticeSite::new(lo, 2 * k + 1),
            )?);
        }
        if strip.n_right().rem_euclid(2) == 1 {
            phases.push(extract_phase(
                field,
                BoundaryKind::OddRightInward,
                LatticeSite::new(hi, 2 * k + 1),
                LatticeSite::new(hi - 1, 2 * k + 1),
            )?);
            phases.push(extract_phase(
                field,
                BoundaryKind::OddRightOutward,
                LatticeSite::new(hi - 1, 2 * k),
                LatticeSite::new(hi, 2 * k),
            )?);
        }
    }
    Ok(phases)
}
