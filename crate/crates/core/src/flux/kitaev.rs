//! Kitaev's cut sum for banded unitaries on ℤ with matrix fibers.

use crate::fiber::BlockKernel;

/// `Σ_{z ≥ cut} Σ_{y < cut} (‖U(z,y)‖²_HS − ‖U(y,z)‖²_HS)` for the
/// translation-invariant kernel `U(x, y) = V(x − y)`.
///
/// The sum is finite because the taps have compact support; the value is
/// independent of the cut position and equals the determinant winding of
/// the symbol. The double sum is evaluated literally so that it stays an
/// algorithm independent of the winding routes.
pub fn kitaev_trace(kernel: &BlockKernel, cut: i64) -> f64 {
    let radius = kernel.support_radius();
    let mut total = 0.0;
    for z in cut..cut + radius {
        for y in (z - radius)..cut {
            total += kernel.tap_hs_sq(z - y);
            total -= kernel.tap_hs_sq(y - z);
        }
    }
    total
}
