//! Two independent routes to the determinant winding of a unitary symbol.
//!
//! For a compactly supported kernel with unitary symbol the winding is both
//! the tap sum `Σ_z z ‖V(z)‖²_HS` and the total phase of `det symbol(y)`
//! around the circle. The two are computed by unrelated algorithms and must
//! agree; the right-shift kernel calibrates the sign to +1.

use crate::error::{Error, Result};
use crate::fiber::BlockKernel;
use crate::C64;

const EXACT_RESIDUAL_TOL: f64 = 1e-9;
const EXACT_RESIDUAL_HARD: f64 = 1e-6;
const MAX_REFINEMENTS: usize = 4;

/// `Σ_z z ‖V(z)‖²_HS`, rounded to the nearest integer.
///
/// A rounding residual above 1e-6 signals a non-unitary symbol or broken
/// kernel.
pub fn winding_exact(kernel: &BlockKernel) -> Result<i64> {
    let mut sum = 0.0;
    for &z in kernel.taps().keys() {
        sum += z as f64 * kernel.tap_hs_sq(z);
    }
    let rounded = sum.round();
    let residual = (sum - rounded).abs();
    if residual > EXACT_RESIDUAL_HARD {
        return Err(Error::WindingResidual(residual));
    }
    debug_assert!(
        residual <= EXACT_RESIDUAL_TOL,
        "winding residual {residual:.3e} above the soft tolerance"
    );
    Ok(rounded as i64)
}

fn det_symbol(kernel: &BlockKernel, y: f64) -> C64 {
    kernel.symbol(y).determinant()
}

/// Phase increment along [y0, y1], bisecting until each step is < π/2.
fn phase_step(
    kernel: &BlockKernel,
    y0: f64,
    d0: C64,
    y1: f64,
    d1: C64,
    depth: usize,
) -> Result<f64> {
    let jump = (d1 / d0).arg();
    if jump.abs() < std::f64::consts::FRAC_PI_2 {
        return Ok(jump);
    }
    if depth >= MAX_REFINEMENTS {
        return Err(Error::UnwrapFailed {
            y: y0,
            jump,
            refinements: depth,
        });
    }
    let mid = 0.5 * (y0 + y1);
    let dm = det_symbol(kernel, mid);
    Ok(phase_step(kernel, y0, d0, mid, dm, depth + 1)?
        + phase_step(kernel, mid, dm, y1, d1, depth + 1)?)
}

/// Phase-unwrapped winding of `y ↦ det symbol(y)` over a grid of at least
/// 64 points, refining wherever adjacent phase jumps reach π/2.
pub fn winding_phase(kernel: &BlockKernel, grid: usize) -> Result<i64> {
    let grid = grid.max(64);
    let tau = std::f64::consts::TAU;
    let mut total = 0.0;
    let mut y_prev = 0.0;
    let mut d_prev = det_symbol(kernel, 0.0);
    let d_first = d_prev;
    for i in 1..=grid {
        let y = tau * i as f64 / grid as f64;
        let d = if i == grid {
            d_first
        } else {
            det_symbol(kernel, y)
        };
        total += phase_step(kernel, y_prev, d_prev, y, d, 0)?;
        y_prev = y;
        d_prev = d;
    }
    Ok((total / tau).round() as i64)
}
