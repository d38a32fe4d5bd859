//! Eigenphase curves of the Bloch symbol and certification of circle
//! coverage.
//!
//! Eigenvalues of the symbol live on the unit circle; matched across the
//! quasimomentum grid they form continuous curves, which need not close
//! individually — a nonzero determinant winding forces branches to permute
//! around the circle, and their swept arcs must then cover it entirely.
//! Matching is by minimal total circular displacement between adjacent
//! columns (cyclic-order preserving), with local grid refinement wherever a
//! matched step reaches π/4.

use crate::error::{Error, Result};
use crate::fiber::BlockKernel;
use crate::linalg::unitary_eigen;

const SYMBOL_UNITARITY_TOL: f64 = 1e-10;
const MAX_STEP: f64 = std::f64::consts::FRAC_PI_4;
const MAX_DEPTH: usize = 6;
const DEGENERACY_TOL: f64 = 1e-8;
/// Adjacent arcs chain through `θ + wrap(θ' − θ)`, which differs from θ' by
/// roundoff; openings below this are closed, not gaps.
const GAP_EPS: f64 = 1e-12;

/// Certificate for the swept-arc union.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    /// True when the arc union has no gap at all.
    pub covered: bool,
    /// Largest angular gap (radians) left uncovered.
    pub largest_gap: f64,
    /// A point inside the largest gap (meaningless when covered).
    pub gap_location: f64,
    /// Largest matched per-step eigenphase motion on the final grid.
    pub max_step: f64,
    /// A-priori bound on per-step motion: grid step × ‖d symbol/dy‖.
    pub step_bound: f64,
}

/// Matched eigenphase curves over the quasimomentum grid.
#[derive(Debug, Clone)]
pub struct BandStructure {
    /// Grid points in [0, 2π), ascending, including refinements.
    pub grid: Vec<f64>,
    /// `branches[b][i]` is branch b's eigenphase in (−π, π] at `grid[i]`.
    pub branches: Vec<Vec<f64>>,
    pub coverage: CoverageReport,
    /// Grid points where two eigenphases come within 1e-8.
    pub degeneracies: Vec<f64>,
}

fn wrap_pm_pi(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut y = x.rem_euclid(tau);
    if y > std::f64::consts::PI {
        y -= tau;
    }
    y
}

/// Sorted eigenphases of the symbol at y.
fn column(kernel: &BlockKernel, y: f64) -> Result<Vec<f64>> {
    let eig = unitary_eigen(&kernel.symbol(y), SYMBOL_UNITARITY_TOL)?;
    let mut phases: Vec<f64> = eig.values.iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

/// Best cyclic-offset matching between two sorted phase columns; returns
/// (offset, max displacement). Points on a circle admit an order-preserving
/// optimal matching, so scanning offsets is exact.
fn match_columns(a: &[f64], b: &[f64]) -> (usize, f64) {
    let n = a.len();
    let mut best = (0usize, f64::INFINITY, f64::INFINITY);
    for offset in 0..n {
        let mut total = 0.0;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let d = wrap_pm_pi(b[(i + offset) % n] - a[i]).abs();
            total += d;
            worst = worst.max(d);
        }
        if total < best.1 {
            best = (offset, total, worst);
        }
    }
    (best.0, best.2)
}

struct Arc {
    start: f64,
    len: f64,
}

/// March from column (y0, a) to column (y1, b), refining until every
/// matched step moves less than π/4. Emits intermediate columns (not the
/// terminal one) and the swept arcs of every matched step, and returns the
/// permutation `perm` with `b[perm[i]]` continuing `a[i]`, plus the largest
/// step seen.
#[allow(clippy::too_many_arguments)]
fn march(
    kernel: &BlockKernel,
    y0: f64,
    a: &[f64],
    y1: f64,
    b: &[f64],
    depth: usize,
    columns: &mut Vec<(f64, Vec<f64>)>,
    arcs: &mut Vec<Arc>,
) -> Result<(Vec<usize>, f64)> {
    let (offset, worst) = match_columns(a, b);
    let n = a.len();
    if worst < MAX_STEP {
        for i in 0..n {
            let from = a[i];
            let delta = wrap_pm_pi(b[(i + offset) % n] - from);
            arcs.push(Arc {
                start: if delta >= 0.0 { from } else { from + delta },
                len: delta.abs(),
            });
        }
        let perm = (0..n).map(|i| (i + offset) % n).collect();
        return Ok((perm, worst));
    }
    if depth >= MAX_DEPTH {
        return Err(Error::BandMatching {
            y: y0,
            what: format!("step {worst:.3} rad persists after {depth} refinements"),
        });
    }
    let mid = 0.5 * (y0 + y1);
    let m = column(kernel, mid)?;
    let (left, wl) = march(kernel, y0, a, mid, &m, depth + 1, columns, arcs)?;
    columns.push((mid, m.clone()));
    let (right, wr) = march(kernel, mid, &m, y1, b, depth + 1, columns, arcs)?;
    let perm = (0..n).map(|i| right[left[i]]).collect();
    Ok((perm, wl.max(wr)))
}

/// Largest gap of the arc union on the circle. Returns (gap, location).
fn largest_gap(arcs: &[Arc]) -> (f64, f64) {
    let tau = std::f64::consts::TAU;
    // normalize to [0, 2π), split wrapping arcs
    let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() + 1);
    for arc in arcs {
        let start = arc.start.rem_euclid(tau);
        let end = start + arc.len;
        if end <= tau {
            intervals.push((start, end));
        } else {
            intervals.push((start, tau));
            intervals.push((0.0, end - tau));
        }
    }
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    // merge and record gaps
    let mut gap: f64 = 0.0;
    let mut gap_at = 0.0;
    let first_start = intervals[0].0;
    let mut reach = intervals[0].1;
    for &(s, e) in &intervals[1..] {
        if s > reach + GAP_EPS {
            if s - reach > gap {
                gap = s - reach;
                gap_at = 0.5 * (s + reach);
            }
            reach = e;
        } else {
            reach = reach.max(e);
        }
    }
    // wrap-around gap between the last reach and the first start + 2π
    let wrap = first_start + tau - reach;
    if wrap > GAP_EPS && wrap > gap {
        gap = wrap;
        gap_at = (reach + 0.5 * wrap).rem_euclid(tau);
    }
    (gap.max(0.0), gap_at)
}

/// Compute matched eigenphase curves over `grid ≥ 128` points and certify
/// the coverage of the unit circle by their swept arcs.
pub fn band_structure(kernel: &BlockKernel, grid: usize) -> Result<BandStructure> {
    let n_y = grid.max(128);
    let tau = std::f64::consts::TAU;
    let dim = kernel.dim();

    let base: Vec<(f64, Vec<f64>)> = (0..n_y)
        .map(|i| {
            let y = tau * i as f64 / n_y as f64;
            Ok((y, column(kernel, y)?))
        })
        .collect::<Result<_>>()?;

    let mut columns: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n_y + 8);
    let mut arcs: Vec<Arc> = Vec::with_capacity(n_y * dim + 8);
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(n_y);
    let mut max_step: f64 = 0.0;

    for i in 0..n_y {
        let (y0, a) = &base[i];
        columns.push((*y0, a.clone()));
        let (y1, b) = if i + 1 < n_y {
            (base[i + 1].0, &base[i + 1].1)
        } else {
            (tau, &base[0].1) // closure step back to y = 0
        };
        let mut inserted = Vec::new();
        let (perm, worst) = march(kernel, *y0, a, y1, b, 0, &mut inserted, &mut arcs)?;
        // refinement columns sit between y0 and y1; keep grid ascending
        inserted.sort_by(|p, q| p.0.total_cmp(&q.0));
        columns.extend(inserted);
        perms.push(perm);
        max_step = max_step.max(worst);
    }

    // chain base-column permutations into continuous branch rows
    let n_cols = columns.len();
    let mut branches = vec![vec![0.0; n_cols]; dim];
    {
        // per base column, the sorted-index each branch currently sits on;
        // refinement columns between base points reuse nearest-phase rows
        let mut assign: Vec<usize> = (0..dim).collect();
        let mut base_iter = 0usize;
        for (ci, (y, phases)) in columns.iter().enumerate() {
            let is_base =
                base_iter < n_y && (*y - tau * base_iter as f64 / n_y as f64).abs() < 1e-12;
            if is_base && ci > 0 {
                let perm = &perms[base_iter - 1];
                for b in 0..dim {
                    assign[b] = perm[assign[b]];
                }
            }
            if is_base {
                for b in 0..dim {
                    branches[b][ci] = phases[assign[b]];
                }
                base_iter += 1;
            } else {
                // refined column: assign by nearest phase to the previous column
                for branch in branches.iter_mut() {
                    let prev = branch[ci - 1];
                    let nearest = phases
                        .iter()
                        .copied()
                        .min_by(|x, z| {
                            wrap_pm_pi(x - prev)
                                .abs()
                                .total_cmp(&wrap_pm_pi(z - prev).abs())
                        })
                        .expect("nonempty column");
                    branch[ci] = nearest;
                }
            }
        }
    }

    let degeneracies: Vec<f64> = columns
        .iter()
        .filter(|(_, phases)| {
            phases
                .windows(2)
                .any(|w| (w[1] - w[0]).abs() < DEGENERACY_TOL)
                || (dim > 1 && (phases[dim - 1] - phases[0] - tau).abs() < DEGENERACY_TOL)
        })
        .map(|(y, _)| *y)
        .collect();

    let (gap, gap_at) = largest_gap(&arcs);
    let step_bound = kernel.symbol_derivative_bound() * tau / n_y as f64;
    let coverage = CoverageReport {
        covered: gap <= 0.0,
        largest_gap: gap,
        gap_location: gap_at,
        max_step,
        step_bound,
    };

    Ok(BandStructure {
        grid: columns.iter().map(|(y, _)| *y).collect(),
        branches,
        coverage,
        degeneracies,
    })
}
