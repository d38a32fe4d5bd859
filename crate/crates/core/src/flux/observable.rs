//! The finite-rank flux observable Φ_c = U*QU − Q on the strip.
//!
//! Q is multiplication by χ(k ≥ c). Since one step moves amplitude at most
//! one row, Φ_c is supported on rows {c-1, c}, where it decomposes into one
//! rank-one edge block and one 2×2 block per interior column pair. The
//! closed form is exact at finite rank, so it is primary; a matrix-free
//! evaluation of U*QU − Q cross-checks it.

use nalgebra::{DMatrix, Matrix2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::HalfSpaceProjection;
use crate::lattice::{LatticeSite, SField, StripSpec};
use crate::operator::{apply_u, apply_u_adjoint, Closure, StateVector, Window};
use crate::C64;

const CHIRAL_TOL: f64 = 1e-12;

/// One hermitian block of Φ_c.
#[derive(Debug, Clone)]
pub enum FluxBlock {
    /// −|site⟩⟨site| scaled by `value` on a single edge site.
    Singleton { site: LatticeSite, value: f64 },
    /// 2×2 block over the ordered pair of sites.
    Pair {
        sites: [LatticeSite; 2],
        matrix: Matrix2<C64>,
        /// even cuts: |r| of the governing matrix; odd cuts: |t|.
        amplitude: f64,
    },
}

impl FluxBlock {
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self {
            FluxBlock::Singleton { value, .. } => vec![*value],
            // 0.0 - a avoids a negative zero for vanishing amplitudes
            FluxBlock::Pair { amplitude, .. } => vec![0.0 - *amplitude, *amplitude],
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            FluxBlock::Singleton { value, .. } => *value,
            FluxBlock::Pair { matrix, .. } => matrix[(0, 0)].re + matrix[(1, 1)].re,
        }
    }

    pub fn sites(&self) -> Vec<LatticeSite> {
        match self {
            FluxBlock::Singleton { site, .. } => vec![*site],
            FluxBlock::Pair { sites, .. } => sites.to_vec(),
        }
    }

    /// Leading column index, used in CSV reports.
    pub fn column(&self) -> i64 {
        match self {
            FluxBlock::Singleton { site, .. } => site.j,
            FluxBlock::Pair { sites, .. } => sites[0].j,
        }
    }
}

/// The assembled flux observable at cut height `cut`.
#[derive(Debug, Clone)]
pub struct FluxOperator {
    pub cut: i64,
    pub strip: StripSpec,
    pub blocks: Vec<FluxBlock>,
}

/// Cut height, spectrum, trace and integer index of one flux observable.
#[derive(Debug, Clone, Serialize)]
pub struct FluxReport {
    pub cut: i64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    pub index: i64,
    pub tolerance_used: f64,
}

fn require_chiral(field: &SField, strip: &StripSpec) -> Result<()> {
    // spot-check the forced columns nearest the strip; full sampling lives in tests
    for kc in -2..=2 {
        for j in [strip.lo() - 2, strip.lo() - 1] {
            if j < field.n_left() && !field.scatter_at(j, kc).is_off_diagonal(CHIRAL_TOL) {
                return Err(Error::ChiralityViolation {
                    j,
                    k2: 2 * kc,
                    what: "left phase requires r = 0".into(),
                });
            }
        }
        for j in [strip.hi(), strip.hi() + 1] {
            if j >= field.n_right() && !field.scatter_at(j, kc).is_diagonal(CHIRAL_TOL) {
                return Err(Error::ChiralityViolation {
                    j,
                    k2: 2 * kc,
                    what: "right phase requires t = 0".into(),
                });
            }
        }
    }
    Ok(())
}

/// Assemble Φ_c from the closed-form blocks.
pub fn flux_blocks(field: &SField, strip: &StripSpec, cut: i64) -> Result<FluxOperator> {
    require_chiral(field, strip)?;
    let p_left = strip.p_left();
    let p_right = strip.p_right();
    let mut blocks = Vec::new();
    if cut.rem_euclid(2) == 0 {
        // even cut: governed by the even matrices S_{2j, c}
        blocks.push(FluxBlock::Singleton {
            site: LatticeSite::new(2 * p_right, cut),
            value: -1.0,
        });
        let kcell = cut.div_euclid(2);
        for j in p_left..p_right {
            let s = field.scatter_at(2 * j, kcell);
            let (r, t) = (s.r(), s.t());
            let rr = r.norm_sqr();
            let matrix = Matrix2::new(
                C64::new(-rr, 0.0),
                -(r * t).conj(),
                -(r * t),
                C64::new(rr, 0.0),
            );
            blocks.push(FluxBlock::Pair {
                sites: [
                    LatticeSite::new(2 * j, cut),
                    LatticeSite::new(2 * j + 1, cut - 1),
                ],
                matrix,
                amplitude: r.norm(),
            });
        }
    } else {
        // odd cut: governed by the odd matrices S_{2j-1, c-1}
        blocks.push(FluxBlock::Singleton {
            site: LatticeSite::new(2 * p_left, cut),
            value: -1.0,
        });
        let kcell = (cut - 1).div_euclid(2);
        for j in (p_left + 1)..=p_right {
            let s = field.scatter_at(2 * j - 1, kcell);
            let (r, t) = (s.r(), s.t());
            let tt = t.norm_sqr();
            let matrix = Matrix2::new(
                C64::new(tt, 0.0),
                -(r * t).conj(),
                -(r * t),
                C64::new(-tt, 0.0),
            );
            blocks.push(FluxBlock::Pair {
                sites: [
                    LatticeSite::new(2 * j - 1, cut - 1),
                    LatticeSite::new(2 * j, cut),
                ],
                matrix,
                amplitude: t.norm(),
            });
        }
    }
    Ok(FluxOperator {
        cut,
        strip: *strip,
        blocks,
    }
    .validated())
}

impl FluxOperator {
    fn validated(self) -> Self {
        debug_assert!(self.blocks.iter().all(|b| match b {
            FluxBlock::Singleton { value, .. } => value.abs() <= 1.0 + 1e-12,
            FluxBlock::Pair { matrix, .. } => {
                let herm = (matrix - matrix.adjoint())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                herm <= 1e-12
            }
        }));
        self
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(FluxBlock::trace).sum()
    }

    /// Closed-form eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.blocks.iter().flat_map(|b| b.eigenvalues()).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Sites carrying the observable (rows {c-1, c} inside the strip).
    pub fn support_sites(&self) -> Vec<LatticeSite> {
        let mut sites: Vec<LatticeSite> = self.blocks.iter().flat_map(|b| b.sites()).collect();
        sites.sort();
        sites.dedup();
        sites
    }

    /// Dense hermitian matrix over `basis` (zero off the support).
    pub fn to_dense(&self, basis: &[LatticeSite]) -> DMatrix<C64> {
        let n = basis.len();
        let index = |site: &LatticeSite| basis.iter().position(|s| s == site);
        let mut m = DMatrix::<C64>::zeros(n, n);
        for block in &self.blocks {
            match block {
                FluxBlock::Singleton { site, value } => {
                    if let Some(i) = index(site) {
                        m[(i, i)] += C64::new(*value, 0.0);
                    }
                }
                FluxBlock::Pair { sites, matrix, .. } => {
                    if let (Some(a), Some(b)) = (index(&sites[0]), index(&sites[1])) {
                        m[(a, a)] += matrix[(0, 0)];
                        m[(a, b)] += matrix[(0, 1)];
                        m[(b, a)] += matrix[(1, 0)];
                        m[(b, b)] += matrix[(1, 1)];
                    }
                }
            }
        }
        m
    }
}

/// Spectrum, trace, and kernel-counting index of a flux observable.
pub fn flux_spectrum(flux: &FluxOperator) -> FluxReport {
    let tolerance = 1e-6;
    let eigenvalues = flux.eigenvalues();
    let plus = eigenvalues
        .iter()
        .filter(|&&x| (x - 1.0).abs() <= tolerance)
        .count() as i64;
    let minus = eigenvalues
        .iter()
        .filter(|&&x| (x + 1.0).abs() <= tolerance)
        .count() as i64;
    FluxReport {
        cut: flux.cut,
        eigenvalues,
        trace: flux.trace(),
        index: plus - minus,
        tolerance_used: tolerance,
    }
}

/// Matrix-free oracle: evaluate Φ_c = U*QU − Q on the given basis sites by
/// applying the operators on an open window with enough margin, and verify
/// that no weight falls outside the basis.
pub fn flux_dense_matrix_free(
    field: &SField,
    strip: &StripSpec,
    cut: i64,
    basis: &[LatticeSite],
) -> Result<DMatrix<C64>> {
    let window = Window::new(strip.lo(), strip.hi(), cut - 3, cut + 2)?;
    let q = HalfSpaceProjection::new(cut);
    let n = basis.len();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for (col, site) in basis.iter().enumerate() {
        let e = StateVector::basis_state(window, Closure::Open, *site)?;
        let ue = apply_u(field, &e)?;
        let mut cut_ue = ue.clone();
        for (s, _) in ue.support() {
            if !q.contains(s) {
                cut_ue.set(s.j, s.k, C64::new(0.0, 0.0))?;
            }
        }
        let mut phi_e = apply_u_adjoint(field, &cut_ue)?;
        if q.contains(*site) {
            let v = phi_e.get(site.j, site.k);
            phi_e.set(site.j, site.k, v - C64::new(1.0, 0.0))?;
        }
        let mut captured = 0.0;
        for (row, target) in basis.iter().enumerate() {
            let amp = phi_e.get(target.j, target.k);
            captured += amp.norm_sqr();
            m[(row, col)] = amp;
        }
        let leak = (phi_e.norm_sqr() - captured).max(0.0).sqrt();
        if leak > 1e-12 {
            return Err(Error::BoundaryLeak {
                j: site.j,
                k: site.k,
                weight: leak,
            });
        }
    }
    Ok(m)
}
