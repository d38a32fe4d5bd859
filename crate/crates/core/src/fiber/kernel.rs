//! Compactly supported matrix-valued convolution kernels and their Bloch
//! symbols.
//!
//! For a vertically periodic field the strip model commutes with the
//! two-row vertical shift. Grouping rows (2k-1, 2k) into one cell of
//! dimension 2·width turns the restriction into a convolution
//! `(Uψ)(m) = Σ V(m - m′) ψ(m′)` with taps supported on |m| ≤ 1.
//!
//! The symbol convention is the one under which the right-shift kernel
//! winds +1: `symbol(y) = Σ_z e^{iyz} V(z)`. Under it the chiral-interface
//! determinant winds −1 and the symbol's spectrum agrees pointwise with
//! the five-diagonal fiber matrix at the same y.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSite, SField, StripSpec};
use crate::linalg;
use crate::operator::{apply_u, Closure, StateVector, Window};
use crate::C64;

/// A banded operator on ℤ with d×d matrix fibers: `taps[z]` is the block
/// mapping cell m to cell m + z.
#[derive(Debug, Clone)]
pub struct BlockKernel {
    dim: usize,
    taps: BTreeMap<i64, DMatrix<C64>>,
}

impl BlockKernel {
    pub fn new(dim: usize, taps: BTreeMap<i64, DMatrix<C64>>) -> Self {
        let taps = taps
            .into_iter()
            .filter(|(_, m)| m.iter().any(|z| z.norm_sqr() > 0.0))
            .collect();
        Self { dim, taps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn taps(&self) -> &BTreeMap<i64, DMatrix<C64>> {
        &self.taps
    }

    pub fn tap(&self, z: i64) -> Option<&DMatrix<C64>> {
        self.taps.get(&z)
    }

    /// Largest |z| with a nonzero tap.
    pub fn support_radius(&self) -> i64 {
        self.taps.keys().map(|z| z.abs()).max().unwrap_or(0)
    }

    /// `Σ_z e^{iyz} V(z)`.
    pub fn symbol(&self, y: f64) -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (&z, tap) in &self.taps {
            let phase = C64::from_polar(1.0, y * z as f64);
            m += tap * phase;
        }
        m
    }

    /// Squared Hilbert–Schmidt norm of one tap.
    pub fn tap_hs_sq(&self, z: i64) -> f64 {
        self.taps
            .get(&z)
            .map(|m| m.iter().map(|v| v.norm_sqr()).sum())
            .unwrap_or(0.0)
    }

    /// Worst unitarity defect of the symbol over `samples` grid points.
    pub fn symbol_unitarity_defect(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| {
                let y = std::f64::consts::TAU * i as f64 / samples as f64;
                linalg::unitarity_defect(&self.symbol(y))
            })
            .fold(0.0, f64::max)
    }

    /// Upper bound on |d symbol / dy| in operator norm: Σ |z|·‖V(z)‖_HS.
    pub fn symbol_derivative_bound(&self) -> f64 {
        self.taps
            .iter()
            .map(|(&z, _)| z.abs() as f64 * self.tap_hs_sq(z).sqrt())
            .sum()
    }

    /// Kernel composition (convolution of taps): `self` applied after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "kernel dimensions differ");
        let mut taps: BTreeMap<i64, DMatrix<C64>> = BTreeMap::new();
        for (&za, ta) in &self.taps {
            for (&zb, tb) in &other.taps {
                let entry = taps
                    .entry(za + zb)
                    .or_insert_with(|| DMatrix::zeros(self.dim, self.dim));
                *entry += ta * tb;
            }
        }
        Self::new(self.dim, taps)
    }

    /// n-fold composition with itself; `power(0)` is the identity kernel.
    pub fn power(&self, n: u32) -> Self {
        let mut taps = BTreeMap::new();
        taps.insert(0, DMatrix::identity(self.dim, self.dim));
        let mut out = Self::new(self.dim, taps);
        for _ in 0..n {
            out = out.compose(self);
        }
        out
    }

    /// Apply the convolution to a finite cell sequence starting at `m0`.
    pub fn convolve(
        &self,
        m0: i64,
        cells: &[nalgebra::DVector<C64>],
    ) -> Vec<(i64, nalgebra::DVector<C64>)> {
        let mut out: BTreeMap<i64, nalgebra::DVector<C64>> = BTreeMap::new();
        for (offset, cell) in cells.iter().enumerate() {
            let m_in = m0 + offset as i64;
            for (&z, tap) in &self.taps {
                let entry = out
                    .entry(m_in + z)
                    .or_insert_with(|| nalgebra::DVector::zeros(self.dim));
                *entry += tap * cell;
            }
        }
        out.into_iter().collect()
    }
}

/// The strip's convolution kernel: taps plus the geometry they came from.
#[derive(Debug, Clone)]
pub struct FiberKernel {
    pub strip: StripSpec,
    pub kernel: BlockKernel,
}

impl FiberKernel {
    /// Flat fiber index of (column j, cell component s); s = 0 is the lower
    /// row 2k-1 of the cell, s = 1 the upper row 2k.
    pub fn fiber_index(&self, j: i64, s: usize) -> usize {
        2 * (j - self.strip.lo()) as usize + s
    }

    /// Inverse of [`Self::fiber_index`].
    pub fn site_of(&self, index: usize, cell: i64) -> LatticeSite {
        let j = self.strip.lo() + (index / 2) as i64;
        let s = index % 2;
        // s = 0 -> row 2·cell - 1, s = 1 -> row 2·cell
        LatticeSite::new(j, 2 * cell - 1 + s as i64)
    }
}

/// Row → (cell, component): rows (2m-1, 2m) belong to cell m.
fn cell_of_row(k: i64) -> (i64, usize) {
    let m = (k + 1).div_euclid(2);
    let s = if k.rem_euclid(2) == 0 { 1 } else { 0 };
    (m, s)
}

/// Extract the convolution kernel of the strip model of a vertically
/// translation-invariant field, and verify the reconstruction against the
/// matrix-free operator on random states.
pub fn fiber_kernel(field: &SField, strip: &StripSpec) -> Result<FiberKernel> {
    if !field.is_translation_invariant() {
        return Err(Error::NotTranslationInvariant);
    }
    let dim = 2 * strip.width() as usize;
    let window = Window::new(strip.lo(), strip.hi(), -3, 2)?;
    let mut taps: BTreeMap<i64, DMatrix<C64>> = BTreeMap::new();
    // images of the cell-0 basis: rows (-1, 0)
    for j in strip.columns() {
        for s in 0..2usize {
            let col = 2 * (j - strip.lo()) as usize + s;
            let k = -1 + s as i64;
            let e = StateVector::basis_state(window, Closure::Open, LatticeSite::new(j, k))?;
            let image = apply_u(field, &e)?;
            for (site, amp) in image.support() {
                let (cell, s_out) = cell_of_row(site.k);
                let row = 2 * (site.j - strip.lo()) as usize + s_out;
                let tap = taps.entry(cell).or_insert_with(|| DMatrix::zeros(dim, dim));
                tap[(row, col)] += amp;
            }
        }
    }
    let out = FiberKernel {
        strip: *strip,
        kernel: BlockKernel::new(dim, taps),
    };
    verify_reconstruction(field, strip, &out, 5, 1e-12)?;
    Ok(out)
}

/// Compare the convolution action with the matrix-free operator on seeded
/// random states supported on a few cells.
pub fn verify_reconstruction(
    field: &SField,
    strip: &StripSpec,
    fiber: &FiberKernel,
    states: usize,
    tol: f64,
) -> Result<()> {
    let dim = fiber.kernel.dim();
    let window = Window::new(strip.lo(), strip.hi(), -7, 6)?;
    for trial in 0..states {
        // random amplitudes over cells -1, 0, 1 (rows -3..=2)
        let mut psi = StateVector::zero(window, Closure::Open)?;
        let mut cells = Vec::new();
        let mut stream = crate::rng::SplitMix64::new(0xf1be_c0de ^ trial as u64);
        for cell in -1..=1i64 {
            let mut v = nalgebra::DVector::<C64>::zeros(dim);
            for idx in 0..dim {
                let (re, im) = stream.next_gaussian_pair();
                v[idx] = C64::new(re, im);
                let site = fiber.site_of(idx, cell);
                psi.set(site.j, site.k, v[idx])?;
            }
            cells.push(v);
        }
        let direct = apply_u(field, &psi)?;
        let convolved = fiber.kernel.convolve(-1, &cells);
        let mut recon = StateVector::zero(window, Closure::Open)?;
        for (cell, vec) in &convolved {
            for idx in 0..dim {
                let site = fiber.site_of(idx, *cell);
                recon.set(site.j, site.k, vec[idx])?;
            }
        }
        let mut diff = recon;
        diff.add_scaled(&direct, C64::new(-1.0, 0.0))?;
        if diff.norm() > tol {
            return Err(Error::NotTranslationInvariant);
        }
    }
    Ok(())
}
