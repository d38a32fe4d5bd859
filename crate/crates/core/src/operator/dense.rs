//! Dense truncations of the network unitary for oracle tests.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSite, SField, StripSpec};
use crate::linalg::{self, UnitaryEigen};
use crate::operator::{apply_u, Closure, StateVector, Window};
use crate::C64;

/// A finite truncation of the model on an ordered site basis.
#[derive(Debug, Clone)]
pub struct DenseUnitary {
    pub basis: Vec<LatticeSite>,
    pub matrix: DMatrix<C64>,
    window: Window,
    closure: Closure,
}

impl DenseUnitary {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, site: LatticeSite) -> Option<usize> {
        self.window
            .index_of(site.j, site.k)
            .filter(|&i| i < self.basis.len())
    }

    /// Max-entry norm of `M† M − I`.
    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.matrix)
    }

    /// Certified eigendecomposition (eigenvalues projected to the circle).
    pub fn eigen(&self) -> Result<UnitaryEigen> {
        linalg::unitary_eigen(&self.matrix, 1e-10)
    }
}

/// Materialize the model on an arbitrary window by applying it to every
/// basis ket. Open windows produce genuine truncations and error out if the
/// model carries weight across the boundary; torus windows wrap rows.
pub fn dense_on_window(field: &SField, window: Window, closure: Closure) -> Result<DenseUnitary> {
    let basis: Vec<LatticeSite> = window.sites().collect();
    let n = basis.len();
    let mut matrix = DMatrix::<C64>::zeros(n, n);
    for (col, site) in basis.iter().enumerate() {
        let e = StateVector::basis_state(window, closure, *site)?;
        let image = apply_u(field, &e)?;
        for (row, amp) in image.amplitudes().iter().enumerate() {
            matrix[(row, col)] = *amp;
        }
    }
    Ok(DenseUnitary {
        basis,
        matrix,
        window,
        closure,
    })
}

/// Dense truncation of the strip-restricted model over a height window.
///
/// Torus closure wraps rows and requires an even height of at least 4
/// compatible with the field's vertical period; the result is then unitary.
pub fn strip_dense(
    field: &SField,
    strip: &StripSpec,
    heights: (i64, i64),
    closure: Closure,
) -> Result<DenseUnitary> {
    let (k0, k1) = heights;
    let window = Window::new(strip.lo(), strip.hi(), k0, k1)?;
    if closure == Closure::TorusVertical {
        let rows = window.rows();
        if rows % 2 != 0 || rows < 4 {
            return Err(Error::IncompatibleClosure(format!(
                "torus height {rows} must be even and at least 4"
            )));
        }
    }
    dense_on_window(field, window, closure)
}
