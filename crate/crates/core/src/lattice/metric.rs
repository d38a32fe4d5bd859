//! Sup metric on scattering fields over a finite window.

use crate::error::{Error, Result};
use crate::lattice::SField;

/// Rectangular window of scattering sites: columns `j0..=j1`, cell rows
/// `kc0..=kc1` (the matrix at cell row kc sits at lattice row 2·kc).
#[derive(Debug, Clone, Copy)]
pub struct ScatterWindow {
    pub j0: i64,
    pub j1: i64,
    pub kc0: i64,
    pub kc1: i64,
}

impl ScatterWindow {
    pub fn new(j0: i64, j1: i64, kc0: i64, kc1: i64) -> Self {
        Self { j0, j1, kc0, kc1 }
    }

    pub fn is_empty(&self) -> bool {
        self.j0 > self.j1 || self.kc0 > self.kc1
    }

    pub fn sites(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.kc0..=self.kc1).flat_map(move |kc| (self.j0..=self.j1).map(move |j| (j, kc)))
    }
}

/// `sup` over the window of `|q - q'| + sqrt(|r - r'|^2 + |t - t'|^2)`.
pub fn field_distance(a: &SField, b: &SField, window: &ScatterWindow) -> Result<f64> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut sup: f64 = 0.0;
    for (j, kc) in window.sites() {
        let d = a.scatter_at(j, kc).param_distance(&b.scatter_at(j, kc));
        sup = sup.max(d);
    }
    Ok(sup)
}
