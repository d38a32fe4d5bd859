//! Geometry of the invariant interface strip.

use crate::error::{Error, Result};

/// Column range of the invariant strip between the two chiral phases.
///
/// `lo` is the largest even integer ≤ `n_left`, `hi` the smallest even
/// integer ≥ `n_right`; the strip consists of columns `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripSpec {
    n_left: i64,
    n_right: i64,
    lo: i64,
    hi: i64,
}

impl StripSpec {
    pub fn new(n_left: i64, n_right: i64) -> Result<Self> {
        if n_left > n_right {
            return Err(Error::BadBounds { n_left, n_right });
        }
        let lo = 2 * n_left.div_euclid(2);
        let hi = -2 * (-n_right).div_euclid(2);
        Ok(Self {
            n_left,
            n_right,
            lo,
            hi,
        })
    }

    pub fn n_left(&self) -> i64 {
        self.n_left
    }

    pub fn n_right(&self) -> i64 {
        self.n_right
    }

    /// Leftmost strip column (even).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Rightmost strip column (even).
    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn width(&self) -> i64 {
        self.hi - self.lo + 1
    }

    pub fn columns(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// `lo / 2`; the flux blocks run over plaquette columns `p_left..p_right`.
    pub fn p_left(&self) -> i64 {
        self.lo / 2
    }

    /// `hi / 2`.
    pub fn p_right(&self) -> i64 {
        self.hi / 2
    }
}
