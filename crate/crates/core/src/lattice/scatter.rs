//! One U(2) scattering matrix in (q, (r, t)) coordinates.

use crate::error::{Error, Result};
use crate::C64;
use nalgebra::Matrix2;

/// Tolerance at which realized matrices must be unitary.
pub const UNITARITY_TOL: f64 = 1e-12;

/// How far off the constraint manifold inputs may sit before being rejected;
/// anything closer is rescaled onto it exactly. Config files carry decimal
/// literals, so small defects are expected.
pub const NORMALIZE_TOL: f64 = 1e-9;

/// A U(2) scattering matrix `q * [[r, -t], [conj(t), conj(r)]]` with
/// `|q| = 1` and `|r|^2 + |t|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterMatrix {
    q: C64,
    r: C64,
    t: C64,
}

/// Normalizing constructor; rejects inputs more than [`NORMALIZE_TOL`] off
/// the constraint manifold.
pub fn build_scatter(q: C64, r: C64, t: C64) -> Result<ScatterMatrix> {
    ScatterMatrix::new(q, r, t)
}

impl ScatterMatrix {
    pub fn new(q: C64, r: C64, t: C64) -> Result<Self> {
        let q_mod = q.norm();
        let rt_norm_sq = r.norm_sqr() + t.norm_sqr();
        let q_defect = (q_mod - 1.0).abs();
        let rt_defect = (rt_norm_sq - 1.0).abs();
        if q_defect > NORMALIZE_TOL || rt_defect > NORMALIZE_TOL {
            return Err(Error::MalformedScatter {
                q_defect,
                rt_defect,
                tol: NORMALIZE_TOL,
            });
        }
        let scale = rt_norm_sq.sqrt();
        Ok(Self {
            q: q / q_mod,
            r: r / scale,
            t: t / scale,
        })
    }

    /// The identity matrix: q = 1, r = 1, t = 0 (diagonal).
    pub fn identity() -> Self {
        Self {
            q: C64::new(1.0, 0.0),
            r: C64::new(1.0, 0.0),
            t: C64::new(0.0, 0.0),
        }
    }

    /// The pure left-turner entry: q = 1, r = 0, t = 1 (off-diagonal).
    pub fn left_turner() -> Self {
        Self {
            q: C64::new(1.0, 0.0),
            r: C64::new(0.0, 0.0),
            t: C64::new(1.0, 0.0),
        }
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn r(&self) -> C64 {
        self.r
    }

    pub fn t(&self) -> C64 {
        self.t
    }

    /// Realized 2×2 matrix `q [[r, -t], [conj(t), conj(r)]]`.
    pub fn matrix(&self) -> Matrix2<C64> {
        Matrix2::new(
            self.q * self.r,
            -self.q * self.t,
            self.q * self.t.conj(),
            self.q * self.r.conj(),
        )
    }

    /// `t = 0` up to `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.t.norm() <= tol
    }

    /// `r = 0` up to `tol`.
    pub fn is_off_diagonal(&self, tol: f64) -> bool {
        self.r.norm() <= tol
    }

    /// Max-entry norm of `M* M - I` for the realized matrix.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.matrix();
        let d = m.adjoint() * m - Matrix2::identity();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Parameter-space distance `|q - q'| + sqrt(|r - r'|^2 + |t - t'|^2)`.
    pub fn param_distance(&self, other: &Self) -> f64 {
        (self.q - other.q).norm()
            + ((self.r - other.r).norm_sqr() + (self.t - other.t).norm_sqr()).sqrt()
    }

    /// Zero out a residual `r` below `tol` and restore `|t| = 1`; used when
    /// overrides target chirally forced columns. Errors if `r` is too large.
    pub(crate) fn snapped_off_diagonal(&self, tol: f64) -> Option<Self> {
        if self.r.norm() > tol {
            return None;
        }
        let t = if self.t.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            self.t / self.t.norm()
        };
        Some(Self {
            q: self.q,
            r: C64::new(0.0, 0.0),
            t,
        })
    }

    pub(crate) fn snapped_diagonal(&self, tol: f64) -> Option<Self> {
        if self.t.norm() > tol {
            return None;
        }
        let r = if self.r.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            self.r / self.r.norm()
        };
        Some(Self {
            q: self.q,
            r,
            t: C64::new(0.0, 0.0),
        })
    }
}
