//! Five-diagonal fiber matrices and the gauge normalization of their
//! entry phases.
//!
//! Relabeling |j,2k⟩ → |2j⟩, |j,2k+1⟩ → |2j−1⟩ inside each fiber turns the
//! walk into a banded one-dimensional unitary whose columns read
//!
//! ```text
//!   col 4j:    row 4j-1: e^{-iy} r_{2j} q_{2j}     row 4j+2: -t_{2j} q_{2j}
//!   col 4j+1:  row 4j-1: conj(t_{2j}) q_{2j}       row 4j+2: e^{iy} conj(r_{2j}) q_{2j}
//!   col 4j+2:  row 4j+4: r_{2j+1} q_{2j+1}         row 4j+1: -t_{2j+1} q_{2j+1}
//!   col 4j+3:  row 4j+4: conj(t_{2j+1}) q_{2j+1}   row 4j+1: conj(r_{2j+1}) q_{2j+1}
//! ```
//!
//! On the strip the matrix acts on relabeled indices 4p_L−1 ..= 4p_R and is
//! unitary; its spectrum agrees with the Bloch symbol at the same y.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{SField, ScatterMatrix, StripSpec};
use crate::C64;

/// A fiber matrix over a relabeled index range.
#[derive(Debug, Clone)]
pub struct MQWMatrix {
    pub y: f64,
    /// First relabeled index of the range.
    pub lo_index: i64,
    pub matrix: DMatrix<C64>,
}

impl MQWMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn unitarity_defect(&self) -> f64 {
        crate::linalg::unitarity_defect(&self.matrix)
    }

    pub fn determinant(&self) -> C64 {
        self.matrix.clone().determinant()
    }
}

/// The relabeled index range of the strip: 4·p_left − 1 ..= 4·p_right.
pub fn mqw_strip_range(strip: &StripSpec) -> std::ops::RangeInclusive<i64> {
    4 * strip.p_left() - 1..=4 * strip.p_right()
}

/// Assemble the five-diagonal fiber matrix over `range` at quasimomentum y.
/// Entries whose row falls outside the range are dropped; on strip-closed
/// ranges of chiral fields they vanish identically.
pub fn mqw_matrix(
    field: &SField,
    y: f64,
    range: std::ops::RangeInclusive<i64>,
) -> Result<MQWMatrix> {
    if !field.is_translation_invariant() {
        return Err(Error::NotTranslationInvariant);
    }
    let lo_index = *range.start();
    let n = (*range.end() - lo_index + 1) as usize;
    let mut matrix = DMatrix::<C64>::zeros(n, n);
    let up = C64::from_polar(1.0, y);
    let down = C64::from_polar(1.0, -y);
    let mut put = |row: i64, col: i64, value: C64| {
        if row >= lo_index && row <= *range.end() && value.norm_sqr() > 0.0 {
            matrix[((row - lo_index) as usize, (col - lo_index) as usize)] = value;
        }
    };
    for col in range.clone() {
        let j = col.div_euclid(4);
        match col.rem_euclid(4) {
            0 => {
                let s = field.scatter_at(2 * j, 0);
                put(4 * j - 1, col, down * s.r() * s.q());
                put(4 * j + 2, col, -s.t() * s.q());
            }
            1 => {
                let s = field.scatter_at(2 * j, 0);
                put(4 * j - 1, col, s.t().conj() * s.q());
                put(4 * j + 2, col, up * s.r().conj() * s.q());
            }
            2 => {
                let s = field.scatter_at(2 * j + 1, 0);
                put(4 * j + 4, col, s.r() * s.q());
                put(4 * j + 1, col, -s.t() * s.q());
            }
            3 => {
                let s = field.scatter_at(2 * j + 1, 0);
                put(4 * j + 4, col, s.t().conj() * s.q());
                put(4 * j + 1, col, s.r().conj() * s.q());
            }
            _ => unreachable!(),
        }
    }
    Ok(MQWMatrix {
        y,
        lo_index,
        matrix,
    })
}

/// The diagonal conjugation realizing a phase gauge: column c carries λ_c.
#[derive(Debug, Clone)]
pub struct GaugeRecord {
    /// (column, λ); identity on unlisted columns.
    pub lambdas: Vec<(i64, C64)>,
}

impl GaugeRecord {
    pub fn is_identity(&self, tol: f64) -> bool {
        self.lambdas
            .iter()
            .all(|(_, l)| (l - C64::new(1.0, 0.0)).norm() <= tol)
    }
}

fn phase(z: C64) -> Option<C64> {
    let n = z.norm();
    if n == 0.0 {
        None
    } else {
        Some(z / n)
    }
}

/// Gauge the field so that `r` is real nonnegative on odd columns and `t`
/// lies on the positive imaginary axis on even columns, over the strip plus
/// a two-column margin. Returns the equivalent field and the diagonal
/// conjugation that realizes the equivalence.
pub fn gauge_normalize(field: &SField) -> Result<(SField, GaugeRecord)> {
    if !field.is_translation_invariant() {
        return Err(Error::NotTranslationInvariant);
    }
    let strip = field.strip();
    let c0 = strip.lo() - 2;
    let c1 = strip.hi() + 1;
    let minus_i = C64::new(0.0, -1.0);

    let mut lambdas = Vec::new();
    let mut lambda = C64::new(1.0, 0.0);
    lambdas.push((c0, lambda));
    for c in c0..=c1 {
        let s = field.scatter_at(c, 0);
        let next = if c.rem_euclid(2) == 0 {
            match phase(s.t()) {
                Some(p) => minus_i * lambda * p,
                None => lambda,
            }
        } else {
            match phase(s.r()) {
                Some(p) => lambda * p,
                None => lambda,
            }
        };
        lambdas.push((c + 1, next));
        lambda = next;
    }

    let lambda_at = |c: i64| -> C64 {
        lambdas
            .iter()
            .find(|(col, _)| *col == c)
            .map(|(_, l)| *l)
            .unwrap_or(C64::new(1.0, 0.0))
    };

    let mut overrides = Vec::new();
    for c in c0..=c1 {
        let s = field.scatter_at(c, 0);
        let factor = lambda_at(c + 1).conj() * lambda_at(c);
        let gauged = if c.rem_euclid(2) == 0 {
            ScatterMatrix::new(s.q(), s.r(), s.t() * factor)?
        } else {
            ScatterMatrix::new(s.q(), s.r() * factor, s.t())?
        };
        overrides.push(((c, 0), gauged));
    }
    let gauged = field.with_overrides(overrides)?;
    Ok((gauged, GaugeRecord { lambdas }))
}
